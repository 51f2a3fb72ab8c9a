// Copyright 2026 The SynonymNet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYNONYMNET_CORPUS_H_
#define SYNONYMNET_CORPUS_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synonymnet/rng.h"

namespace synonymnet {

using TokenId = int32_t;

// Token <-> id map. Ids 0 and 1 are reserved for the unknown and padding
// tokens; every other id maps to exactly one token.
class Vocabulary {
 public:
  static constexpr TokenId kUnk = 0;
  static constexpr TokenId kPad = 1;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kPadToken = "<pad>";

  Vocabulary();

  // Returns the existing id or assigns the next one.
  TokenId Add(std::string_view token);
  std::optional<TokenId> Find(std::string_view token) const;
  // kUnk for tokens not in the vocabulary.
  TokenId Id(std::string_view token) const;
  const std::string &Token(TokenId id) const { return tokens_.at(id); }
  size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, TokenId> ids_;
  std::vector<std::string> tokens_;
};

// A token window around one entity mention.
struct ContextWindow {
  std::vector<TokenId> token_ids;
  size_t entity_pos = 0;
  uint32_t source_line = 0;
};

// Where an entity occurs: corpus line index and token position.
struct Occurrence {
  uint32_t line = 0;
  uint32_t pos = 0;
};

enum class Split : uint8_t { kTrain = 0, kValid = 1, kTest = 2 };
const char *SplitName(Split split);

// Groups of mutually synonymous entities with a per-synset split label.
// Every entity belongs to at most one synset.
class SynsetStore {
 public:
  // Appends a synset; entities already present elsewhere are ignored.
  // Returns the number of entities actually added.
  size_t AddSynset(const std::vector<TokenId> &entities);

  size_t size() const { return synsets_.size(); }
  bool empty() const { return synsets_.empty(); }
  const std::vector<TokenId> &synset(size_t i) const { return synsets_[i]; }
  Split split(size_t i) const { return splits_[i]; }
  void set_split(size_t i, Split s) { splits_[i] = s; }

  std::optional<size_t> SynsetOf(TokenId entity) const;
  bool Contains(TokenId entity) const { return SynsetOf(entity).has_value(); }
  bool AreSynonyms(TokenId a, TokenId b) const;
  // Entities of all synsets with the given split, in synset order.
  std::vector<TokenId> Entities(Split split) const;
  std::vector<TokenId> AllEntities() const;
  std::vector<size_t> SynsetsIn(Split split) const;

 private:
  std::vector<std::vector<TokenId>> synsets_;
  std::vector<Split> splits_;
  std::unordered_map<TokenId, size_t> owner_;
};

// Deduplicated, tokenised corpus with an occurrence index for synset
// entities.
struct Corpus {
  Vocabulary vocab;
  std::vector<std::vector<TokenId>> lines;
  std::unordered_map<TokenId, std::vector<Occurrence>> occurrences;
  SynsetStore synsets;
  uint32_t min_count = 5;

  const std::vector<Occurrence> &OccurrencesOf(TokenId entity) const;
  bool HasContexts(TokenId entity) const;
};

struct IngestStats {
  size_t lines_read = 0;
  size_t duplicate_lines = 0;
  size_t entities_dropped = 0;
  std::vector<std::string> warnings;
};

// Reads one whitespace-tokenised sentence per line and one tab-separated
// synset per line. Exact duplicate lines are dropped; synset entities that
// are absent from the corpus or occur fewer than `min_count` times are
// dropped with a warning.
Corpus Ingest(std::istream &corpus, std::istream &synsets, uint32_t min_count,
              IngestStats *stats = nullptr);
Corpus IngestFiles(const std::string &corpus_path,
                   const std::string &synset_path, uint32_t min_count,
                   IngestStats *stats = nullptr);

// Window of at most `max_len` tokens around position `pos` of `line`:
// floor((max_len - 1) / 2) tokens on the left and the rest on the right,
// shifted inward where the sentence boundary cuts one side short.
ContextWindow MakeWindow(const std::vector<TokenId> &line, size_t pos,
                         size_t max_len, uint32_t line_id);

// Samples `count` occurrences of `entity` (without replacement when it has
// at least `count` occurrences, with replacement otherwise) and windows
// each. Throws DataError when the entity has no occurrences.
std::vector<ContextWindow> RetrieveContexts(const Corpus &corpus,
                                            TokenId entity, size_t count,
                                            size_t max_len, Rng &rng);

struct TrainingPair {
  TokenId e = 0;
  TokenId k = 0;
  int label = 0;  // 1 iff e and k share a synset
};

struct TrainingTriplet {
  TokenId anchor = 0;
  TokenId positive = 0;
  TokenId negative = 0;
};

// Ordered within-synset pairs of the synsets in `split`, in synset order.
std::vector<std::pair<TokenId, TokenId>> PositivePairs(const SynsetStore &store,
                                                       Split split);

// `n` training pairs from the train split: round(n / (1 + neg_ratio))
// positives drawn uniformly from the ordered within-synset pairs, each
// followed by its share of negatives that keep the positive's first entity
// and pair it with a uniformly drawn non-synonym train entity.
std::vector<TrainingPair> SamplePairs(const SynsetStore &store, size_t n,
                                      size_t neg_ratio, Rng &rng);

// `n` triplets: a uniform ordered positive pair plus a uniform non-synonym
// train entity as the negative.
std::vector<TrainingTriplet> SampleTriplets(const SynsetStore &store, size_t n,
                                            Rng &rng);

// Assigns every synset to test, valid or train: round(N * test_frac) test
// and round(N * valid_frac) valid synsets are drawn at random. valid_frac
// may be 0 (no validation split); test_frac must be in (0, 1).
void SplitSynsets(SynsetStore &store, double valid_frac, double test_frac,
                  Rng &rng);

// Binary index: vocabulary, corpus lines and synsets with splits. The
// occurrence index is rebuilt on load. Little-endian; layout in README.
void SaveIndex(const Corpus &corpus, const std::string &path);
Corpus LoadIndex(const std::string &path);

}  // namespace synonymnet

#endif  // SYNONYMNET_CORPUS_H_
