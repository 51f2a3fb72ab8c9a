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

#include "synonymnet/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "synonymnet/error.h"

namespace synonymnet {
namespace {

constexpr char kIndexMagic[8] = {'S', 'Y', 'N', 'I', 'D', 'X', '0', '1'};

std::string_view TrimLine(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

void BuildOccurrences(Corpus &corpus) {
  corpus.occurrences.clear();
  for (TokenId e : corpus.synsets.AllEntities()) corpus.occurrences[e];
  for (size_t l = 0; l < corpus.lines.size(); ++l) {
    const auto &line = corpus.lines[l];
    for (size_t p = 0; p < line.size(); ++p) {
      auto it = corpus.occurrences.find(line[p]);
      if (it != corpus.occurrences.end()) {
        it->second.push_back({static_cast<uint32_t>(l), static_cast<uint32_t>(p)});
      }
    }
  }
}

class Writer {
 public:
  explicit Writer(const std::string &path) : out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot open " + path + " for writing");
  }
  void Bytes(const void *p, size_t n) {
    out_.write(static_cast<const char *>(p), static_cast<std::streamsize>(n));
  }
  template <typename T>
  void Put(T v) {
    Bytes(&v, sizeof(v));
  }
  void Str(const std::string &s) {
    Put<uint32_t>(static_cast<uint32_t>(s.size()));
    Bytes(s.data(), s.size());
  }
  void Ids(const std::vector<TokenId> &ids) {
    Put<uint32_t>(static_cast<uint32_t>(ids.size()));
    Bytes(ids.data(), ids.size() * sizeof(TokenId));
  }
  void Close(const std::string &path) {
    out_.close();
    if (!out_) throw DataError("failed writing " + path);
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string &path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open index " + path);
  }
  void Bytes(void *p, size_t n, const char *what) {
    in_.read(static_cast<char *>(p), static_cast<std::streamsize>(n));
    if (!in_) throw DataError("index " + path_ + ": truncated while reading " + what);
  }
  template <typename T>
  T Get(const char *what) {
    T v;
    Bytes(&v, sizeof(v), what);
    return v;
  }
  std::string Str(const char *what) {
    std::string s(Get<uint32_t>(what), '\0');
    Bytes(s.data(), s.size(), what);
    return s;
  }
  std::vector<TokenId> Ids(const char *what) {
    std::vector<TokenId> ids(Get<uint32_t>(what));
    Bytes(ids.data(), ids.size() * sizeof(TokenId), what);
    return ids;
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace

Vocabulary::Vocabulary() {
  Add(kUnkToken);
  Add(kPadToken);
}

TokenId Vocabulary::Add(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  TokenId id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::Find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::Id(std::string_view token) const {
  return Find(token).value_or(kUnk);
}

const char *SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

size_t SynsetStore::AddSynset(const std::vector<TokenId> &entities) {
  std::vector<TokenId> kept;
  for (TokenId e : entities) {
    if (owner_.count(e) != 0) continue;
    if (std::find(kept.begin(), kept.end(), e) != kept.end()) continue;
    kept.push_back(e);
  }
  if (kept.empty()) return 0;
  for (TokenId e : kept) owner_[e] = synsets_.size();
  synsets_.push_back(std::move(kept));
  splits_.push_back(Split::kTrain);
  return synsets_.back().size();
}

std::optional<size_t> SynsetStore::SynsetOf(TokenId entity) const {
  auto it = owner_.find(entity);
  if (it == owner_.end()) return std::nullopt;
  return it->second;
}

bool SynsetStore::AreSynonyms(TokenId a, TokenId b) const {
  auto sa = SynsetOf(a);
  auto sb = SynsetOf(b);
  return sa && sb && *sa == *sb;
}

std::vector<TokenId> SynsetStore::Entities(Split split) const {
  std::vector<TokenId> out;
  for (size_t i = 0; i < synsets_.size(); ++i) {
    if (splits_[i] == split) out.insert(out.end(), synsets_[i].begin(), synsets_[i].end());
  }
  return out;
}

std::vector<TokenId> SynsetStore::AllEntities() const {
  std::vector<TokenId> out;
  for (const auto &s : synsets_) out.insert(out.end(), s.begin(), s.end());
  return out;
}

std::vector<size_t> SynsetStore::SynsetsIn(Split split) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < synsets_.size(); ++i) {
    if (splits_[i] == split) out.push_back(i);
  }
  return out;
}

const std::vector<Occurrence> &Corpus::OccurrencesOf(TokenId entity) const {
  static const std::vector<Occurrence> kNone;
  auto it = occurrences.find(entity);
  return it == occurrences.end() ? kNone : it->second;
}

bool Corpus::HasContexts(TokenId entity) const {
  return !OccurrencesOf(entity).empty();
}

Corpus Ingest(std::istream &corpus_in, std::istream &synsets_in,
              uint32_t min_count, IngestStats *stats) {
  IngestStats local;
  IngestStats &st = stats != nullptr ? *stats : local;
  Corpus corpus;
  corpus.min_count = min_count;

  std::unordered_set<std::string> seen;
  std::string raw;
  while (std::getline(corpus_in, raw)) {
    ++st.lines_read;
    std::string_view line = TrimLine(raw);
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    if (!seen.emplace(line).second) {
      ++st.duplicate_lines;
      continue;
    }
    std::vector<TokenId> ids;
    ids.reserve(tokens.size());
    for (auto tok : tokens) ids.push_back(corpus.vocab.Add(tok));
    corpus.lines.push_back(std::move(ids));
  }

  std::vector<uint32_t> freq(corpus.vocab.size(), 0);
  for (const auto &line : corpus.lines) {
    for (TokenId id : line) ++freq[id];
  }

  size_t line_no = 0;
  while (std::getline(synsets_in, raw)) {
    ++line_no;
    std::string_view line = TrimLine(raw);
    std::vector<TokenId> members;
    size_t start = 0;
    while (start <= line.size()) {
      size_t tab = line.find('\t', start);
      if (tab == std::string_view::npos) tab = line.size();
      std::string_view name = Trim(line.substr(start, tab - start));
      start = tab + 1;
      if (name.empty()) continue;
      auto id = corpus.vocab.Find(name);
      const std::string where = "synset line " + std::to_string(line_no) + ": entity '" +
                                std::string(name) + "' ";
      if (!id) {
        st.warnings.push_back(where + "not in corpus; dropped");
        ++st.entities_dropped;
      } else if (freq[*id] < min_count) {
        st.warnings.push_back(where + "occurs " + std::to_string(freq[*id]) +
                              " times (< " + std::to_string(min_count) + "); dropped");
        ++st.entities_dropped;
      } else if (corpus.synsets.Contains(*id)) {
        st.warnings.push_back(where + "already belongs to another synset; dropped");
        ++st.entities_dropped;
      } else {
        members.push_back(*id);
      }
    }
    corpus.synsets.AddSynset(members);
  }

  BuildOccurrences(corpus);
  return corpus;
}

Corpus IngestFiles(const std::string &corpus_path, const std::string &synset_path,
                   uint32_t min_count, IngestStats *stats) {
  std::ifstream corpus(corpus_path);
  if (!corpus) throw DataError("cannot read corpus file " + corpus_path);
  std::ifstream synsets(synset_path);
  if (!synsets) throw DataError("cannot read synset file " + synset_path);
  return Ingest(corpus, synsets, min_count, stats);
}

ContextWindow MakeWindow(const std::vector<TokenId> &line, size_t pos,
                         size_t max_len, uint32_t line_id) {
  if (pos >= line.size()) throw DataError("entity position beyond end of line");
  if (max_len == 0) throw UsageError("maximum context length must be >= 1");
  const size_t len = line.size();
  size_t start = 0;
  size_t end = len;
  if (len > max_len) {
    const size_t left = (max_len - 1) / 2;
    start = pos >= left ? pos - left : 0;
    end = start + max_len;
    if (end > len) {
      end = len;
      start = len - max_len;
    }
  }
  ContextWindow w;
  w.token_ids.assign(line.begin() + static_cast<std::ptrdiff_t>(start),
                     line.begin() + static_cast<std::ptrdiff_t>(end));
  w.entity_pos = pos - start;
  w.source_line = line_id;
  return w;
}

std::vector<ContextWindow> RetrieveContexts(const Corpus &corpus, TokenId entity,
                                            size_t count, size_t max_len, Rng &rng) {
  const auto &occ = corpus.OccurrencesOf(entity);
  if (occ.empty()) {
    const std::string name = entity >= 0 && static_cast<size_t>(entity) < corpus.vocab.size()
                                 ? corpus.vocab.Token(entity)
                                 : std::to_string(entity);
    throw DataError("entity '" + name + "' has no contexts in the corpus");
  }
  std::vector<size_t> picks;
  picks.reserve(count);
  if (occ.size() >= count) {
    // Partial Fisher-Yates: the first `count` slots are a uniform subset.
    std::vector<size_t> order(occ.size());
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = 0; i < count; ++i) {
      std::swap(order[i], order[i + UniformIndex(rng, order.size() - i)]);
      picks.push_back(order[i]);
    }
  } else {
    for (size_t i = 0; i < count; ++i) picks.push_back(UniformIndex(rng, occ.size()));
  }
  std::vector<ContextWindow> out;
  out.reserve(count);
  for (size_t idx : picks) {
    const Occurrence &o = occ[idx];
    out.push_back(MakeWindow(corpus.lines[o.line], o.pos, max_len, o.line));
  }
  return out;
}

std::vector<std::pair<TokenId, TokenId>> PositivePairs(const SynsetStore &store,
                                                       Split split) {
  std::vector<std::pair<TokenId, TokenId>> out;
  for (size_t s : store.SynsetsIn(split)) {
    const auto &members = store.synset(s);
    for (TokenId a : members) {
      for (TokenId b : members) {
        if (a != b) out.emplace_back(a, b);
      }
    }
  }
  return out;
}

namespace {

TokenId DrawNegative(const SynsetStore &store, const std::vector<TokenId> &pool,
                     TokenId anchor, Rng &rng) {
  std::vector<TokenId> candidates;
  candidates.reserve(pool.size());
  for (TokenId k : pool) {
    if (k != anchor && !store.AreSynonyms(anchor, k)) candidates.push_back(k);
  }
  if (candidates.empty()) {
    throw DataError("no non-synonym train entity available for negative sampling");
  }
  return candidates[UniformIndex(rng, candidates.size())];
}

}  // namespace

std::vector<TrainingPair> SamplePairs(const SynsetStore &store, size_t n,
                                      size_t neg_ratio, Rng &rng) {
  const auto positives = PositivePairs(store, Split::kTrain);
  if (positives.empty()) throw DataError("no positive train pair available");
  const auto pool = store.Entities(Split::kTrain);
  const size_t num_pos = static_cast<size_t>(
      std::llround(static_cast<double>(n) / static_cast<double>(1 + neg_ratio)));
  std::vector<TrainingPair> out;
  out.reserve(n);
  size_t negatives_left = n - std::min(n, num_pos);
  for (size_t i = 0; i < num_pos && out.size() < n; ++i) {
    const auto &[e, k] = positives[UniformIndex(rng, positives.size())];
    out.push_back({e, k, 1});
    for (size_t r = 0; r < neg_ratio && negatives_left > 0; ++r, --negatives_left) {
      out.push_back({e, DrawNegative(store, pool, e, rng), 0});
    }
  }
  // Rounding can leave a few negatives; anchor them on random positives.
  while (negatives_left > 0) {
    const TokenId e = positives[UniformIndex(rng, positives.size())].first;
    out.push_back({e, DrawNegative(store, pool, e, rng), 0});
    --negatives_left;
  }
  return out;
}

std::vector<TrainingTriplet> SampleTriplets(const SynsetStore &store, size_t n,
                                            Rng &rng) {
  const auto positives = PositivePairs(store, Split::kTrain);
  if (positives.empty()) throw DataError("no positive train pair available");
  const auto pool = store.Entities(Split::kTrain);
  std::vector<TrainingTriplet> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const auto &[e, k] = positives[UniformIndex(rng, positives.size())];
    out.push_back({e, k, DrawNegative(store, pool, e, rng)});
  }
  return out;
}

void SplitSynsets(SynsetStore &store, double valid_frac, double test_frac, Rng &rng) {
  if (!(test_frac > 0.0 && test_frac < 1.0) || !(valid_frac >= 0.0 && valid_frac < 1.0) ||
      valid_frac + test_frac >= 1.0) {
    throw UsageError("split fractions must satisfy 0 <= valid < 1, 0 < test < 1, "
                     "valid + test < 1");
  }
  const size_t n = store.size();
  const auto n_test = static_cast<size_t>(std::llround(n * test_frac));
  const auto n_valid = static_cast<size_t>(std::llround(n * valid_frac));
  if (n_test == 0 || (valid_frac > 0.0 && n_valid == 0) || n_test + n_valid >= n) {
    throw DataError("too few synsets (" + std::to_string(n) +
                    ") to populate train/valid/test splits");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (size_t i = 0; i < n; ++i) {
    Split s = i < n_test ? Split::kTest : i < n_test + n_valid ? Split::kValid : Split::kTrain;
    store.set_split(order[i], s);
  }
}

void SaveIndex(const Corpus &corpus, const std::string &path) {
  Writer w(path);
  w.Bytes(kIndexMagic, sizeof(kIndexMagic));
  w.Put<uint32_t>(corpus.min_count);
  w.Put<uint64_t>(corpus.vocab.size());
  for (size_t i = 0; i < corpus.vocab.size(); ++i) {
    w.Str(corpus.vocab.Token(static_cast<TokenId>(i)));
  }
  w.Put<uint64_t>(corpus.lines.size());
  for (const auto &line : corpus.lines) w.Ids(line);
  w.Put<uint64_t>(corpus.synsets.size());
  for (size_t i = 0; i < corpus.synsets.size(); ++i) {
    w.Put<uint8_t>(static_cast<uint8_t>(corpus.synsets.split(i)));
    w.Ids(corpus.synsets.synset(i));
  }
  w.Close(path);
}

Corpus LoadIndex(const std::string &path) {
  Reader r(path);
  char magic[sizeof(kIndexMagic)];
  r.Bytes(magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0) {
    throw DataError(path + " is not a synonymnet index (bad magic)");
  }
  Corpus corpus;
  corpus.min_count = r.Get<uint32_t>("min_count");
  const auto vocab_size = r.Get<uint64_t>("vocabulary size");
  for (uint64_t i = 0; i < vocab_size; ++i) {
    std::string tok = r.Str("vocabulary token");
    if (i < 2) {
      if (tok != corpus.vocab.Token(static_cast<TokenId>(i))) {
        throw DataError("index " + path + ": reserved token mismatch");
      }
      continue;
    }
    if (corpus.vocab.Add(tok) != static_cast<TokenId>(i)) {
      throw DataError("index " + path + ": duplicate vocabulary token '" + tok + "'");
    }
  }
  const auto num_lines = r.Get<uint64_t>("line count");
  corpus.lines.reserve(num_lines);
  for (uint64_t i = 0; i < num_lines; ++i) {
    corpus.lines.push_back(r.Ids("line"));
    for (TokenId id : corpus.lines.back()) {
      if (id < 0 || static_cast<uint64_t>(id) >= vocab_size) {
        throw DataError("index " + path + ": token id out of range");
      }
    }
  }
  const auto num_synsets = r.Get<uint64_t>("synset count");
  for (uint64_t i = 0; i < num_synsets; ++i) {
    const auto split = r.Get<uint8_t>("synset split");
    if (split > 2) throw DataError("index " + path + ": bad split label");
    auto members = r.Ids("synset");
    if (corpus.synsets.AddSynset(members) != members.size()) {
      throw DataError("index " + path + ": entity shared between synsets");
    }
    corpus.synsets.set_split(corpus.synsets.size() - 1, static_cast<Split>(split));
  }
  BuildOccurrences(corpus);
  return corpus;
}

}  // namespace synonymnet
