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

#ifndef SYNONYMNET_EVAL_H_
#define SYNONYMNET_EVAL_H_

#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "synonymnet/corpus.h"
#include "synonymnet/embeddings.h"
#include "synonymnet/model.h"

namespace synonymnet {

// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
// positive scores higher, ties counting one half. Throws DataError when
// either class is missing.
double Auc(std::span<const double> scores, std::span<const int> labels);

// One ranked retrieval list and its relevant items.
struct RankedQuery {
  std::vector<TokenId> ranked;
  std::vector<TokenId> relevant;
};

// Average precision: mean over relevant items of the precision at their
// rank; unretrieved relevant items contribute 0.
double AveragePrecision(const RankedQuery &query);
double MeanAveragePrecision(std::span<const RankedQuery> queries);
// Averages over queries. P@K divides hits in the top K by K; R@K by the
// number of relevant items.
double PrecisionAtK(std::span<const RankedQuery> queries, size_t k);
double RecallAtK(std::span<const RankedQuery> queries, size_t k);
// Harmonic mean of the averaged P@K and R@K; 0 when both are 0.
double F1AtK(std::span<const RankedQuery> queries, size_t k);

struct EvalReport {
  double auc = 0.0;
  double map = 0.0;
  std::map<size_t, double> p_at_k, r_at_k, f1_at_k;
  size_t positive_pairs = 0;
  size_t negative_pairs = 0;
  size_t queries = 0;
};

inline constexpr size_t kReportKs[] = {1, 5, 10};

// One "key=value" line per metric, values to 6 decimals.
std::string FormatReport(const EvalReport &report);

// Encoded contexts per entity (P x d_ce each).
using EncodedTable = std::unordered_map<TokenId, Matrix>;

// Samples contexts from stream (seed, "eval.contexts", entity) and encodes
// them. Entities are processed in parallel; the result does not depend on
// the thread count.
EncodedTable EncodeEntities(const Model &model, const Corpus &corpus,
                            const Matrix &pretrained, std::span<const TokenId> entities,
                            uint64_t seed);

using EntityPair = std::pair<TokenId, TokenId>;

// Scores every pair from an encoded table; the parallel and serial versions
// return identical vectors.
std::vector<double> ScorePairs(const Model &model, const EncodedTable &encoded,
                               std::span<const EntityPair> pairs);
std::vector<double> ScorePairsSerial(const Model &model, const EncodedTable &encoded,
                                     std::span<const EntityPair> pairs);

// Score of one pair with contexts sampled as in EncodeEntities.
double ScorePair(const Model &model, const Corpus &corpus, const Matrix &pretrained,
                 TokenId a, TokenId b, uint64_t seed);

// Positives: every unordered within-synset pair of `split`. Negatives: the
// same number of distinct unordered cross-synset pairs within the split,
// drawn from stream (seed, "eval.negatives"). Labels align with pairs.
struct EvalPairs {
  std::vector<EntityPair> pairs;
  std::vector<int> labels;
};
EvalPairs BuildEvalPairs(const SynsetStore &store, Split split, uint64_t seed);

// Full evaluation on `split`: pair AUC, plus ranking metrics where every
// entity of the split with at least one synonym there is a query whose
// candidates are its `topk` cosine neighbours within the split, reranked
// by model score.
EvalReport Evaluate(const Model &model, const Corpus &corpus, const Matrix &pretrained,
                    const EmbeddingTable &table, Split split, uint64_t seed,
                    size_t topk = 50);

// AUC over BuildEvalPairs only (training-time validation).
double PairAuc(const Model &model, const Corpus &corpus, const Matrix &pretrained,
               Split split, uint64_t seed);

struct ScoredCandidate {
  TokenId entity = 0;
  double cosine = 0.0;
  double score = 0.0;
};

struct DiscoveryResult {
  TokenId query = 0;
  std::vector<ScoredCandidate> candidates;  // cosine order
  std::vector<ScoredCandidate> ranked;      // model score order
  double threshold = 0.8;
  std::vector<ScoredCandidate> accepted;    // ranked entries with score > threshold
};

// Candidate generation by cosine neighbours among `universe`, then reranking
// by model score. Ties in score keep the cosine order.
DiscoveryResult Discover(const Model &model, const Corpus &corpus,
                         const Matrix &pretrained, const EmbeddingTable &table,
                         TokenId query, std::span<const TokenId> universe, size_t k,
                         double threshold, uint64_t seed);

// Two blocks: cosine candidates, then accepted entities with model scores.
std::string FormatDiscovery(const DiscoveryResult &result, const Vocabulary &vocab);

}  // namespace synonymnet

#endif  // SYNONYMNET_EVAL_H_
