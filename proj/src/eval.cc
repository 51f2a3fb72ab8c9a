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

#include "synonymnet/eval.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "synonymnet/error.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

size_t HitsAtK(const RankedQuery &q, size_t k) {
  std::unordered_set<TokenId> rel(q.relevant.begin(), q.relevant.end());
  size_t hits = 0;
  for (size_t i = 0; i < std::min(k, q.ranked.size()); ++i) hits += rel.count(q.ranked[i]);
  return hits;
}

// Effective matcher weights, computed once per scoring call.
struct Matcher {
  Matrix w;
  const LeakyUnit *leaky;
  explicit Matcher(const Model &model)
      : w(EffectiveBilinear(model)),
        leaky(model.config.leaky ? &model.params.leaky : nullptr) {}
  double operator()(const Matrix &h, const Matrix &g) const {
    return Match(h, g, w, leaky).score;
  }
};

const Matrix &Lookup(const EncodedTable &encoded, TokenId e) {
  auto it = encoded.find(e);
  if (it == encoded.end()) {
    throw DataError("entity id " + std::to_string(e) + " has no encoded contexts");
  }
  return it->second;
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ShapeError("auc: " + std::to_string(scores.size()) + " scores but " +
                     std::to_string(labels.size()) + " labels");
  }
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Doubled mid-ranks keep every quantity an exact integer.
  int64_t rank2_pos = 0;
  int64_t n_pos = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const int64_t mid2 = static_cast<int64_t>(i + 1 + j);
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) {
        rank2_pos += mid2;
        ++n_pos;
      }
    }
    i = j;
  }
  const int64_t n_neg = static_cast<int64_t>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DataError("auc is undefined without both positive and negative examples");
  }
  const int64_t u2 = rank2_pos - n_pos * (n_pos + 1);
  return static_cast<double>(u2) / static_cast<double>(2 * n_pos * n_neg);
}

double AveragePrecision(const RankedQuery &q) {
  if (q.relevant.empty()) return 0.0;
  std::unordered_set<TokenId> rel(q.relevant.begin(), q.relevant.end());
  double sum = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < q.ranked.size(); ++i) {
    if (rel.count(q.ranked[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(rel.size());
}

double MeanAveragePrecision(std::span<const RankedQuery> queries) {
  if (queries.empty()) return 0.0;
  double s = 0.0;
  for (const auto &q : queries) s += AveragePrecision(q);
  return s / static_cast<double>(queries.size());
}

double PrecisionAtK(std::span<const RankedQuery> queries, size_t k) {
  if (queries.empty() || k == 0) return 0.0;
  double s = 0.0;
  for (const auto &q : queries) s += static_cast<double>(HitsAtK(q, k)) / static_cast<double>(k);
  return s / static_cast<double>(queries.size());
}

double RecallAtK(std::span<const RankedQuery> queries, size_t k) {
  if (queries.empty()) return 0.0;
  double s = 0.0;
  for (const auto &q : queries) {
    std::unordered_set<TokenId> rel(q.relevant.begin(), q.relevant.end());
    if (!rel.empty()) s += static_cast<double>(HitsAtK(q, k)) / static_cast<double>(rel.size());
  }
  return s / static_cast<double>(queries.size());
}

double F1AtK(std::span<const RankedQuery> queries, size_t k) {
  const double p = PrecisionAtK(queries, k);
  const double r = RecallAtK(queries, k);
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

std::string FormatReport(const EvalReport &r) {
  std::ostringstream o;
  o << "auc=" << Fixed6(r.auc) << '\n' << "map=" << Fixed6(r.map) << '\n';
  for (size_t k : kReportKs) {
    auto get = [k](const std::map<size_t, double> &m) {
      auto it = m.find(k);
      return it == m.end() ? 0.0 : it->second;
    };
    o << "p@" << k << '=' << Fixed6(get(r.p_at_k)) << '\n'
      << "r@" << k << '=' << Fixed6(get(r.r_at_k)) << '\n'
      << "f1@" << k << '=' << Fixed6(get(r.f1_at_k)) << '\n';
  }
  o << "positive_pairs=" << r.positive_pairs << '\n'
    << "negative_pairs=" << r.negative_pairs << '\n'
    << "queries=" << r.queries << '\n';
  return o.str();
}

EncodedTable EncodeEntities(const Model &model, const Corpus &corpus,
                            const Matrix &pretrained, std::span<const TokenId> entities,
                            uint64_t seed) {
  const long n = static_cast<long>(entities.size());
  std::vector<Matrix> out(entities.size());
  std::vector<std::exception_ptr> errors(entities.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      Rng rng = MakeStream(seed, "eval.contexts", static_cast<uint64_t>(entities[i]));
      auto windows = RetrieveContexts(corpus, entities[i], model.config.contexts,
                                      model.config.max_len, rng);
      out[i] = EncodeContexts(model, pretrained, windows);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  EncodedTable table;
  for (size_t i = 0; i < entities.size(); ++i) table.emplace(entities[i], std::move(out[i]));
  return table;
}

std::vector<double> ScorePairs(const Model &model, const EncodedTable &encoded,
                               std::span<const EntityPair> pairs) {
  const Matcher match(model);
  const long n = static_cast<long>(pairs.size());
  std::vector<double> out(pairs.size());
  for (const auto &[a, b] : pairs) {
    Lookup(encoded, a);
    Lookup(encoded, b);
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    out[i] = match(encoded.at(pairs[i].first), encoded.at(pairs[i].second));
  }
  return out;
}

std::vector<double> ScorePairsSerial(const Model &model, const EncodedTable &encoded,
                                     std::span<const EntityPair> pairs) {
  const Matcher match(model);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto &[a, b] : pairs) out.push_back(match(Lookup(encoded, a), Lookup(encoded, b)));
  return out;
}

double ScorePair(const Model &model, const Corpus &corpus, const Matrix &pretrained,
                 TokenId a, TokenId b, uint64_t seed) {
  const TokenId ids[2] = {a, b};
  const EncodedTable enc =
      EncodeEntities(model, corpus, pretrained, std::span(ids, a == b ? 1 : 2), seed);
  return Matcher(model)(Lookup(enc, a), Lookup(enc, b));
}

EvalPairs BuildEvalPairs(const SynsetStore &store, Split split, uint64_t seed) {
  EvalPairs out;
  for (size_t s : store.SynsetsIn(split)) {
    const auto &m = store.synset(s);
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = i + 1; j < m.size(); ++j) {
        out.pairs.emplace_back(m[i], m[j]);
        out.labels.push_back(1);
      }
    }
  }
  const size_t n_pos = out.pairs.size();
  const std::vector<TokenId> pool = store.Entities(split);

  size_t total_cross = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    for (size_t j = i + 1; j < pool.size(); ++j) {
      if (!store.AreSynonyms(pool[i], pool[j])) ++total_cross;
    }
  }
  if (total_cross <= n_pos) {
    for (size_t i = 0; i < pool.size(); ++i) {
      for (size_t j = i + 1; j < pool.size(); ++j) {
        if (!store.AreSynonyms(pool[i], pool[j])) {
          out.pairs.emplace_back(pool[i], pool[j]);
          out.labels.push_back(0);
        }
      }
    }
    return out;
  }
  Rng rng = MakeStream(seed, "eval.negatives");
  std::set<EntityPair> seen;
  while (seen.size() < n_pos) {
    TokenId a = pool[UniformIndex(rng, pool.size())];
    TokenId b = pool[UniformIndex(rng, pool.size())];
    if (a == b || store.AreSynonyms(a, b)) continue;
    if (b < a) std::swap(a, b);
    if (seen.insert({a, b}).second) {
      out.pairs.emplace_back(a, b);
      out.labels.push_back(0);
    }
  }
  return out;
}

double PairAuc(const Model &model, const Corpus &corpus, const Matrix &pretrained,
               Split split, uint64_t seed) {
  const EvalPairs ep = BuildEvalPairs(corpus.synsets, split, seed);
  const std::vector<TokenId> entities = corpus.synsets.Entities(split);
  const EncodedTable enc = EncodeEntities(model, corpus, pretrained, entities, seed);
  const std::vector<double> scores = ScorePairs(model, enc, ep.pairs);
  return Auc(scores, ep.labels);
}

EvalReport Evaluate(const Model &model, const Corpus &corpus, const Matrix &pretrained,
                    const EmbeddingTable &table, Split split, uint64_t seed,
                    size_t topk) {
  const SynsetStore &store = corpus.synsets;
  const std::vector<TokenId> entities = store.Entities(split);
  const EncodedTable enc = EncodeEntities(model, corpus, pretrained, entities, seed);

  EvalReport report;
  const EvalPairs ep = BuildEvalPairs(store, split, seed);
  const std::vector<double> pair_scores = ScorePairs(model, enc, ep.pairs);
  report.auc = Auc(pair_scores, ep.labels);
  for (int l : ep.labels) (l == 1 ? report.positive_pairs : report.negative_pairs)++;

  // Ranking queries: every entity with a synonym in the split.
  std::vector<RankedQuery> queries;
  std::vector<std::vector<Neighbor>> cands;
  std::vector<EntityPair> to_score;
  for (TokenId e : entities) {
    RankedQuery q;
    for (TokenId k : store.synset(*store.SynsetOf(e))) {
      if (k != e) q.relevant.push_back(k);
    }
    if (q.relevant.empty()) continue;
    NeighborList nl = NearestNeighbors(table, e, entities, topk);
    for (const Neighbor &n : nl.neighbors) to_score.emplace_back(e, n.entity);
    cands.push_back(std::move(nl.neighbors));
    queries.push_back(std::move(q));
  }
  const std::vector<double> s = ScorePairs(model, enc, to_score);
  size_t cursor = 0;
  for (size_t qi = 0; qi < queries.size(); ++qi) {
    std::vector<std::pair<double, TokenId>> ranked;
    for (const Neighbor &n : cands[qi]) ranked.emplace_back(s[cursor++], n.entity);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    for (const auto &[score, ent] : ranked) queries[qi].ranked.push_back(ent);
  }
  report.queries = queries.size();
  report.map = MeanAveragePrecision(queries);
  for (size_t k : kReportKs) {
    report.p_at_k[k] = PrecisionAtK(queries, k);
    report.r_at_k[k] = RecallAtK(queries, k);
    report.f1_at_k[k] = F1AtK(queries, k);
  }
  return report;
}

DiscoveryResult Discover(const Model &model, const Corpus &corpus,
                         const Matrix &pretrained, const EmbeddingTable &table,
                         TokenId query, std::span<const TokenId> universe, size_t k,
                         double threshold, uint64_t seed) {
  DiscoveryResult r;
  r.query = query;
  r.threshold = threshold;
  const NeighborList nl = NearestNeighbors(table, query, universe, k);
  if (nl.neighbors.empty()) return r;
  std::vector<TokenId> ents{query};
  std::vector<EntityPair> pairs;
  for (const Neighbor &n : nl.neighbors) {
    ents.push_back(n.entity);
    pairs.emplace_back(query, n.entity);
  }
  const EncodedTable enc = EncodeEntities(model, corpus, pretrained, ents, seed);
  const std::vector<double> s = ScorePairs(model, enc, pairs);
  for (size_t i = 0; i < nl.neighbors.size(); ++i) {
    r.candidates.push_back({nl.neighbors[i].entity, nl.neighbors[i].similarity, s[i]});
  }
  r.ranked = r.candidates;
  std::stable_sort(r.ranked.begin(), r.ranked.end(),
                   [](const auto &a, const auto &b) { return a.score > b.score; });
  for (const auto &c : r.ranked) {
    if (c.score > threshold) r.accepted.push_back(c);
  }
  return r;
}

std::string FormatDiscovery(const DiscoveryResult &r, const Vocabulary &vocab) {
  std::ostringstream o;
  o << "QUERY\t" << vocab.Token(r.query) << '\n';
  o << "CANDIDATE ENTITIES\tCOSINE SIMILARITY\n";
  for (const auto &c : r.candidates) o << vocab.Token(c.entity) << '\t' << Fixed6(c.cosine) << '\n';
  o << '\n' << "FINAL ENTITIES\tSYNONYMNET SCORE\n";
  for (const auto &c : r.accepted) o << vocab.Token(c.entity) << '\t' << Fixed6(c.score) << '\n';
  return o.str();
}

}  // namespace synonymnet
