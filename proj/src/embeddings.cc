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

#include "synonymnet/embeddings.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "synonymnet/error.h"
#include "synonymnet/kernels.h"

namespace synonymnet {
namespace {

std::vector<std::string> Fields(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) out.push_back(f);
  return out;
}

bool ParseSize(const std::string &s, size_t &v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

double ParseDouble(const std::string &s, size_t line_no) {
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw DataError("embeddings line " + std::to_string(line_no) +
                    ": cannot parse value '" + s + "'");
  }
  return v;
}

void ValidateQuery(const EmbeddingTable &table, TokenId query) {
  if (query <= Vocabulary::kPad || static_cast<size_t>(query) >= table.vocab_size()) {
    throw DataError("unknown query entity id " + std::to_string(query));
  }
}

NeighborList RankNeighbors(TokenId query, std::span<const TokenId> universe,
                           const std::vector<double> &sims, size_t k) {
  std::vector<size_t> order;
  order.reserve(universe.size());
  for (size_t i = 0; i < universe.size(); ++i) {
    if (universe[i] != query) order.push_back(i);
  }
  const size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                    order.end(), [&](size_t a, size_t b) {
                      if (sims[a] != sims[b]) return sims[a] > sims[b];
                      return a < b;
                    });
  NeighborList list;
  list.query = query;
  list.neighbors.reserve(take);
  for (size_t i = 0; i < take; ++i) {
    list.neighbors.push_back({universe[order[i]], sims[order[i]]});
  }
  return list;
}

}  // namespace

EmbeddingTable EmbeddingTable::Load(std::istream &in, const Vocabulary &vocab,
                                    size_t *matched) {
  std::string line;
  size_t line_no = 0;
  size_t dim = 0;
  bool have_dim = false;
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = Fields(line);
    if (f.empty()) continue;
    size_t a = 0, b = 0;
    if (!have_dim && rows.empty() && f.size() == 2 && ParseSize(f[0], a) &&
        ParseSize(f[1], b)) {
      dim = b;
      have_dim = true;
      continue;
    }
    if (!have_dim) {
      dim = f.size() - 1;
      have_dim = true;
    }
    if (f.size() - 1 != dim || dim == 0) {
      throw DataError("embeddings line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(f.size() - 1));
    }
    std::vector<double> v(dim);
    for (size_t i = 0; i < dim; ++i) v[i] = ParseDouble(f[i + 1], line_no);
    rows.emplace_back(std::move(f[0]), std::move(v));
  }
  if (rows.empty()) throw DataError("embedding file contains no vectors");

  Matrix m(vocab.size(), dim);
  std::vector<double> mean(dim, 0.0);
  for (const auto &[tok, v] : rows) {
    for (size_t i = 0; i < dim; ++i) mean[i] += v[i];
  }
  for (double &x : mean) x /= static_cast<double>(rows.size());

  std::vector<bool> filled(vocab.size(), false);
  size_t hits = 0;
  for (const auto &[tok, v] : rows) {
    auto id = vocab.Find(tok);
    if (!id || *id <= Vocabulary::kPad || filled[*id]) continue;
    std::copy(v.begin(), v.end(), m.row(*id).begin());
    filled[*id] = true;
    ++hits;
  }
  for (size_t id = 0; id < vocab.size(); ++id) {
    if (id == Vocabulary::kPad || filled[id]) continue;
    std::copy(mean.begin(), mean.end(), m.row(id).begin());
  }
  if (matched != nullptr) *matched = hits;
  return EmbeddingTable(std::move(m));
}

EmbeddingTable EmbeddingTable::LoadFile(const std::string &path, const Vocabulary &vocab,
                                        size_t *matched) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read embedding file " + path);
  return Load(in, vocab, matched);
}

void EmbeddingTable::Save(std::ostream &out, const Vocabulary &vocab) const {
  out << vectors_.rows() << ' ' << vectors_.cols() << '\n';
  char buf[32];
  for (size_t id = 0; id < vectors_.rows(); ++id) {
    out << vocab.Token(static_cast<TokenId>(id));
    for (double v : vectors_.row(id)) {
      std::snprintf(buf, sizeof(buf), " %.9g", v);
      out << buf;
    }
    out << '\n';
  }
}

NeighborList NearestNeighbors(const EmbeddingTable &table, TokenId query,
                              std::span<const TokenId> universe, size_t k) {
  ValidateQuery(table, query);
  std::vector<double> sims(universe.size());
  const auto q = table.vector(query);
  const auto n = static_cast<std::ptrdiff_t>(universe.size());
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    sims[i] = CosineSimilarity(q, table.vector(universe[i]));
  }
  return RankNeighbors(query, universe, sims, k);
}

NeighborList NearestNeighborsSerial(const EmbeddingTable &table, TokenId query,
                                    std::span<const TokenId> universe, size_t k) {
  ValidateQuery(table, query);
  std::vector<double> sims(universe.size());
  const auto q = table.vector(query);
  for (size_t i = 0; i < universe.size(); ++i) {
    sims[i] = CosineSimilarity(q, table.vector(universe[i]));
  }
  return RankNeighbors(query, universe, sims, k);
}

double BaselineScore(const EmbeddingTable &table, TokenId u, TokenId v,
                     const Matrix &w) {
  if (w.rows() != table.dim() || w.cols() != table.dim()) {
    throw ShapeError("baseline score: W is " + w.ShapeString() + ", expected " +
                     std::to_string(table.dim()) + "x" + std::to_string(table.dim()));
  }
  const auto xu = table.vector(u);
  const auto xv = table.vector(v);
  double s = 0.0;
  for (size_t i = 0; i < w.rows(); ++i) {
    s += xu[i] * Dot(w.row(i), xv);
  }
  return s;
}

}  // namespace synonymnet
