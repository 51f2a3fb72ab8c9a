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

#ifndef SYNONYMNET_EMBEDDINGS_H_
#define SYNONYMNET_EMBEDDINGS_H_

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "synonymnet/corpus.h"
#include "synonymnet/matrix.h"

namespace synonymnet {

// Pretrained word vectors aligned to a Vocabulary: row i is the vector of
// token id i. The UNK row is the mean of all vectors read from the file,
// the PAD row is zero, and vocabulary tokens missing from the file get the
// UNK row.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(Matrix vectors) : vectors_(std::move(vectors)) {}

  // Text format: optional "count dim" header line, then "token f1 ... fd".
  static EmbeddingTable Load(std::istream &in, const Vocabulary &vocab,
                             size_t *matched = nullptr);
  static EmbeddingTable LoadFile(const std::string &path, const Vocabulary &vocab,
                                 size_t *matched = nullptr);

  // Writes every vocabulary row (including reserved tokens) in the same text
  // format with a header.
  void Save(std::ostream &out, const Vocabulary &vocab) const;

  size_t vocab_size() const { return vectors_.rows(); }
  size_t dim() const { return vectors_.cols(); }
  std::span<const double> vector(TokenId id) const { return vectors_.row(id); }
  const Matrix &matrix() const { return vectors_; }
  Matrix &mutable_matrix() { return vectors_; }

 private:
  Matrix vectors_;
};

struct Neighbor {
  TokenId entity = 0;
  double similarity = 0.0;
};

// Candidates for a query ranked by cosine similarity (non-increasing; ties
// keep universe order). The query itself never appears.
struct NeighborList {
  TokenId query = 0;
  std::vector<Neighbor> neighbors;
};

// Exact top-k cosine neighbours of `query` among `universe`. The similarity
// scan runs on OpenMP threads; NearestNeighborsSerial is the single-threaded
// reference and returns identical lists.
NeighborList NearestNeighbors(const EmbeddingTable &table, TokenId query,
                              std::span<const TokenId> universe, size_t k);
NeighborList NearestNeighborsSerial(const EmbeddingTable &table, TokenId query,
                                    std::span<const TokenId> universe, size_t k);

// Bilinear baseline score x_u W x_v^T over the embedding vectors.
double BaselineScore(const EmbeddingTable &table, TokenId u, TokenId v,
                     const Matrix &w);

}  // namespace synonymnet

#endif  // SYNONYMNET_EMBEDDINGS_H_
