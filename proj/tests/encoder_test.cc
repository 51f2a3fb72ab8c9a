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

#include <random>

#include <gtest/gtest.h>

#include "synonymnet/encoder.h"
#include "synonymnet/error.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

constexpr size_t kVocab = 30;
constexpr size_t kDim = 6;
constexpr size_t kDce = 8;

struct Fixture {
  Matrix embeddings;
  EncoderParams params;
};

Fixture Make(uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Fixture f;
  f.embeddings = Matrix(kVocab, kDim);
  for (double &v : f.embeddings.data()) v = g(rng);
  f.params = InitEncoderParams(kDim, kDce, rng, 0.5);
  return f;
}

ContextWindow RandomWindow(Rng &rng, size_t len) {
  ContextWindow w;
  for (size_t i = 0; i < len; ++i) w.token_ids.push_back(2 + static_cast<TokenId>(UniformIndex(rng, kVocab - 2)));
  w.entity_pos = UniformIndex(rng, len);
  return w;
}

TEST(Encoder, ParamsShapeAndInit) {
  const Fixture f = Make(1);
  EXPECT_EQ(f.params.output_dim(), kDce);
  EXPECT_EQ(f.params.forward.w_x.rows(), kDim);
  EXPECT_EQ(f.params.forward.w_x.cols(), 4 * kDce / 2);
  // Forget-gate block of the bias is 1.
  for (size_t j = 0; j < kDce / 2; ++j) {
    EXPECT_EQ(f.params.forward.bias(0, j), 0.0);
    EXPECT_EQ(f.params.forward.bias(0, kDce / 2 + j), 1.0);
  }
  Rng rng(1);
  EXPECT_THROW(InitEncoderParams(kDim, 7, rng), UsageError);
  EXPECT_EQ(ParseEncoderKind("anchored"), EncoderKind::kAnchored);
  EXPECT_EQ(ParseEncoderKind("bilstm"), EncoderKind::kFull);
  EXPECT_THROW(ParseEncoderKind("gru"), UsageError);
}

// The forward half only sees tokens up to the entity and the backward half
// only sees tokens from it, so changing the other side leaves each bitwise equal.
TEST(EncoderProperty, AnchoredHalvesIgnoreTheFarSide) {
  const Fixture f = Make(2);
  Rng rng(3);
  const size_t h = kDce / 2;
  for (int trial = 0; trial < 100; ++trial) {
    const ContextWindow w = RandomWindow(rng, 1 + UniformIndex(rng, 12));
    const auto base = EncodeAnchored(w, f.params, f.embeddings);
    ContextWindow right = w, left = w;
    for (size_t i = w.entity_pos + 1; i < w.token_ids.size(); ++i) right.token_ids[i] = 2;
    right.token_ids.push_back(3);
    for (size_t i = 0; i < w.entity_pos; ++i) left.token_ids[i] = 2;
    const auto r = EncodeAnchored(right, f.params, f.embeddings);
    const auto l = EncodeAnchored(left, f.params, f.embeddings);
    for (size_t j = 0; j < h; ++j) ASSERT_EQ(r[j], base[j]);
    for (size_t j = h; j < kDce; ++j) ASSERT_EQ(l[j], base[j]);
  }
}

TEST(Encoder, EntityAtStartReadsOneForwardStep) {
  const Fixture f = Make(4);
  ContextWindow a{{5, 6, 7, 8}, 0, 0}, single{{5}, 0, 0};
  const auto x = EncodeAnchored(a, f.params, f.embeddings);
  const auto y = EncodeAnchored(single, f.params, f.embeddings);
  for (size_t j = 0; j < kDce / 2; ++j) EXPECT_EQ(x[j], y[j]);
}

TEST(Encoder, SingleTokenFullEqualsAnchored) {
  const Fixture f = Make(5);
  for (TokenId t = 2; t < 10; ++t) {
    ContextWindow w{{t}, 0, 0};
    EXPECT_EQ(EncodeAnchored(w, f.params, f.embeddings), EncodeFull(w, f.params, f.embeddings));
  }
}

TEST(Encoder, FullAndAnchoredDifferOnLongWindows) {
  const Fixture f = Make(6);
  ContextWindow w{{4, 9, 12, 3, 7}, 2, 0};
  EXPECT_NE(EncodeAnchored(w, f.params, f.embeddings), EncodeFull(w, f.params, f.embeddings));
}

TEST(Encoder, BatchEqualsIndividual) {
  const Fixture f = Make(7);
  Rng rng(8);
  std::vector<ContextWindow> ws;
  for (int i = 0; i < 6; ++i) ws.push_back(RandomWindow(rng, 1 + UniformIndex(rng, 9)));
  for (EncoderKind kind : {EncoderKind::kAnchored, EncoderKind::kFull}) {
    const Matrix b = EncodeBatch(ws, f.params, f.embeddings, kind);
    ASSERT_EQ(b.rows(), ws.size());
    ASSERT_EQ(b.cols(), kDce);
    for (size_t p = 0; p < ws.size(); ++p) {
      const auto one = kind == EncoderKind::kAnchored ? EncodeAnchored(ws[p], f.params, f.embeddings)
                                                      : EncodeFull(ws[p], f.params, f.embeddings);
      for (size_t j = 0; j < kDce; ++j) EXPECT_EQ(b(p, j), one[j]);
    }
  }
  const Matrix empty = EncodeBatch({}, f.params, f.embeddings, EncoderKind::kAnchored);
  EXPECT_EQ(empty.rows(), 0u);
  EXPECT_EQ(empty.cols(), kDce);
}

TEST(EncoderProperty, OutputsInOpenUnitInterval) {
  const Fixture f = Make(9);
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const ContextWindow w = RandomWindow(rng, 1 + UniformIndex(rng, 15));
    for (double v : EncodeFull(w, f.params, f.embeddings)) {
      ASSERT_GT(v, -1.0);
      ASSERT_LT(v, 1.0);
    }
  }
}

TEST(Encoder, InvalidWindows) {
  const Fixture f = Make(11);
  EXPECT_THROW(EncodeAnchored(ContextWindow{}, f.params, f.embeddings), DataError);
  EXPECT_THROW(EncodeAnchored(ContextWindow{{2, 3}, 2, 0}, f.params, f.embeddings), DataError);
}

}  // namespace
}  // namespace synonymnet
