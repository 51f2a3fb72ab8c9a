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

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "synonymnet/error.h"
#include "synonymnet/gradcheck.h"
#include "synonymnet/kernels.h"
#include "synonymnet/rng.h"
#include "synonymnet/tape.h"

namespace synonymnet {
namespace {

Matrix RandomMatrix(size_t r, size_t c, Rng &rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(r, c);
  for (double &v : m.data()) v = u(rng);
  return m;
}

// Reduces any node to a scalar with a fixed random weighting so every
// output entry carries a distinct gradient.
Var Project(Tape &t, Var x, uint64_t seed) {
  Rng rng(seed);
  const Matrix &v = t.value(x);
  return t.Sum(t.Mul(x, t.Constant(RandomMatrix(v.rows(), v.cols(), rng))));
}

struct OpCase {
  const char *name;
  std::vector<std::pair<size_t, size_t>> shapes;
  std::function<Var(Tape &, std::span<const Var>)> op;
};


std::vector<OpCase> Cases() {
  return {
      {"matmul", {{3, 4}, {4, 2}}, [](Tape &t, auto v) { return t.MatMul(v[0], v[1]); }},
      {"matmul_trans_b", {{3, 4}, {5, 4}}, [](Tape &t, auto v) { return t.MatMulTransB(v[0], v[1]); }},
      {"transpose", {{3, 2}}, [](Tape &t, auto v) { return t.Transpose(v[0]); }},
      {"symmetrize", {{4, 4}}, [](Tape &t, auto v) { return t.Symmetrize(v[0]); }},
      {"add", {{2, 3}, {2, 3}}, [](Tape &t, auto v) { return t.Add(v[0], v[1]); }},
      {"sub", {{2, 3}, {2, 3}}, [](Tape &t, auto v) { return t.Sub(v[0], v[1]); }},
      {"mul", {{2, 3}, {2, 3}}, [](Tape &t, auto v) { return t.Mul(v[0], v[1]); }},
      {"add_row", {{3, 4}, {1, 4}}, [](Tape &t, auto v) { return t.AddRowBroadcast(v[0], v[1]); }},
      {"scale", {{2, 2}}, [](Tape &t, auto v) { return t.Scale(v[0], -1.7); }},
      {"add_scalar", {{2, 2}}, [](Tape &t, auto v) { return t.AddScalar(v[0], 0.3); }},
      {"tanh", {{3, 3}}, [](Tape &t, auto v) { return t.Tanh(v[0]); }},
      {"sigmoid", {{3, 3}}, [](Tape &t, auto v) { return t.Sigmoid(v[0]); }},
      {"relu", {{3, 3}}, [](Tape &t, auto v) { return t.Relu(v[0]); }},
      {"square", {{3, 3}}, [](Tape &t, auto v) { return t.Square(v[0]); }},
      {"max_cols", {{4, 3}}, [](Tape &t, auto v) { return t.MaxCols(v[0]); }},
      {"max_rows", {{4, 3}}, [](Tape &t, auto v) { return t.MaxRows(v[0]); }},
      {"cosine", {{1, 5}, {1, 5}}, [](Tape &t, auto v) { return t.Cosine(v[0], v[1]); }},
      {"softmax_cols", {{4, 3}}, [](Tape &t, auto v) { return t.SoftmaxCols(v[0]); }},
      {"softmax_rows", {{4, 3}}, [](Tape &t, auto v) { return t.SoftmaxRows(v[0]); }},
      {"softmax_cols_extra", {{4, 3}, {1, 3}},
       [](Tape &t, auto v) { return t.SoftmaxCols(v[0], v[1]); }},
      {"softmax_rows_extra", {{4, 3}, {4, 1}},
       [](Tape &t, auto v) { return t.SoftmaxRows(v[0], v[1]); }},
      {"row", {{4, 3}}, [](Tape &t, auto v) { return t.Row(v[0], 2); }},
      {"gather_rows", {{5, 3}},
       [](Tape &t, auto v) {
         static const int32_t ids[] = {4, 1, 1, 0};
         return t.GatherRows(v[0], ids);
       }},
      {"slice_cols", {{3, 6}}, [](Tape &t, auto v) { return t.SliceCols(v[0], 2, 3); }},
      {"concat_cols", {{2, 3}, {2, 2}}, [](Tape &t, auto v) { return t.ConcatCols(v[0], v[1]); }},
      {"stack_rows", {{1, 3}, {1, 3}, {1, 3}},
       [](Tape &t, auto v) { return t.StackRows(v); }},
      {"lstm_cell", {{1, 8}, {1, 4}, {2, 8}},
       [](Tape &t, auto v) { return t.LstmCell(v[0], v[1], v[2]); }},
  };
}

TEST(TapeOps, EveryOpMatchesFiniteDifferences) {
  Rng rng(123);
  for (const OpCase &c : Cases()) {
    for (int trial = 0; trial < 5; ++trial) {
      ParamSet params;
      for (size_t i = 0; i < c.shapes.size(); ++i) {
        params.push_back({"in" + std::to_string(i),
                          RandomMatrix(c.shapes[i].first, c.shapes[i].second, rng)});
      }
      const uint64_t proj = 1000 + trial;
      auto op = c.op;
      const GradCheckReport rep = FiniteDiffCheck(
          [op, proj](Tape &t, std::span<const Var> v) { return Project(t, op(t, v), proj); },
          params, 1e-5);
      EXPECT_LT(rep.max_rel_error, 1e-6) << c.name << " trial " << trial << " param "
                                         << rep.worst_param;
    }
  }
}

TEST(TapeOps, SoftmaxExtraSlotShare) {
  Tape t;
  Var a = t.Constant(Matrix(2, 1, 0.0));
  Var extra = t.Constant(Matrix(1, 1, 0.0));
  const Matrix &m = t.value(t.SoftmaxCols(a, extra));
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m(1, 0), 1.0 / 3.0);
}

TEST(TapeOps, MaxTiesRouteToFirstIndex) {
  Tape t;
  Var a = t.Parameter(Matrix::FromRows({{2.0, 1.0}, {2.0, 5.0}}));
  Var m = t.MaxCols(a);
  Var loss = t.Sum(m);
  t.Backward(loss);
  const Matrix g = t.grad(a);
  EXPECT_EQ(g, Matrix::FromRows({{1.0, 0.0}, {0.0, 1.0}}));
}

TEST(TapeOps, CosineOfZeroVectorIsZeroWithZeroGradient) {
  Tape t;
  Var a = t.Parameter(Matrix(1, 3, 0.0));
  Var b = t.Parameter(Matrix::FromRows({{1, 2, 3}}));
  Var c = t.Cosine(a, b);
  EXPECT_EQ(t.scalar(c), 0.0);
  t.Backward(c);
  const Matrix gb = t.grad(b);
  for (double v : gb.data()) EXPECT_EQ(v, 0.0);
}

TEST(TapeOps, ConstantsCarryNoGradient) {
  Tape t;
  Var c = t.Constant(Matrix(2, 2, 1.0));
  Var p = t.Parameter(Matrix(2, 2, 3.0));
  Var loss = t.Sum(t.Mul(c, p));
  EXPECT_FALSE(t.requires_grad(c));
  EXPECT_TRUE(t.requires_grad(loss));
  t.Backward(loss);
  EXPECT_EQ(t.grad(c), Matrix(2, 2, 0.0));
  EXPECT_EQ(t.grad(p), Matrix(2, 2, 1.0));
}

TEST(TapeOps, ShapeErrors) {
  Tape t;
  Var a = t.Constant(Matrix(2, 3));
  Var b = t.Constant(Matrix(2, 2));
  EXPECT_THROW(t.Add(a, b), ShapeError);
  EXPECT_THROW(t.MatMul(a, a), ShapeError);
  EXPECT_THROW(t.Backward(a), ShapeError);
}

TEST(TapeOps, LstmCellHiddenStaysInOpenUnitInterval) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Tape t;
    Var gates = t.Constant(RandomMatrix(1, 12, rng, 4.0));
    Var state = t.Constant(RandomMatrix(1, 6, rng, 2.0));
    Var w = t.Constant(RandomMatrix(3, 12, rng, 2.0));
    const Matrix &hc = t.value(t.LstmCell(gates, state, w));
    for (size_t j = 0; j < 3; ++j) {
      ASSERT_GT(hc(0, j), -1.0);
      ASSERT_LT(hc(0, j), 1.0);
    }
  }
}

}  // namespace
}  // namespace synonymnet
