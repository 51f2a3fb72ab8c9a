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

#include "synonymnet/matcher.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "synonymnet/error.h"
#include "synonymnet/kernels.h"

namespace synonymnet {
namespace {

// Normalises `logits` (plus an optional extra logit) in place into
// probabilities; returns the extra slot's share.
double SoftmaxPool(std::vector<double> &logits, const double *extra) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits) mx = std::max(mx, v);
  if (extra != nullptr) mx = std::max(mx, *extra);
  double sum = 0.0;
  for (double &v : logits) {
    v = std::exp(v - mx);
    sum += v;
  }
  double ex = 0.0;
  if (extra != nullptr) {
    ex = std::exp(*extra - mx);
    sum += ex;
  }
  for (double &v : logits) v /= sum;
  return ex / sum;
}

}  // namespace

MatchResult BilateralMatch(const Matrix &h, const Matrix &g, const Matrix &w_bm,
                           const LeakyUnit *leaky) {
  const size_t d = w_bm.rows();
  if (h.rows() == 0 || g.rows() == 0) {
    throw ShapeError("bilateral match needs at least one context per side, got " +
                     h.ShapeString() + " and " + g.ShapeString());
  }
  if (w_bm.cols() != d || h.cols() != d || g.cols() != d) {
    throw ShapeError("bilateral match: H " + h.ShapeString() + ", G " + g.ShapeString() +
                     ", W_BM " + w_bm.ShapeString());
  }
  if (leaky != nullptr && (leaky->vector.rows() != 1 || leaky->vector.cols() != d)) {
    throw ShapeError("leaky unit is " + leaky->vector.ShapeString() + ", expected 1x" +
                     std::to_string(d));
  }
  const size_t P = h.rows();
  const size_t Q = g.rows();
  MatchResult r;
  const Matrix hw = MatMul(h, w_bm);
  r.logits = MatMulTransB(hw, g);

  std::vector<double> leak_col(Q, 0.0), leak_row(P, 0.0);
  if (leaky != nullptr) {
    const Matrix lw = MatMul(leaky->vector, w_bm);
    for (size_t q = 0; q < Q; ++q) leak_col[q] = Dot(lw.row(0), g.row(q));
    for (size_t p = 0; p < P; ++p) leak_row[p] = Dot(hw.row(p), leaky->vector.row(0));
  }

  r.m_fwd = Matrix(P, Q);
  r.leak_fwd.assign(Q, 0.0);
  std::vector<double> pool(P);
  for (size_t q = 0; q < Q; ++q) {
    for (size_t p = 0; p < P; ++p) pool[p] = r.logits(p, q);
    r.leak_fwd[q] = SoftmaxPool(pool, leaky != nullptr ? &leak_col[q] : nullptr);
    for (size_t p = 0; p < P; ++p) r.m_fwd(p, q) = pool[p];
  }
  r.m_bwd = Matrix(P, Q);
  r.leak_bwd.assign(P, 0.0);
  pool.resize(Q);
  for (size_t p = 0; p < P; ++p) {
    for (size_t q = 0; q < Q; ++q) pool[q] = r.logits(p, q);
    r.leak_bwd[p] = SoftmaxPool(pool, leaky != nullptr ? &leak_row[p] : nullptr);
    for (size_t q = 0; q < Q; ++q) r.m_bwd(p, q) = pool[q];
  }
  return r;
}

void Aggregate(MatchResult &r, const Matrix &h, const Matrix &g) {
  const size_t P = r.m_fwd.rows();
  const size_t Q = r.m_fwd.cols();
  if (h.rows() != P || g.rows() != Q || h.cols() != g.cols()) {
    throw ShapeError("aggregate: contexts " + h.ShapeString() + " / " + g.ShapeString() +
                     " do not fit match of " + r.m_fwd.ShapeString());
  }
  r.a_g.assign(Q, 0.0);
  for (size_t q = 0; q < Q; ++q) {
    double best = r.m_fwd(0, q);
    for (size_t p = 1; p < P; ++p) best = std::max(best, r.m_fwd(p, q));
    r.a_g[q] = best;
  }
  r.a_h.assign(P, 0.0);
  for (size_t p = 0; p < P; ++p) {
    double best = r.m_bwd(p, 0);
    for (size_t q = 1; q < Q; ++q) best = std::max(best, r.m_bwd(p, q));
    r.a_h[p] = best;
  }
  const size_t d = h.cols();
  r.h_bar.assign(d, 0.0);
  r.g_bar.assign(d, 0.0);
  for (size_t p = 0; p < P; ++p) {
    for (size_t j = 0; j < d; ++j) r.h_bar[j] += r.a_h[p] * h(p, j);
  }
  for (size_t q = 0; q < Q; ++q) {
    for (size_t j = 0; j < d; ++j) r.g_bar[j] += r.a_g[q] * g(q, j);
  }
}

double Score(MatchResult &r) {
  r.degenerate = Norm(r.h_bar) == 0.0 || Norm(r.g_bar) == 0.0;
  r.score = CosineSimilarity(r.h_bar, r.g_bar);
  return r.score;
}

MatchResult Match(const Matrix &h, const Matrix &g, const Matrix &w_bm,
                  const LeakyUnit *leaky) {
  MatchResult r = BilateralMatch(h, g, w_bm, leaky);
  Aggregate(r, h, g);
  Score(r);
  return r;
}

Var MatchScoreOnTape(Tape &tape, Var h, Var g, Var w_bm, Var leaky) {
  Var hw = tape.MatMul(h, w_bm);
  Var logits = tape.MatMulTransB(hw, g);
  Var extra_col, extra_row;
  if (leaky.valid()) {
    extra_col = tape.MatMulTransB(tape.MatMul(leaky, w_bm), g);  // 1 x Q
    extra_row = tape.MatMulTransB(hw, leaky);                    // P x 1
  }
  Var m_fwd = tape.SoftmaxCols(logits, extra_col);
  Var m_bwd = tape.SoftmaxRows(logits, extra_row);
  Var a_g = tape.MaxCols(m_fwd);
  Var a_h = tape.MaxRows(m_bwd);
  Var g_bar = tape.MatMul(a_g, g);
  Var h_bar = tape.MatMul(tape.Transpose(a_h), h);
  return tape.Cosine(h_bar, g_bar);
}

Matrix InitSymmetric(size_t n, double scale, Rng &rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      m(i, j) = u(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

}  // namespace synonymnet
