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

#ifndef SYNONYMNET_TESTS_ORACLES_H_
#define SYNONYMNET_TESTS_ORACLES_H_

// Slow, direct reference implementations shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "synonymnet/matcher.h"

namespace synonymnet::oracle {

inline double Dot3(std::span<const double> a, const Matrix &w, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) s += a[i] * w(i, j) * b[j];
  return s;
}

// Scalar reference: every weight from its own pool, one pair at a time.
inline MatchResult ScalarMatch(const Matrix &h, const Matrix &g, const Matrix &w, const LeakyUnit *l) {
  const size_t P = h.rows(), Q = g.rows(), d = h.cols();
  MatchResult r;
  r.m_fwd = Matrix(P, Q);
  r.m_bwd = Matrix(P, Q);
  r.leak_fwd.assign(Q, 0.0);
  r.leak_bwd.assign(P, 0.0);
  for (size_t q = 0; q < Q; ++q) {
    std::vector<double> z;
    for (size_t p = 0; p < P; ++p) z.push_back(Dot3(h.row(p), w, g.row(q)));
    if (l) z.push_back(Dot3(l->vector.row(0), w, g.row(q)));
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - mx);
    for (size_t p = 0; p < P; ++p) r.m_fwd(p, q) = std::exp(z[p] - mx) / s;
    if (l) r.leak_fwd[q] = std::exp(z[P] - mx) / s;
  }
  for (size_t p = 0; p < P; ++p) {
    std::vector<double> z;
    for (size_t q = 0; q < Q; ++q) z.push_back(Dot3(h.row(p), w, g.row(q)));
    if (l) z.push_back(Dot3(h.row(p), w, l->vector.row(0)));
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double v : z) s += std::exp(v - mx);
    for (size_t q = 0; q < Q; ++q) r.m_bwd(p, q) = std::exp(z[q] - mx) / s;
    if (l) r.leak_bwd[p] = std::exp(z[Q] - mx) / s;
  }
  r.a_h.assign(P, 0.0);
  r.a_g.assign(Q, 0.0);
  for (size_t p = 0; p < P; ++p)
    for (size_t q = 0; q < Q; ++q) {
      r.a_h[p] = std::max(r.a_h[p], r.m_bwd(p, q));
      r.a_g[q] = std::max(r.a_g[q], r.m_fwd(p, q));
    }
  r.h_bar.assign(d, 0.0);
  r.g_bar.assign(d, 0.0);
  for (size_t p = 0; p < P; ++p)
    for (size_t k = 0; k < d; ++k) r.h_bar[k] += r.a_h[p] * h(p, k);
  for (size_t q = 0; q < Q; ++q)
    for (size_t k = 0; k < d; ++k) r.g_bar[k] += r.a_g[q] * g(q, k);
  double hh = 0, gg = 0, hg = 0;
  for (size_t k = 0; k < d; ++k) {
    hh += r.h_bar[k] * r.h_bar[k];
    gg += r.g_bar[k] * r.g_bar[k];
    hg += r.h_bar[k] * r.g_bar[k];
  }
  r.score = hh > 0 && gg > 0 ? hg / std::sqrt(hh * gg) : 0.0;
  return r;
}

// Mann-Whitney AUC by counting every (positive, negative) pair.
inline double PairCountAuc(std::span<const double> s, std::span<const int> y) {
  double num = 0.0;
  long den = 0;
  for (size_t i = 0; i < s.size(); ++i)
    for (size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      ++den;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  return num / static_cast<double>(den);
}

}  // namespace synonymnet::oracle

#endif  // SYNONYMNET_TESTS_ORACLES_H_
