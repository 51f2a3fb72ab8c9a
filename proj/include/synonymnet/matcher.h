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

#ifndef SYNONYMNET_MATCHER_H_
#define SYNONYMNET_MATCHER_H_

#include <vector>

#include "synonymnet/matrix.h"
#include "synonymnet/rng.h"
#include "synonymnet/tape.h"

namespace synonymnet {

// Dummy context that joins every softmax pool so uninformative contexts can
// route their mass to it. Fixed at zero unless trainable.
struct LeakyUnit {
  Matrix vector;  // 1 x d_ce
  bool trainable = false;

  static LeakyUnit Zero(size_t d_ce) { return {Matrix(1, d_ce), false}; }
};

// Bilateral matching between the contexts H (P x d) of one entity and G
// (Q x d) of another.
//
// logits[p][q] = h_p W g_q^T is computed once as H W G^T. m_fwd normalises
// each column over p (how well each h_p explains g_q); m_bwd normalises each
// row over q. With a leaky unit l, the column q pool also holds the logit
// l W g_q^T and the row p pool holds h_p W l^T; their shares are leak_fwd[q]
// and leak_bwd[p], so leak_fwd[q] + sum_p m_fwd[p][q] = 1.
//
// Informativeness: a_g[q] = max_p m_fwd[p][q], a_h[p] = max_q m_bwd[p][q].
// Global contexts: h_bar = sum_p a_h[p] h_p, g_bar = sum_q a_g[q] g_q (leak
// shares never enter the sums). score = cos(h_bar, g_bar).
struct MatchResult {
  Matrix logits;
  Matrix m_fwd;
  Matrix m_bwd;
  std::vector<double> leak_fwd;  // Q (zeros without a leaky unit)
  std::vector<double> leak_bwd;  // P
  std::vector<double> a_h;       // P, filled by Aggregate
  std::vector<double> a_g;       // Q
  std::vector<double> h_bar;     // d
  std::vector<double> g_bar;     // d
  double score = 0.0;
  // Set by Score when a global context had zero norm (score forced to 0).
  bool degenerate = false;
};

// Fills logits, m_fwd, m_bwd and the leak shares. `leaky` may be null.
// Throws ShapeError on mismatched shapes or P, Q == 0.
MatchResult BilateralMatch(const Matrix &h, const Matrix &g, const Matrix &w_bm,
                           const LeakyUnit *leaky);
// Fills a_h, a_g, h_bar and g_bar. Ties in the max go to the first index.
void Aggregate(MatchResult &result, const Matrix &h, const Matrix &g);
// Cosine of the global contexts; 0 with `degenerate` set on zero norm.
double Score(MatchResult &result);

// All three stages.
MatchResult Match(const Matrix &h, const Matrix &g, const Matrix &w_bm,
                  const LeakyUnit *leaky);

// Same computation recorded on a tape; returns the 1x1 score. `leaky` may
// be an invalid Var (no leaky unit).
Var MatchScoreOnTape(Tape &tape, Var h, Var g, Var w_bm, Var leaky);

// Symmetric matrix with entries uniform in [-scale, scale].
Matrix InitSymmetric(size_t n, double scale, Rng &rng);

}  // namespace synonymnet

#endif  // SYNONYMNET_MATCHER_H_
