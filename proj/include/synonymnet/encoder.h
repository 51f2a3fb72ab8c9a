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

#ifndef SYNONYMNET_ENCODER_H_
#define SYNONYMNET_ENCODER_H_

#include <span>
#include <string>

#include "synonymnet/corpus.h"
#include "synonymnet/matrix.h"
#include "synonymnet/rng.h"
#include "synonymnet/tape.h"

namespace synonymnet {

enum class EncoderKind {
  // Each direction stops at the entity token; output is the pair of states
  // at the entity position.
  kAnchored,
  // Plain Bi-LSTM: both directions read the whole window; output is the pair
  // of final states.
  kFull,
};
const char *EncoderKindName(EncoderKind kind);
EncoderKind ParseEncoderKind(const std::string &name);

// One LSTM direction. Gate column order is [input, forget, output, candidate].
struct LstmParams {
  Matrix w_x;   // input_dim x 4H
  Matrix w_h;   // H x 4H
  Matrix bias;  // 1 x 4H
};

struct EncoderParams {
  LstmParams forward;
  LstmParams backward;

  size_t input_dim() const { return forward.w_x.rows(); }
  size_t hidden() const { return forward.w_h.rows(); }
  size_t output_dim() const { return 2 * hidden(); }
};

// Weights uniform in [-scale, scale], forget-gate bias 1, other biases 0.
// `d_ce` must be even; each direction gets d_ce / 2 hidden units.
EncoderParams InitEncoderParams(size_t input_dim, size_t d_ce, Rng &rng,
                                double scale = 0.08);

// Tape variables for one direction / both directions.
struct LstmVars {
  Var w_x, w_h, bias;
};
struct EncoderVars {
  LstmVars forward, backward;
  size_t hidden = 0;
};

// Binds borrowed copies of `params` on `tape`, as parameters when
// `trainable` and constants otherwise.
EncoderVars BindEncoder(Tape &tape, const EncoderParams &params, bool trainable);

// 1 x d_ce encoding of `window`; `embeddings` is the vocab x d_embed table.
Var EncodeOnTape(Tape &tape, const EncoderVars &vars, Var embeddings,
                 const ContextWindow &window, EncoderKind kind);
// P x d_ce, row p = encoding of windows[p]. An empty span yields 0 x d_ce.
Var EncodeBatchOnTape(Tape &tape, const EncoderVars &vars, Var embeddings,
                      std::span<const ContextWindow> windows, EncoderKind kind);

// Value-only conveniences over a private tape.
std::vector<double> EncodeAnchored(const ContextWindow &window,
                                   const EncoderParams &params,
                                   const Matrix &embeddings);
std::vector<double> EncodeFull(const ContextWindow &window,
                               const EncoderParams &params,
                               const Matrix &embeddings);
Matrix EncodeBatch(std::span<const ContextWindow> windows,
                   const EncoderParams &params, const Matrix &embeddings,
                   EncoderKind kind);

}  // namespace synonymnet

#endif  // SYNONYMNET_ENCODER_H_
