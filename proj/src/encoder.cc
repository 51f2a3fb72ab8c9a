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

#include "synonymnet/encoder.h"

#include <random>

#include "synonymnet/error.h"

namespace synonymnet {
namespace {

LstmParams InitLstm(size_t input_dim, size_t hidden, Rng &rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  LstmParams p{Matrix(input_dim, 4 * hidden), Matrix(hidden, 4 * hidden),
               Matrix(1, 4 * hidden)};
  for (double &v : p.w_x.data()) v = u(rng);
  for (double &v : p.w_h.data()) v = u(rng);
  for (size_t k = 0; k < hidden; ++k) p.bias(0, hidden + k) = 1.0;
  return p;
}

// Runs one direction over `ids` in the given order; returns the final h.
Var RunDirection(Tape &tape, const LstmVars &lstm, size_t hidden, Var embeddings,
                 const std::vector<TokenId> &ids) {
  Var x = tape.GatherRows(embeddings, ids);
  Var gates = tape.AddRowBroadcast(tape.MatMul(x, lstm.w_x), lstm.bias);
  Var state = tape.Constant(Matrix(1, 2 * hidden));
  for (size_t t = 0; t < ids.size(); ++t) {
    state = tape.LstmCell(tape.Row(gates, t), state, lstm.w_h);
  }
  return tape.SliceCols(state, 0, hidden);
}

void ValidateWindow(const ContextWindow &w) {
  if (w.token_ids.empty()) throw DataError("cannot encode an empty context window");
  if (w.entity_pos >= w.token_ids.size()) {
    throw DataError("context window entity position " + std::to_string(w.entity_pos) +
                    " outside window of length " + std::to_string(w.token_ids.size()));
  }
}

LstmVars BindLstm(Tape &tape, const LstmParams &p, bool trainable) {
  auto bind = [&](const Matrix &m) {
    return trainable ? tape.ParameterRef(m) : tape.ConstantRef(m);
  };
  return {bind(p.w_x), bind(p.w_h), bind(p.bias)};
}

std::vector<double> EncodeValue(const ContextWindow &window, const EncoderParams &params,
                                const Matrix &embeddings, EncoderKind kind) {
  Tape tape;
  EncoderVars vars = BindEncoder(tape, params, false);
  Var out = EncodeOnTape(tape, vars, tape.ConstantRef(embeddings), window, kind);
  auto d = tape.value(out).data();
  return {d.begin(), d.end()};
}

}  // namespace

const char *EncoderKindName(EncoderKind kind) {
  return kind == EncoderKind::kAnchored ? "anchored" : "bilstm";
}

EncoderKind ParseEncoderKind(const std::string &name) {
  if (name == "anchored") return EncoderKind::kAnchored;
  if (name == "bilstm" || name == "full") return EncoderKind::kFull;
  throw UsageError("unknown encoder '" + name + "' (expected anchored or bilstm)");
}

EncoderParams InitEncoderParams(size_t input_dim, size_t d_ce, Rng &rng, double scale) {
  if (d_ce == 0 || d_ce % 2 != 0) {
    throw UsageError("context encoding size d_ce must be even and positive, got " +
                     std::to_string(d_ce));
  }
  EncoderParams p;
  p.forward = InitLstm(input_dim, d_ce / 2, rng, scale);
  p.backward = InitLstm(input_dim, d_ce / 2, rng, scale);
  return p;
}

EncoderVars BindEncoder(Tape &tape, const EncoderParams &params, bool trainable) {
  EncoderVars v;
  v.forward = BindLstm(tape, params.forward, trainable);
  v.backward = BindLstm(tape, params.backward, trainable);
  v.hidden = params.hidden();
  return v;
}

Var EncodeOnTape(Tape &tape, const EncoderVars &vars, Var embeddings,
                 const ContextWindow &window, EncoderKind kind) {
  ValidateWindow(window);
  const auto &tokens = window.token_ids;
  const size_t anchor = window.entity_pos;
  std::vector<TokenId> fw_ids, bw_ids;
  if (kind == EncoderKind::kAnchored) {
    fw_ids.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(anchor) + 1);
    bw_ids.assign(tokens.rbegin(),
                  tokens.rbegin() + static_cast<std::ptrdiff_t>(tokens.size() - anchor));
  } else {
    fw_ids = tokens;
    bw_ids.assign(tokens.rbegin(), tokens.rend());
  }
  Var fw = RunDirection(tape, vars.forward, vars.hidden, embeddings, fw_ids);
  Var bw = RunDirection(tape, vars.backward, vars.hidden, embeddings, bw_ids);
  return tape.ConcatCols(fw, bw);
}

Var EncodeBatchOnTape(Tape &tape, const EncoderVars &vars, Var embeddings,
                      std::span<const ContextWindow> windows, EncoderKind kind) {
  if (windows.empty()) return tape.Constant(Matrix(0, 2 * vars.hidden));
  std::vector<Var> rows;
  rows.reserve(windows.size());
  for (const auto &w : windows) rows.push_back(EncodeOnTape(tape, vars, embeddings, w, kind));
  return tape.StackRows(rows);
}

std::vector<double> EncodeAnchored(const ContextWindow &window, const EncoderParams &params,
                                   const Matrix &embeddings) {
  return EncodeValue(window, params, embeddings, EncoderKind::kAnchored);
}

std::vector<double> EncodeFull(const ContextWindow &window, const EncoderParams &params,
                               const Matrix &embeddings) {
  return EncodeValue(window, params, embeddings, EncoderKind::kFull);
}

Matrix EncodeBatch(std::span<const ContextWindow> windows, const EncoderParams &params,
                   const Matrix &embeddings, EncoderKind kind) {
  Tape tape;
  EncoderVars vars = BindEncoder(tape, params, false);
  return tape.value(EncodeBatchOnTape(tape, vars, tape.ConstantRef(embeddings), windows, kind));
}

}  // namespace synonymnet
