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

#include "synonymnet/losses.h"

#include <algorithm>

#include "synonymnet/kernels.h"

namespace synonymnet {

double SiameseLoss(double s, int label, double margin) {
  if (label == 1) return 0.25 * (1.0 - s) * (1.0 - s);
  const double over = std::max(s - margin, 0.0);
  return over * over;
}

double SiameseLoss(std::span<const double> h_bar, std::span<const double> g_bar,
                   int label, double margin) {
  return SiameseLoss(CosineSimilarity(h_bar, g_bar), label, margin);
}

double TripletLoss(double s_pos, double s_neg, double margin) {
  return std::max(s_neg - s_pos + margin, 0.0);
}

double TripletLoss(std::span<const double> h_bar, std::span<const double> g_pos,
                   std::span<const double> g_neg, double margin) {
  return TripletLoss(CosineSimilarity(h_bar, g_pos), CosineSimilarity(h_bar, g_neg),
                     margin);
}

Var SiameseLossOnTape(Tape &tape, Var s, int label, double margin) {
  if (label == 1) {
    // (1 - s)^2 / 4
    return tape.Scale(tape.Square(tape.AddScalar(s, -1.0)), 0.25);
  }
  return tape.Square(tape.Relu(tape.AddScalar(s, -margin)));
}

Var TripletLossOnTape(Tape &tape, Var s_pos, Var s_neg, double margin) {
  return tape.Relu(tape.AddScalar(tape.Sub(s_neg, s_pos), margin));
}

}  // namespace synonymnet
