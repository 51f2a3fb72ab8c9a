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

#ifndef SYNONYMNET_LOSSES_H_
#define SYNONYMNET_LOSSES_H_

#include <span>

#include "synonymnet/tape.h"

namespace synonymnet {

// Siamese loss on a similarity s: label 1 gives (1 - s)^2 / 4, label 0
// gives max(s - margin, 0)^2.
double SiameseLoss(double s, int label, double margin);
// Same with s = cos(h_bar, g_bar).
double SiameseLoss(std::span<const double> h_bar, std::span<const double> g_bar,
                   int label, double margin);

// Triplet hinge max(s_neg - s_pos + margin, 0).
double TripletLoss(double s_pos, double s_neg, double margin);
double TripletLoss(std::span<const double> h_bar, std::span<const double> g_pos,
                   std::span<const double> g_neg, double margin);

// Tape versions over 1x1 similarity nodes.
Var SiameseLossOnTape(Tape &tape, Var s, int label, double margin);
Var TripletLossOnTape(Tape &tape, Var s_pos, Var s_neg, double margin);

}  // namespace synonymnet

#endif  // SYNONYMNET_LOSSES_H_
