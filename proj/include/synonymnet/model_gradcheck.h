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

#ifndef SYNONYMNET_MODEL_GRADCHECK_H_
#define SYNONYMNET_MODEL_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "synonymnet/gradcheck.h"
#include "synonymnet/model.h"

namespace synonymnet {

struct ModelGradCase {
  std::string name;  // e.g. "triplet/anchored/leaky"
  double loss = 0.0;
  GradCheckReport report;
};

// Settings of the tiny model used for the full-model check.
struct GradCheckSetup {
  size_t d_ce = 4;
  size_t contexts = 2;     // P = Q
  size_t max_len = 5;      // T
  size_t vocab = 20;
  size_t embed_dim = 3;
  double init_scale = 0.5;  // keeps the informativeness maxima away from ties
  double eps = 1e-4;
  uint64_t seed = 1;
};

// Finite-difference check of the whole loss (encoder, matcher, loss) for
// every combination of objective, encoder variant and leaky unit on/off.
// Every matrix of the model, including the embedding table and the leaky
// vector, is treated as a parameter. The triplet margin exceeds the largest
// possible similarity gap so the hinge is always active; the siamese case
// sums a positive and a negative pair.
std::vector<ModelGradCase> RunModelGradCheck(const GradCheckSetup &setup);

}  // namespace synonymnet

#endif  // SYNONYMNET_MODEL_GRADCHECK_H_
