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

#ifndef SYNONYMNET_OPTIMIZER_H_
#define SYNONYMNET_OPTIMIZER_H_

#include <span>
#include <string>
#include <vector>

#include "synonymnet/matrix.h"

namespace synonymnet {

enum class OptimizerKind { kAdam, kRmsProp, kAdagrad, kAdadelta };
OptimizerKind ParseOptimizerKind(const std::string &name);
const char *OptimizerName(OptimizerKind kind);

// First-order optimizers with their usual update rules:
//   adam:     bias-corrected moments, beta1 0.9, beta2 0.999
//   rmsprop:  decay 0.9
//   adagrad:  accumulated squared gradients
//   adadelta: decay 0.95, step scaled by the learning rate
// All use epsilon 1e-8. State is sized on the first Step() call; later calls
// must pass the same parameter list.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate);

  void Step(std::span<Matrix *const> params, std::span<const Matrix> grads);

  OptimizerKind kind() const { return kind_; }
  long steps() const { return steps_; }

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kRmsDecay = 0.9;
  static constexpr double kAdadeltaDecay = 0.95;
  static constexpr double kEpsilon = 1e-8;

 private:
  OptimizerKind kind_;
  double lr_;
  long steps_ = 0;
  std::vector<Matrix> slot1_;  // adam m / rmsprop, adagrad, adadelta E[g^2]
  std::vector<Matrix> slot2_;  // adam v / adadelta E[dx^2]
};

// Scales `grads` in place so their global L2 norm is at most `max_norm`;
// returns the norm before clipping.
double ClipGlobalNorm(std::span<Matrix> grads, double max_norm);

}  // namespace synonymnet

#endif  // SYNONYMNET_OPTIMIZER_H_
