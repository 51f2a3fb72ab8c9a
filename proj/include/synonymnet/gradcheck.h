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

#ifndef SYNONYMNET_GRADCHECK_H_
#define SYNONYMNET_GRADCHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "synonymnet/matrix.h"
#include "synonymnet/tape.h"

namespace synonymnet {

struct NamedMatrix {
  std::string name;
  Matrix value;
};
using ParamSet = std::vector<NamedMatrix>;

// Builds a scalar loss on `tape` from parameter variables given in ParamSet
// order. Must be a pure function of the parameter values.
using LossBuilder = std::function<Var(Tape &tape, std::span<const Var> params)>;

struct GradResult {
  double loss = 0.0;
  std::vector<Matrix> grads;  // same order and shapes as the ParamSet
};

// Loss value and d(loss)/d(param) for every parameter entry. Throws
// NumericError when the loss or any gradient is non-finite.
GradResult ComputeGradients(const LossBuilder &build, const ParamSet &params);

// Forward pass only.
double EvaluateLoss(const LossBuilder &build, const ParamSet &params);

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_param;
  size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  size_t entries_checked = 0;
};

// Entries whose analytic and numeric gradients are both below this magnitude
// are compared on an absolute scale.
inline constexpr double kGradCheckFloor = 1e-6;

// Relative error |a - n| / max(|a|, |n|, kGradCheckFloor).
double GradRelativeError(double analytic, double numeric);

// Compares ComputeGradients against central differences
// (f(p + eps) - f(p - eps)) / (2 eps) on every parameter entry.
GradCheckReport FiniteDiffCheck(const LossBuilder &build,
                                const ParamSet &params, double eps);

}  // namespace synonymnet

#endif  // SYNONYMNET_GRADCHECK_H_
