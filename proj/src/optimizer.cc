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

#include "synonymnet/optimizer.h"

#include <cmath>

#include "synonymnet/error.h"

namespace synonymnet {

OptimizerKind ParseOptimizerKind(const std::string &name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "rmsprop") return OptimizerKind::kRmsProp;
  if (name == "adagrad") return OptimizerKind::kAdagrad;
  if (name == "adadelta") return OptimizerKind::kAdadelta;
  throw UsageError("unknown optimizer '" + name +
                   "' (expected adam, rmsprop, adagrad or adadelta)");
}

const char *OptimizerName(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kRmsProp: return "rmsprop";
    case OptimizerKind::kAdagrad: return "adagrad";
    case OptimizerKind::kAdadelta: return "adadelta";
  }
  return "?";
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate)
    : kind_(kind), lr_(learning_rate) {}

void Optimizer::Step(std::span<Matrix *const> params, std::span<const Matrix> grads) {
  if (params.size() != grads.size()) {
    throw ShapeError("optimizer: " + std::to_string(params.size()) + " parameters but " +
                     std::to_string(grads.size()) + " gradients");
  }
  if (slot1_.empty()) {
    for (Matrix *p : params) {
      slot1_.emplace_back(p->rows(), p->cols());
      slot2_.emplace_back(p->rows(), p->cols());
    }
  } else if (slot1_.size() != params.size()) {
    throw ShapeError("optimizer: parameter list changed between steps");
  }
  ++steps_;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(steps_));
  for (size_t k = 0; k < params.size(); ++k) {
    auto p = params[k]->data();
    auto g = grads[k].data();
    auto s1 = slot1_[k].data();
    auto s2 = slot2_[k].data();
    if (g.size() != p.size() || s1.size() != p.size()) {
      throw ShapeError("optimizer: gradient shape mismatch for parameter " + std::to_string(k));
    }
    for (size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      switch (kind_) {
        case OptimizerKind::kAdam: {
          s1[i] = kBeta1 * s1[i] + (1.0 - kBeta1) * gi;
          s2[i] = kBeta2 * s2[i] + (1.0 - kBeta2) * gi * gi;
          const double m_hat = s1[i] / bc1;
          const double v_hat = s2[i] / bc2;
          p[i] -= lr_ * m_hat / (std::sqrt(v_hat) + kEpsilon);
          break;
        }
        case OptimizerKind::kRmsProp:
          s1[i] = kRmsDecay * s1[i] + (1.0 - kRmsDecay) * gi * gi;
          p[i] -= lr_ * gi / (std::sqrt(s1[i]) + kEpsilon);
          break;
        case OptimizerKind::kAdagrad:
          s1[i] += gi * gi;
          p[i] -= lr_ * gi / (std::sqrt(s1[i]) + kEpsilon);
          break;
        case OptimizerKind::kAdadelta: {
          s1[i] = kAdadeltaDecay * s1[i] + (1.0 - kAdadeltaDecay) * gi * gi;
          const double dx =
              -std::sqrt(s2[i] + kEpsilon) / std::sqrt(s1[i] + kEpsilon) * gi;
          s2[i] = kAdadeltaDecay * s2[i] + (1.0 - kAdadeltaDecay) * dx * dx;
          p[i] += lr_ * dx;
          break;
        }
      }
    }
  }
}

double ClipGlobalNorm(std::span<Matrix> grads, double max_norm) {
  double sq = 0.0;
  for (const Matrix &g : grads) {
    for (double v : g.data()) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Matrix &g : grads) {
      for (double &v : g.data()) v *= scale;
    }
  }
  return norm;
}

}  // namespace synonymnet
