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

#include "synonymnet/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "synonymnet/error.h"

namespace synonymnet {
namespace {

Var BuildOn(Tape &tape, const LossBuilder &build, const ParamSet &params,
            std::vector<Var> &vars) {
  vars.clear();
  vars.reserve(params.size());
  for (const auto &p : params) vars.push_back(tape.ParameterRef(p.value));
  return build(tape, vars);
}

}  // namespace

GradResult ComputeGradients(const LossBuilder &build, const ParamSet &params) {
  Tape tape;
  std::vector<Var> vars;
  Var loss = BuildOn(tape, build, params, vars);
  GradResult result;
  result.loss = tape.scalar(loss);
  if (!std::isfinite(result.loss)) {
    throw NumericError("non-finite loss " + std::to_string(result.loss));
  }
  tape.Backward(loss);
  result.grads.reserve(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) {
    result.grads.push_back(tape.grad(vars[i]));
    if (!result.grads.back().AllFinite()) {
      throw NumericError("non-finite gradient for parameter " + params[i].name);
    }
  }
  return result;
}

double EvaluateLoss(const LossBuilder &build, const ParamSet &params) {
  Tape tape;
  std::vector<Var> vars;
  return tape.scalar(BuildOn(tape, build, params, vars));
}

double GradRelativeError(double analytic, double numeric) {
  const double scale =
      std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport FiniteDiffCheck(const LossBuilder &build,
                                const ParamSet &params, double eps) {
  if (!(eps > 0.0)) throw UsageError("finite difference eps must be > 0");
  const GradResult analytic = ComputeGradients(build, params);
  ParamSet probe = params;
  GradCheckReport report;
  bool first = true;
  for (size_t p = 0; p < probe.size(); ++p) {
    auto data = probe[p].value.data();
    for (size_t i = 0; i < data.size(); ++i) {
      const double saved = data[i];
      data[i] = saved + eps;
      const double up = EvaluateLoss(build, probe);
      data[i] = saved - eps;
      const double down = EvaluateLoss(build, probe);
      data[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic.grads[p][i];
      const double err = GradRelativeError(a, numeric);
      ++report.entries_checked;
      if (first || err > report.max_rel_error) {
        first = false;
        report.max_rel_error = err;
        report.worst_param = probe[p].name;
        report.worst_index = i;
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace synonymnet
