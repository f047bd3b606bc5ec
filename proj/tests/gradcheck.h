// Copyright 2026 The radnet Authors.
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

#ifndef RADNET_TESTS_GRADCHECK_H_
#define RADNET_TESTS_GRADCHECK_H_

// Central finite differences against tape gradients, 64-bit only.
//
// Relative error is |analytic − numeric| / max(|analytic|, |numeric|, floor).
// The floor keeps gradients that are zero up to rounding from turning
// cancellation noise into large relative errors.
//
// Kinks (relu at 0, max-pool ties) are detected rather than assumed away:
// when the estimate at ε and at ε/2 disagree by more than kink_tolerance the
// perturbation crossed a non-differentiable point and the coordinate is
// skipped and counted.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "radnet/autodiff.h"

namespace radnet::testing {

struct GradCheckOptions {
  double epsilon = 1e-5;
  double floor = 1e-4;
  double kink_tolerance = 1e-3;
  // Coordinates that are deliberately frozen (the PAD embedding column).
  std::function<bool(const ad::Parameter<double>&, size_t)> exclude;
};

struct GradCheckResult {
  double max_relative_error = 0;
  size_t checked = 0;
  size_t skipped_kinks = 0;
  size_t excluded = 0;
  std::string worst;  // "param[index]: analytic vs numeric"
};

using LossFn = std::function<ad::Var<double>(ad::Tape<double>&)>;

inline double RelativeError(double a, double n, double floor) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

// `loss` must create its leaves from `params` via Tape::Leaf so that the
// analytic pass fills their grads.
inline GradCheckResult CheckGradients(const std::vector<ad::Parameter<double>*>& params,
                                      const LossFn& loss,
                                      GradCheckOptions opts = {}) {
  for (auto* p : params) p->ZeroGrad();
  {
    ad::Tape<double> tape;
    tape.Backward(loss(tape));
  }
  auto eval = [&] {
    ad::Tape<double> tape;
    return loss(tape).item();
  };
  auto central = [&](double& x, double eps) {
    const double saved = x;
    x = saved + eps;
    const double up = eval();
    x = saved - eps;
    const double down = eval();
    x = saved;
    return (up - down) / (2 * eps);
  };

  GradCheckResult result;
  for (auto* p : params) {
    for (size_t i = 0; i < p->size(); ++i) {
      if (opts.exclude && opts.exclude(*p, i)) {
        ++result.excluded;
        continue;
      }
      double& x = p->value.data[i];
      const double numeric = central(x, opts.epsilon);
      const double half = central(x, opts.epsilon / 2);
      if (RelativeError(numeric, half, opts.floor) > opts.kink_tolerance) {
        ++result.skipped_kinks;
        continue;
      }
      const double analytic = p->grad.data[i];
      const double err = RelativeError(analytic, numeric, opts.floor);
      ++result.checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst = p->name + "[" + std::to_string(i) + "]: " +
                       std::to_string(analytic) + " vs " + std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace radnet::testing

#endif  // RADNET_TESTS_GRADCHECK_H_
