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

#ifndef RADNET_OPTIMIZER_H_
#define RADNET_OPTIMIZER_H_

#include <span>
#include <vector>

#include "radnet/autodiff.h"

namespace radnet {

struct RmsPropOptions {
  double learning_rate = 0.001;
  double decay = 0.9;  // rho
  double epsilon = 1e-8;
};

// v <- rho*v + (1-rho)*g^2;  param <- param - lr*g/(sqrt(v)+eps).
// All three spans must have equal length.
template <typename T>
void RmsPropUpdate(std::span<T> param, std::span<const T> grad,
                   std::span<T> accumulator, const RmsPropOptions& options);

template <typename T>
class RmsProp {
 public:
  explicit RmsProp(RmsPropOptions options = {}) : options_(options) {}

  // Applies one update from each parameter's grad. Accumulators are created
  // (zeroed) on the first call and matched to parameters by position.
  void Step(std::span<ad::Parameter<T>> params);

  const RmsPropOptions& options() const { return options_; }
  const std::vector<ad::Tensor<T>>& accumulators() const { return accumulators_; }

 private:
  RmsPropOptions options_;
  std::vector<ad::Tensor<T>> accumulators_;
};

}  // namespace radnet

#endif  // RADNET_OPTIMIZER_H_
