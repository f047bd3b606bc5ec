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

#include "radnet/optimizer.h"

#include <cmath>

namespace radnet {

template <typename T>
void RmsPropUpdate(std::span<T> param, std::span<const T> grad,
                   std::span<T> accumulator, const RmsPropOptions& options) {
  if (param.size() != grad.size() || param.size() != accumulator.size()) {
    throw ad::ShapeError("rmsprop: parameter, gradient and accumulator sizes differ");
  }
  const T rho = static_cast<T>(options.decay);
  const T lr = static_cast<T>(options.learning_rate);
  const T eps = static_cast<T>(options.epsilon);
  for (size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i];
    accumulator[i] = rho * accumulator[i] + (T(1) - rho) * g * g;
    param[i] -= lr * g / (std::sqrt(accumulator[i]) + eps);
  }
}

template <typename T>
void RmsProp<T>::Step(std::span<ad::Parameter<T>> params) {
  if (accumulators_.empty()) {
    for (const auto& p : params) accumulators_.emplace_back(p.value.shape);
  }
  if (accumulators_.size() != params.size()) {
    throw ad::ShapeError("rmsprop: parameter list changed between steps");
  }
  for (size_t k = 0; k < params.size(); ++k) {
    ad::Parameter<T>& p = params[k];
    if (p.value.shape != accumulators_[k].shape || p.grad.shape != p.value.shape) {
      throw ad::ShapeError("rmsprop: shape mismatch for " + p.name);
    }
    RmsPropUpdate<T>(p.value.data, p.grad.data, accumulators_[k].data, options_);
  }
}

template void RmsPropUpdate<float>(std::span<float>, std::span<const float>,
                                   std::span<float>, const RmsPropOptions&);
template void RmsPropUpdate<double>(std::span<double>, std::span<const double>,
                                    std::span<double>, const RmsPropOptions&);
template class RmsProp<float>;
template class RmsProp<double>;

}  // namespace radnet
