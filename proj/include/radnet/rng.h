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

#ifndef RADNET_RNG_H_
#define RADNET_RNG_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace radnet {

// SplitMix64 generator with named, deterministic child streams. All random
// draws in the toolkit derive from one user-supplied seed through Split(),
// and the sampling helpers below avoid the implementation-defined standard
// distributions so results do not depend on the standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // Independent stream keyed by `name`; does not advance this generator.
  Rng Split(std::string_view name) const;

  uint64_t NextU64();
  // Uniform on [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n), n > 0.
  size_t UniformInt(size_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename Item>
  void Shuffle(std::vector<Item>* items) {
    for (size_t i = items->size(); i > 1; --i) {
      std::swap((*items)[i - 1], (*items)[UniformInt(i)]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace radnet

#endif  // RADNET_RNG_H_
