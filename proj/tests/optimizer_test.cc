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
#include <vector>

#include <gtest/gtest.h>

#include "radnet/rng.h"

namespace radnet {
namespace {

TEST(RmsPropTest, ZeroGradientOnlyDecaysAccumulator) {
  std::vector<double> p = {1.5, -2.0};
  const std::vector<double> g = {0.0, 0.0};
  std::vector<double> v = {4.0, 0.5};
  RmsPropUpdate<double>(p, g, v, {});
  EXPECT_EQ(p, (std::vector<double>{1.5, -2.0}));
  EXPECT_DOUBLE_EQ(v[0], 3.6);
  EXPECT_DOUBLE_EQ(v[1], 0.45);
}

TEST(RmsPropTest, FirstStepMovesBySignOverSqrtOfOneMinusRho) {
  std::vector<double> p = {0.0, 0.0, 0.0};
  const std::vector<double> g = {3.0, -50.0, 1e-3};
  std::vector<double> v = {0.0, 0.0, 0.0};
  RmsPropUpdate<double>(p, g, v, {});
  for (size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(v[i], 0.1 * g[i] * g[i]);
    const double expected = -0.001 * g[i] / (std::sqrt(0.1) * std::abs(g[i]) + 1e-8);
    EXPECT_DOUBLE_EQ(p[i], expected);
  }
  EXPECT_NEAR(p[0], -0.001 / std::sqrt(0.1), 1e-10);
  EXPECT_NEAR(p[1], 0.001 / std::sqrt(0.1), 1e-10);
}

TEST(RmsPropTest, RepeatedConstantGradientTakesSmallerSteps) {
  std::vector<double> p = {0.0};
  const std::vector<double> g = {2.0};
  std::vector<double> v = {0.0};
  RmsPropUpdate<double>(p, g, v, {});
  const double first = -p[0];
  RmsPropUpdate<double>(p, g, v, {});
  const double second = -p[0] - first;
  EXPECT_GT(first, 0);
  EXPECT_GT(second, 0);
  EXPECT_LT(second, first);
}

TEST(RmsPropTest, ZeroLearningRateLeavesParametersFixed) {
  Rng rng(9);
  RmsPropOptions opts;
  opts.learning_rate = 0;
  std::vector<double> p(50), g(50), v(50, 0.0);
  for (auto& x : p) x = rng.Uniform(-5, 5);
  const std::vector<double> before = p;
  for (int step = 0; step < 5; ++step) {
    for (auto& x : g) x = rng.Uniform(-1e3, 1e3);
    RmsPropUpdate<double>(p, g, v, opts);
  }
  EXPECT_EQ(p, before);
  for (double x : v) EXPECT_GE(x, 0.0);
}

TEST(RmsPropTest, SizeMismatchThrows) {
  std::vector<double> p = {1.0, 2.0};
  const std::vector<double> g = {1.0};
  std::vector<double> v = {0.0, 0.0};
  EXPECT_THROW(RmsPropUpdate<double>(p, g, v, {}), ad::ShapeError);
}

TEST(RmsPropTest, StepKeepsOneAccumulatorPerParameter) {
  std::vector<ad::Parameter<double>> params;
  params.emplace_back("a", ad::Shape{2, 3});
  params.emplace_back("b", ad::Shape{3});
  for (auto& p : params) std::fill(p.grad.data.begin(), p.grad.data.end(), 1.0);
  RmsProp<double> opt;
  opt.Step(params);
  ASSERT_EQ(opt.accumulators().size(), 2u);
  EXPECT_EQ(opt.accumulators()[0].shape, (ad::Shape{2, 3}));
  EXPECT_DOUBLE_EQ(opt.accumulators()[1].data[0], 0.1);
  EXPECT_NEAR(params[0].value.data[0], -0.001 / std::sqrt(0.1), 1e-10);

  params.pop_back();
  EXPECT_THROW(opt.Step(params), ad::ShapeError);
}

}  // namespace
}  // namespace radnet
