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

#include "radnet/params_report.h"

#include <numeric>
#include <vector>

#include <gtest/gtest.h>

namespace radnet {
namespace {

// Hand-derived budgets for the stock configurations (d_c = 15, d_x = 600,
// hidden 150 per direction, one bias per gate, two classes).
constexpr uint64_t kLstm = 2 * 4 * (150 * 750 + 150);  // 901,200
constexpr uint64_t kHead = 300 * 2 + 2;
constexpr uint64_t kRadical = 2000 * 15 + 15 * (50 * 1 + 100 * 2 + 150 * 3 + 50 * 3 +
                                                100 * 6 + 150 * 9) + 600 + kLstm + kHead;
constexpr uint64_t kCharacter =
    21000 * 15 + 15 * (100 * 1 + 200 * 2 + 300 * 3) + 600 + kLstm + kHead;
constexpr uint64_t kWord30k = 30000 * 600 + kLstm + kHead;
constexpr uint64_t kWord18k = 18000 * 600 + kLstm + kHead;

ParamsReport StockReport() {
  const size_t words[] = {30000, 18000};
  const auto inputs = StockBudgetInputs(2000, 21000, words);
  return MakeParamsReport(inputs);
}

TEST(ParamsReportTest, StockTotalsMatchHandCounts) {
  static_assert(kRadical == 974402);
  const ParamsReport r = StockReport();
  ASSERT_EQ(r.models.size(), 4u);
  EXPECT_EQ(r.models[0].total, kRadical);
  EXPECT_EQ(r.models[1].total, kCharacter);
  EXPECT_EQ(r.models[2].total, kWord30k);
  EXPECT_EQ(r.models[3].total, kWord18k);
  EXPECT_EQ(r.models[2].items.front().count, 18000000u);
}

TEST(ParamsReportTest, OrderingAndReductions) {
  const ParamsReport r = StockReport();
  EXPECT_LT(r.models[0].total, r.models[1].total);
  EXPECT_LT(r.models[1].total, r.models[2].total);
  EXPECT_LT(r.models[1].total, r.models[3].total);
  EXPECT_NEAR(r.ReductionPercent(0, 1), 100.0 * (1.0 - double(kRadical) / kCharacter), 1e-12);
  EXPECT_NEAR(r.ReductionPercent(0, 2), 100.0 * (1.0 - double(kRadical) / kWord30k), 1e-12);
  // Every unordered pair appears once, earlier model against later baseline.
  ASSERT_EQ(r.reductions.size(), 6u);
  for (const auto& red : r.reductions) {
    EXPECT_LT(red.model, red.baseline);
    EXPECT_DOUBLE_EQ(red.percent, r.ReductionPercent(red.model, red.baseline));
  }
}

TEST(ParamsReportTest, TotalsAreSumsOfItems) {
  const ParamsReport r = StockReport();
  for (const auto& m : r.models) {
    const uint64_t sum = std::accumulate(
        m.items.begin(), m.items.end(), uint64_t{0},
        [](uint64_t acc, const ParameterCount& c) { return acc + c.count; });
    EXPECT_EQ(sum, m.total) << m.input.label;
  }
}

TEST(ParamsReportTest, EqualConfigsGiveZeroReduction) {
  const std::vector<BudgetInput> inputs = {{"a", ModelConfig::Proposed(), 2000},
                                           {"b", ModelConfig::Proposed(), 2000}};
  const ParamsReport r = MakeParamsReport(inputs);
  EXPECT_EQ(r.ReductionPercent(0, 1), 0.0);
  EXPECT_EQ(r.ReductionPercent(1, 0), 0.0);
}

TEST(ParamsReportTest, LargerModelGivesNegativeReduction) {
  const ParamsReport r = StockReport();
  EXPECT_LT(r.ReductionPercent(2, 0), 0.0);
}

TEST(ParamsReportTest, JsonAndTextCarryEveryModel) {
  const ParamsReport r = StockReport();
  const auto j = r.ToJson();
  ASSERT_EQ(j.at("models").size(), 4u);
  EXPECT_EQ(j["models"][0]["label"], "radical");
  EXPECT_EQ(j["models"][0]["total"].get<uint64_t>(), kRadical);
  EXPECT_EQ(j["models"][3]["label"], "word-18000");
  EXPECT_EQ(j.at("reductions").size(), 6u);
  EXPECT_EQ(j["reductions"][0]["baseline"], "character");

  const std::string text = r.RenderText();
  for (const char* needle : {"radical", "character", "word-30000", "word-18000",
                             "974402", "reductions"}) {
    EXPECT_NE(text.find(needle), std::string::npos) << needle;
  }
}

}  // namespace
}  // namespace radnet
