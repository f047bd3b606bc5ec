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

#ifndef RADNET_PARAMS_REPORT_H_
#define RADNET_PARAMS_REPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radnet/model.h"

namespace radnet {

struct BudgetInput {
  std::string label;
  ModelConfig config;
  size_t vocab_size = 0;
};

struct ModelBudget {
  BudgetInput input;
  std::vector<ParameterCount> items;
  uint64_t total = 0;
};

struct Reduction {
  size_t model = 0;
  size_t baseline = 0;
  // 100 * (1 - total(model) / total(baseline)); negative when larger.
  double percent = 0;
};

struct ParamsReport {
  std::vector<ModelBudget> models;
  std::vector<Reduction> reductions;  // every pair model < baseline by index

  double ReductionPercent(size_t model, size_t baseline) const;
  std::string RenderText() const;
  nlohmann::json ToJson() const;
};

ParamsReport MakeParamsReport(std::span<const BudgetInput> inputs);

// The radical model, the character baseline and one word baseline per entry
// of word_vocab_sizes, each with the stock hyperparameters.
std::vector<BudgetInput> StockBudgetInputs(size_t radical_vocab, size_t character_vocab,
                                           std::span<const size_t> word_vocab_sizes);

}  // namespace radnet

#endif  // RADNET_PARAMS_REPORT_H_
