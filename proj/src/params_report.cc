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

#include <algorithm>
#include <cstdio>

namespace radnet {

using json = nlohmann::json;

ParamsReport MakeParamsReport(std::span<const BudgetInput> inputs) {
  ParamsReport report;
  for (const BudgetInput& in : inputs) {
    ModelBudget b{in, CountParameters(in.config, in.vocab_size), 0};
    for (const auto& item : b.items) b.total += item.count;
    report.models.push_back(std::move(b));
  }
  for (size_t i = 0; i < report.models.size(); ++i) {
    for (size_t j = i + 1; j < report.models.size(); ++j) {
      report.reductions.push_back({i, j, report.ReductionPercent(i, j)});
    }
  }
  return report;
}

double ParamsReport::ReductionPercent(size_t model, size_t baseline) const {
  const double base = static_cast<double>(models.at(baseline).total);
  if (base == 0) return 0;
  return 100.0 * (1.0 - static_cast<double>(models.at(model).total) / base);
}

std::string ParamsReport::RenderText() const {
  std::string out;
  char line[256];
  for (const ModelBudget& m : models) {
    std::snprintf(line, sizeof(line), "%s (%s, vocabulary %zu)\n",
                  m.input.label.c_str(), VariantName(m.input.config.variant).c_str(),
                  m.input.vocab_size);
    out += line;
    size_t width = 5;
    for (const auto& item : m.items) width = std::max(width, item.name.size());
    for (const auto& item : m.items) {
      std::snprintf(line, sizeof(line), "  %-*s %14llu\n", static_cast<int>(width),
                    item.name.c_str(), static_cast<unsigned long long>(item.count));
      out += line;
    }
    std::snprintf(line, sizeof(line), "  %-*s %14llu\n\n", static_cast<int>(width),
                  "total", static_cast<unsigned long long>(m.total));
    out += line;
  }
  out += "reductions\n";
  for (const Reduction& r : reductions) {
    std::snprintf(line, sizeof(line), "  %-24s vs %-24s %8.2f%% fewer\n",
                  models[r.model].input.label.c_str(),
                  models[r.baseline].input.label.c_str(), r.percent);
    out += line;
  }
  return out;
}

json ParamsReport::ToJson() const {
  json ms = json::array();
  for (const ModelBudget& m : models) {
    json items = json::array();
    for (const auto& item : m.items) {
      items.push_back({{"name", item.name}, {"count", item.count}});
    }
    ms.push_back({{"label", m.input.label},
                  {"variant", VariantName(m.input.config.variant)},
                  {"vocab_size", m.input.vocab_size},
                  {"items", std::move(items)},
                  {"total", m.total}});
  }
  json rs = json::array();
  for (const Reduction& r : reductions) {
    rs.push_back({{"model", models[r.model].input.label},
                  {"baseline", models[r.baseline].input.label},
                  {"percent", r.percent}});
  }
  return json{{"models", std::move(ms)}, {"reductions", std::move(rs)}};
}

std::vector<BudgetInput> StockBudgetInputs(size_t radical_vocab, size_t character_vocab,
                                           std::span<const size_t> word_vocab_sizes) {
  std::vector<BudgetInput> inputs;
  inputs.push_back({"radical", ModelConfig::Proposed(), radical_vocab});
  inputs.push_back({"character", ModelConfig::CharacterBaseline(), character_vocab});
  for (size_t w : word_vocab_sizes) {
    inputs.push_back({"word-" + std::to_string(w), ModelConfig::WordBaseline(), w});
  }
  return inputs;
}

}  // namespace radnet
