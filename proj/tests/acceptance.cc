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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. All thresholds are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpus_util.h"
#include "op_cases.h"
#include "radnet/checkpoint.h"
#include "radnet/cli.h"
#include "radnet/file_util.h"
#include "radnet/ids.h"
#include "radnet/params_report.h"
#include "radnet/train.h"
#include "random_table.h"
#include "test_util.h"
#include "toy_model.h"

namespace radnet {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// 1: gradient suite
constexpr double kOpGradTolerance = 1e-5;
constexpr double kModelGradTolerance = 1e-4;
constexpr double kGradSuiteSeconds = 60;
// 2: channel sums
constexpr size_t kStockWordDim = 600;
// 3: parameter ratios
constexpr double kWordReductionMin = 80, kWordReductionMax = 95;
constexpr double kCharReductionMin = 10, kCharReductionMax = 25;
constexpr double kParamsSeconds = 1;
// 4: uniform predictor
constexpr double kUniformLossTolerance = 1e-6;
// 5: learnability
constexpr double kMinTestAccuracy = 0.95;
constexpr int kLearnEpochs = 200;
constexpr double kLearnSeconds = 600;
constexpr char kLearnSeed[] = "1";
// 6: decomposition
constexpr uint64_t kRandomTables = 25;
// 7: highway ablation
constexpr size_t kAblationEpochs = 30;

// The reduced-size model used for the synthetic runs: l=20, m=4, n=3 and
// the stock filter widths and strides at a tenth of the channels.
constexpr char kSyntheticConfig[] = R"({
  "variant": "radical",
  "shape": {"words": 20, "chars": 4, "slots": 3},
  "embedding_dim": 15,
  "channel_multiplier": 5,
  "word_dim": 60,
  "doc_dim": 40
})";

SyntheticSpec LearnabilitySpec() {
  SyntheticSpec s;
  s.train_documents = 200;
  s.test_documents = 100;
  s.noise = 0;
  s.seed = std::stoull(kLearnSeed);
  return s;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double SecondsSince(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

Outcome GradientSuite() {
  const auto start = Clock::now();
  double op_worst = 0;
  std::string op_worst_name;
  size_t op_checked = 0, op_kinks = 0;
  for (const auto& c : testing::MakeOpCases()) {
    const auto r = testing::CheckGradients(c.pointers(), c.loss);
    op_checked += r.checked;
    op_kinks += r.skipped_kinks;
    if (r.max_relative_error >= op_worst) {
      op_worst = r.max_relative_error;
      op_worst_name = c.name;
    }
  }
  double model_worst = 0;
  size_t model_checked = 0, model_kinks = 0;
  bool coverage = true;
  for (const auto& [seed, highway] : {std::pair{uint64_t{1}, false}, std::pair{uint64_t{2}, true}}) {
    const auto r = testing::FullModelGradCheck(seed, highway);
    Model<double> m(testing::ToyConfig(highway), testing::kToyVocab);
    coverage &= r.checked + r.skipped_kinks + r.excluded == m.NumParameters();
    coverage &= r.excluded == m.config().embedding_dim;  // the PAD column only
    model_worst = std::max(model_worst, r.max_relative_error);
    model_checked += r.checked;
    model_kinks += r.skipped_kinks;
  }
  const double secs = SecondsSince(start);
  const bool pass = op_worst <= kOpGradTolerance && op_checked > 0 &&
                    model_worst <= kModelGradTolerance && model_checked > 0 && coverage &&
                    secs < kGradSuiteSeconds;
  return {pass, "ops max rel err " + Fmt("%.2e", op_worst) + " (" + op_worst_name + ", " +
                    std::to_string(op_checked) + " coords, " + std::to_string(op_kinks) +
                    " kinks skipped); full model " + Fmt("%.2e", model_worst) + " (" +
                    std::to_string(model_checked) + " coords, " +
                    std::to_string(model_kinks) + " kinks skipped); " + Fmt("%.1fs", secs)};
}

Outcome ChannelSums() {
  bool pass = true;
  std::string detail;
  for (const auto& [name, config] : {std::pair{"radical", ModelConfig::Proposed()},
                                     std::pair{"character", ModelConfig::CharacterBaseline()}}) {
    size_t sum = 0;
    for (const auto& f : config.filters) sum += f.channels;
    bool constructs = true;
    try {
      config.Validate();
      Model<float> m(config, 10);
    } catch (const ConfigError&) {
      constructs = false;
    }
    size_t rejected = 0, perturbations = 0;
    for (size_t i = 0; i < config.filters.size(); ++i) {
      for (int delta : {-1, +1}) {
        ModelConfig bad = config;
        bad.filters[i].channels += delta;
        ++perturbations;
        try {
          bad.Validate();
        } catch (const ConfigError&) {
          ++rejected;
        }
      }
    }
    pass &= constructs && sum == kStockWordDim && config.word_dim == kStockWordDim &&
            rejected == perturbations;
    detail += std::string(detail.empty() ? "" : "; ") + name + " sum " +
              std::to_string(sum) + ", " + std::to_string(rejected) + "/" +
              std::to_string(perturbations) + " perturbations rejected";
  }
  return {pass, detail};
}

Outcome ParameterRatios() {
  const auto start = Clock::now();
  const size_t words[] = {30000, 18000};
  const auto inputs = StockBudgetInputs(2000, 21000, words);
  const ParamsReport r = MakeParamsReport(inputs);
  const double secs = SecondsSince(start);
  const uint64_t rad = r.models[0].total, chr = r.models[1].total;
  bool pass = rad < chr && secs < kParamsSeconds;
  const double vs_char = r.ReductionPercent(0, 1);
  pass &= vs_char >= kCharReductionMin && vs_char <= kCharReductionMax;
  std::string detail = "radical " + std::to_string(rad) + ", character " +
                       std::to_string(chr) + " (" + Fmt("%.2f%%", vs_char) + ")";
  for (size_t w = 2; w < r.models.size(); ++w) {
    const double vs_word = r.ReductionPercent(0, w);
    pass &= chr < r.models[w].total && vs_word >= kWordReductionMin &&
            vs_word <= kWordReductionMax;
    detail += ", " + r.models[w].input.label + " " + std::to_string(r.models[w].total) +
              " (" + Fmt("%.2f%%", vs_word) + ")";
  }
  return {pass, detail + "; " + Fmt("%.3fs", secs)};
}

Outcome UniformPredictor() {
  const ModelConfig config = ModelConfig::FromJson(json::parse(kSyntheticConfig));
  const testing::EncodedCorpus c = testing::MakeEncodedCorpus(LearnabilitySpec(), config.shape);
  size_t zeros = 0;
  for (const auto& d : c.test) zeros += d.label == 0;
  Model<float> model(config, c.vocab.size());
  model.Initialize(Rng(1));
  for (const char* name : {"head.W_p", "head.b_p"}) {
    auto& v = model.parameter(name).value.data;
    std::fill(v.begin(), v.end(), 0.0f);
  }
  const EvalResult r = Evaluate(model, std::span(c.test));
  const double gap = std::abs(r.loss - std::numbers::ln2);
  return {2 * zeros == c.test.size() && gap <= kUniformLossTolerance,
          "loss " + Fmt("%.9f", r.loss) + " on " + std::to_string(c.test.size()) +
              " balanced documents, |loss - ln 2| = " + Fmt("%.1e", gap)};
}

struct CliOutcome {
  int code;
  std::string out, err;
};

CliOutcome Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

Outcome Learnability() {
  const auto start = Clock::now();
  testing::TempDir dir;
  WriteFileAtomic(dir / "config.json", kSyntheticConfig);
  const SyntheticSpec spec = LearnabilitySpec();
  const auto gen = Cli({"gen-synthetic", "--seed", kLearnSeed, "--noise", "0",
                        "--train-docs", std::to_string(spec.train_documents),
                        "--test-docs", std::to_string(spec.test_documents),
                        "--train-out", dir / "train.jsonl", "--test-out", dir / "test.jsonl",
                        "--table-out", dir / "table.tsv"});
  if (gen.code != 0) return {false, "gen-synthetic failed: " + gen.err};
  const auto train = Cli({"train", "--data", dir / "train.jsonl", "--config",
                          dir / "config.json", "--table", dir / "table.tsv", "--epochs",
                          std::to_string(kLearnEpochs), "--seed", kLearnSeed,
                          "--checkpoint-out", dir / "model.ckpt", "--report-out",
                          dir / "report.jsonl", "--quiet"});
  if (train.code != 0) return {false, "train failed: " + train.err};
  const auto eval = Cli({"eval", "--checkpoint", dir / "model.ckpt", "--data",
                         dir / "test.jsonl", "--table", dir / "table.tsv"});
  if (eval.code != 0) return {false, "eval failed: " + eval.err};

  std::map<size_t, double> train_loss;
  std::istringstream lines(ReadFile(dir / "report.jsonl"));
  for (std::string line; std::getline(lines, line);) {
    const json j = json::parse(line);
    train_loss[j.at("epoch").get<size_t>()] = j.at("train_loss").get<double>();
  }
  std::istringstream fields(eval.out);
  std::string key;
  double documents = 0, accuracy = 0, loss = 0;
  fields >> key >> documents >> key >> accuracy >> key >> loss;
  const double secs = SecondsSince(start);
  const bool pass = train_loss.size() == static_cast<size_t>(kLearnEpochs) &&
                    train_loss[50] < train_loss[1] && accuracy >= kMinTestAccuracy &&
                    documents == spec.test_documents && secs < kLearnSeconds;
  return {pass, "seed " + std::string(kLearnSeed) + ": test accuracy " +
                    Fmt("%.3f", accuracy) + " (loss " + Fmt("%.4f", loss) +
                    "), train loss epoch 1 " + Fmt("%.4f", train_loss[1]) + " -> epoch 50 " +
                    Fmt("%.4f", train_loss[50]) + "; " + Fmt("%.0fs", secs)};
}

Outcome DecompositionFixedPoint() {
  size_t entries = 0, violations = 0, cycles_found = 0;
  for (uint64_t seed = 1; seed <= kRandomTables; ++seed) {
    Rng rng(seed);
    DecompositionTable t = ParseIdsTable(testing::RandomTableText(rng, 10, 30));
    if (!ValidateTable(t).ok()) return {false, "random table " + std::to_string(seed) + " invalid"};
    Codepoint top = 0;
    for (const auto& [c, prod] : t.entries()) {
      ++entries;
      const auto flat = FlattenCharacter(c, t).radicals;
      if (flat.empty()) ++violations;
      for (Codepoint r : flat) {
        if (IsIdc(r) || FlattenCharacter(r, t).radicals != std::vector<Codepoint>{r}) {
          ++violations;
        }
      }
      if (!t.IsSynthetic(c) && !prod.atomic() &&
          std::find(flat.begin(), flat.end(), Codepoint{0x4E00}) != flat.end()) {
        top = c;
      }
    }
    // Point the first leaf back at a composite that reaches it.
    if (top == 0) continue;
    t.Insert({0x4E00, 0x2FF0, {top, 'k'}});
    if (!ValidateTable(t).cycles.empty()) ++cycles_found;
  }
  const bool pass = violations == 0 && cycles_found > 0;
  return {pass, std::to_string(kRandomTables) + " random tables, " + std::to_string(entries) +
                    " entries, " + std::to_string(violations) + " fixed-point violations; " +
                    std::to_string(cycles_found) + " injected cycles detected"};
}

Outcome HighwayAblation() {
  const ModelConfig base = ModelConfig::FromJson(json::parse(kSyntheticConfig));
  const testing::EncodedCorpus c = testing::MakeEncodedCorpus(LearnabilitySpec(), base.shape);
  TrainOptions opts;
  opts.epochs = kAblationEpochs;
  opts.seed = std::stoull(kLearnSeed);
  std::string detail;
  std::vector<ad::Shape> shapes;
  bool pass = true;
  for (bool highway : {false, true}) {
    ModelConfig config = base;
    config.highway = highway;
    const auto result = TrainFromScratch<float>(config, c.vocab.size(), c.train, {}, opts);
    const EvalResult eval = Evaluate(result.model, std::span(c.test));
    ad::Tape<float> tape;
    std::vector<const EncodedDocument*> batch = {&c.test[0], &c.test[1], &c.test[2]};
    shapes.push_back(result.model.Forward(tape, batch).shape());
    pass &= result.report.epochs.size() == kAblationEpochs;
    detail += std::string(highway ? ", " : "") + "highway " + (highway ? "on" : "off") +
              " accuracy " + Fmt("%.3f", eval.accuracy);
  }
  pass &= shapes[0] == shapes[1];
  return {pass, detail + " after " + std::to_string(kAblationEpochs) +
                    " epochs; logits shape " + ad::ShapeToString(shapes[0])};
}

Outcome DeterminismAndRoundTrip() {
  const ModelConfig config = ModelConfig::FromJson(json::parse(kSyntheticConfig));
  SyntheticSpec spec = LearnabilitySpec();
  spec.train_documents = 60;
  spec.test_documents = 40;
  const testing::EncodedCorpus c = testing::MakeEncodedCorpus(spec, config.shape);
  TrainOptions opts;
  opts.epochs = 3;
  opts.batch_size = 16;
  opts.seed = 5;
  const auto a = TrainFromScratch<float>(config, c.vocab.size(), c.train, c.test, opts);
  const auto b = TrainFromScratch<float>(config, c.vocab.size(), c.train, c.test, opts);
  bool same = a.report.best_epoch == b.report.best_epoch &&
              a.report.epochs.size() == b.report.epochs.size();
  for (size_t i = 0; same && i < a.report.epochs.size(); ++i) {
    const EpochStats& x = a.report.epochs[i];
    const EpochStats& y = b.report.epochs[i];
    same = x.train_loss == y.train_loss && x.train_accuracy == y.train_accuracy &&
           x.eval_loss == y.eval_loss && x.eval_accuracy == y.eval_accuracy;
  }

  testing::TempDir dir;
  SaveCheckpoint(dir / "model.ckpt", a.model, c.vocab);
  const Checkpoint<float> loaded = LoadCheckpoint<float>(dir / "model.ckpt");
  const EvalResult before = Evaluate(a.model, std::span(c.test));
  const EvalResult after = Evaluate(loaded.model, std::span(c.test));
  const bool round_trip = before.loss == after.loss && before.accuracy == after.accuracy &&
                          loaded.vocab == c.vocab;
  return {same && round_trip,
          std::string("equal-seed reports ") + (same ? "identical" : "DIFFER") +
              "; checkpoint eval loss " + Fmt("%.9g", before.loss) + " vs " +
              Fmt("%.9g", after.loss) + (round_trip ? " (bit-exact)" : " (MISMATCH)")};
}

}  // namespace
}  // namespace radnet

int main() {
  using radnet::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient suite", radnet::GradientSuite},
      {"channel-sum invariant", radnet::ChannelSums},
      {"parameter-ratio reproduction", radnet::ParameterRatios},
      {"uniform-predictor baseline", radnet::UniformPredictor},
      {"learnability", radnet::Learnability},
      {"decomposition fixed point", radnet::DecompositionFixedPoint},
      {"highway ablation harness", radnet::HighwayAblation},
      {"determinism and round-trip", radnet::DeterminismAndRoundTrip},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
