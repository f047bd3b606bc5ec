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

#include "radnet/train.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace radnet {

using json = nlohmann::json;

json EpochStats::ToJson() const {
  json j{{"epoch", epoch},
         {"train_loss", train_loss},
         {"train_accuracy", train_accuracy},
         {"wall_time_s", wall_seconds}};
  j["eval_loss"] = eval_loss ? json(*eval_loss) : json(nullptr);
  j["eval_accuracy"] = eval_accuracy ? json(*eval_accuracy) : json(nullptr);
  return j;
}

std::string TrainReport::ToJsonLines() const {
  std::string out;
  for (const auto& e : epochs) {
    json j = e.ToJson();
    j["best"] = e.epoch == best_epoch;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

void CheckLabels(std::span<const EncodedDocument> docs, size_t classes,
                 const char* which) {
  for (size_t i = 0; i < docs.size(); ++i) {
    const int y = docs[i].label;
    if (y < 0 || static_cast<size_t>(y) >= classes) {
      throw std::invalid_argument(std::string(which) + " document " +
                                  std::to_string(i) + " has label " +
                                  std::to_string(y) + " outside [0, " +
                                  std::to_string(classes) + ")");
    }
  }
}

size_t Argmax(std::span<const double> row) {
  size_t best = 0;
  for (size_t k = 1; k < row.size(); ++k) {
    if (row[k] > row[best]) best = k;
  }
  return best;
}

// Per-row negative log-likelihood and correctness, computed in double.
template <typename T>
void ScoreLogits(std::span<const T> logits, size_t classes,
                 std::span<const EncodedDocument* const> batch, double* nll_sum,
                 size_t* correct) {
  std::vector<double> row(classes);
  for (size_t i = 0; i < batch.size(); ++i) {
    for (size_t k = 0; k < classes; ++k) row[k] = logits[i * classes + k];
    double mx = row[0];
    for (double v : row) mx = std::max(mx, v);
    double sum = 0;
    for (double v : row) sum += std::exp(v - mx);
    const int y = batch[i]->label;
    *nll_sum += mx + std::log(sum) - row[y];
    if (Argmax(row) == static_cast<size_t>(y)) ++*correct;
  }
}

}  // namespace

template <typename T>
EvalResult Evaluate(const Model<T>& model, std::span<const EncodedDocument> docs,
                    size_t batch_size) {
  EvalResult result;
  result.documents = docs.size();
  if (docs.empty()) return result;
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  const size_t classes = model.config().num_classes;
  CheckLabels(docs, classes, "evaluation");
  double nll = 0;
  size_t correct = 0;
  std::vector<const EncodedDocument*> batch;
  for (size_t start = 0; start < docs.size(); start += batch_size) {
    batch.clear();
    const size_t end = std::min(docs.size(), start + batch_size);
    for (size_t i = start; i < end; ++i) batch.push_back(&docs[i]);
    ad::Tape<T> tape;
    ad::Var<T> logits = model.Forward(tape, batch);
    ScoreLogits<T>(logits.value(), classes, batch, &nll, &correct);
  }
  result.accuracy = static_cast<double>(correct) / docs.size();
  result.loss = nll / docs.size();
  return result;
}

template <typename T>
TrainReport Train(Model<T>& model, std::span<const EncodedDocument> train,
                  std::span<const EncodedDocument> dev,
                  const TrainOptions& options,
                  const std::function<void(const EpochStats&)>& on_epoch) {
  if (train.empty()) throw std::invalid_argument("training set is empty");
  if (options.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  const size_t classes = model.config().num_classes;
  CheckLabels(train, classes, "training");
  CheckLabels(dev, classes, "dev");

  RmsProp<T> optimizer(options.optimizer);
  Rng shuffle_rng = Rng(options.seed).Split("shuffle");
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  std::vector<const EncodedDocument*> batch;
  for (size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    const auto start_time = std::chrono::steady_clock::now();
    shuffle_rng.Shuffle(&order);
    double nll = 0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += options.batch_size) {
      batch.clear();
      const size_t end = std::min(order.size(), start + options.batch_size);
      for (size_t i = start; i < end; ++i) batch.push_back(&train[order[i]]);

      model.ZeroGrad();
      ad::Tape<T> tape;
      ad::Var<T> logits = model.Forward(tape, batch);
      std::vector<int> labels;
      for (const EncodedDocument* d : batch) labels.push_back(d->label);
      ad::Var<T> loss = ad::SoftmaxCrossEntropy<T>(logits, labels);
      ScoreLogits<T>(logits.value(), classes, batch, &nll, &correct);
      tape.Backward(loss);
      optimizer.Step(model.parameters());
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = nll / train.size();
    stats.train_accuracy = static_cast<double>(correct) / train.size();
    if (!dev.empty()) {
      const EvalResult eval = Evaluate(model, dev, options.batch_size);
      stats.eval_loss = eval.loss;
      stats.eval_accuracy = eval.accuracy;
    }
    stats.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_time)
                             .count();
    report.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }

  for (const auto& e : report.epochs) {
    if (report.best_epoch == 0) {
      report.best_epoch = e.epoch;
      continue;
    }
    const EpochStats& best = report.epochs[report.best_epoch - 1];
    const bool better = e.eval_accuracy ? *e.eval_accuracy > *best.eval_accuracy
                                        : e.train_loss < best.train_loss;
    if (better) report.best_epoch = e.epoch;
  }
  return report;
}

template <typename T>
TrainResult<T> TrainFromScratch(const ModelConfig& config, size_t vocab_size,
                                std::span<const EncodedDocument> train,
                                std::span<const EncodedDocument> dev,
                                const TrainOptions& options,
                                const std::function<void(const EpochStats&)>& on_epoch) {
  Model<T> model(config, vocab_size);
  model.Initialize(Rng(options.seed).Split("init"));
  TrainReport report = Train(model, train, dev, options, on_epoch);
  return {std::move(model), std::move(report)};
}

#define RADNET_INSTANTIATE(T)                                                  \
  template EvalResult Evaluate(const Model<T>&, std::span<const EncodedDocument>, \
                               size_t);                                        \
  template TrainReport Train(Model<T>&, std::span<const EncodedDocument>,      \
                             std::span<const EncodedDocument>,                 \
                             const TrainOptions&,                              \
                             const std::function<void(const EpochStats&)>&);   \
  template TrainResult<T> TrainFromScratch(                                    \
      const ModelConfig&, size_t, std::span<const EncodedDocument>,            \
      std::span<const EncodedDocument>, const TrainOptions&,                   \
      const std::function<void(const EpochStats&)>&);

RADNET_INSTANTIATE(float)
RADNET_INSTANTIATE(double)

#undef RADNET_INSTANTIATE

}  // namespace radnet
