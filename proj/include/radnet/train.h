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

#ifndef RADNET_TRAIN_H_
#define RADNET_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radnet/model.h"
#include "radnet/optimizer.h"

namespace radnet {

struct TrainOptions {
  size_t epochs = 0;
  size_t batch_size = 100;
  uint64_t seed = 0;
  RmsPropOptions optimizer;
};

struct EpochStats {
  size_t epoch = 0;  // 1-based
  double train_loss = 0;
  double train_accuracy = 0;
  std::optional<double> eval_loss;
  std::optional<double> eval_accuracy;
  double wall_seconds = 0;

  nlohmann::json ToJson() const;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  // Highest eval accuracy when a dev set is given, else lowest train loss;
  // 0 when no epoch ran.
  size_t best_epoch = 0;

  // One JSON object per epoch and line; the best epoch carries "best": true.
  std::string ToJsonLines() const;
};

struct EvalResult {
  double accuracy = 0;
  double loss = 0;  // mean per-document negative log-likelihood
  size_t documents = 0;
};

// Argmax predictions break ties towards the lower class index.
template <typename T>
EvalResult Evaluate(const Model<T>& model, std::span<const EncodedDocument> docs,
                    size_t batch_size = 100);

// Mini-batch RMSprop. Each epoch reshuffles the training set with a stream
// derived from options.seed; the last partial batch is kept. Train loss and
// accuracy are averaged over the epoch's batches before each update.
template <typename T>
TrainReport Train(Model<T>& model, std::span<const EncodedDocument> train,
                  std::span<const EncodedDocument> dev,
                  const TrainOptions& options,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

template <typename T>
struct TrainResult {
  Model<T> model;
  TrainReport report;
};

// Initializes a model from the "init" stream of options.seed and trains it.
template <typename T>
TrainResult<T> TrainFromScratch(const ModelConfig& config, size_t vocab_size,
                                std::span<const EncodedDocument> train,
                                std::span<const EncodedDocument> dev,
                                const TrainOptions& options,
                                const std::function<void(const EpochStats&)>& on_epoch = {});

}  // namespace radnet

#endif  // RADNET_TRAIN_H_
