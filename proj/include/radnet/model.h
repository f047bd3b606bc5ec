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

#ifndef RADNET_MODEL_H_
#define RADNET_MODEL_H_

// Document classifier: per-word CNN encoder over radical (or character)
// embeddings, an optional highway layer, a bidirectional LSTM over the word
// features, and a softmax head. The word-embedding baseline replaces the
// CNN with a direct d_x-dimensional word lookup.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radnet/autodiff.h"
#include "radnet/rng.h"
#include "radnet/vocab.h"

namespace radnet {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FilterSpec {
  size_t width = 1;     // w
  size_t stride = 1;    // r
  size_t channels = 1;  // a

  bool operator==(const FilterSpec&) const = default;
};

struct ModelConfig {
  ModelVariant variant = ModelVariant::kRadical;
  EncodingShape shape;
  size_t embedding_dim = 15;  // d_c; unused by the word variant
  size_t word_dim = 600;      // d_x
  size_t doc_dim = 300;       // d_z, split evenly across both directions
  // Output channels follow a = round(channel_multiplier * w / r).
  double channel_multiplier = 50;
  std::vector<FilterSpec> filters;
  ad::Activation activation = ad::Activation::kRelu;
  bool highway = false;
  size_t num_classes = 2;

  // Radical model: w = [1,2,3,3,6,9], r = [1,1,1,3,3,3], a = 50·w/r.
  static ModelConfig Proposed();
  // Character-embedding CNN: w = [1,2,3], r = 1, a = 100·w, one slot per char.
  static ModelConfig CharacterBaseline();
  // Word-embedding BiLSTM with d_x-dimensional word vectors.
  static ModelConfig WordBaseline();

  // Builds the filter bank for widths/strides from channel_multiplier.
  static std::vector<FilterSpec> MakeFilters(double channel_multiplier,
                                             std::span<const size_t> widths,
                                             std::span<const size_t> strides);

  size_t hidden_dim() const { return doc_dim / 2; }
  // Embedding rows: d_c, or d_x for the word variant.
  size_t input_embedding_dim() const;

  // Throws ConfigError describing the first violated constraint.
  void Validate() const;

  nlohmann::json ToJson() const;
  // Missing keys take the Proposed() defaults (or the variant's defaults);
  // filters may omit "a", which is then derived. The result is validated.
  static ModelConfig FromJson(const nlohmann::json& j);

  bool operator==(const ModelConfig&) const = default;
};

template <typename T>
struct LstmWeights {
  // Gate order f, i, c, o. Each W is hidden×(hidden+input) acting on
  // [h_{t-1}, x_t].
  ad::Var<T> weight[4];
  ad::Var<T> bias[4];
};

template <typename T>
struct LstmState {
  ad::Var<T> h;
  ad::Var<T> cell;
};

// One LSTM step over a batch: x is B×input, state tensors B×hidden.
template <typename T>
LstmState<T> LstmStep(ad::Var<T> x, const LstmState<T>& prev,
                      const LstmWeights<T>& w);

// Runs the two directions over `features` (rows ordered time-major, i.e.
// row t*batch + b) from zero states and returns [h_l, h_1], batch×2·hidden.
template <typename T>
ad::Var<T> BiLstmEncode(ad::Var<T> features, size_t batch, size_t steps,
                        const LstmWeights<T>& forward,
                        const LstmWeights<T>& backward);

// t = σ(x·W_tᵀ + b_t); y = t ⊙ relu(x·W_hᵀ + b_h) + (1 − t) ⊙ x.
template <typename T>
ad::Var<T> Highway(ad::Var<T> x, ad::Var<T> transform_weight,
                   ad::Var<T> transform_bias, ad::Var<T> gate_weight,
                   ad::Var<T> gate_bias);

template <typename T>
class Model {
 public:
  // All parameters start at zero; call Initialize() for random weights.
  Model(ModelConfig config, size_t vocab_size);

  // Embeddings ~ U(−0.05, 0.05) with the PAD column zero, weight matrices
  // ~ U(±sqrt(6/(fan_in+fan_out))), biases zero.
  void Initialize(Rng rng);

  const ModelConfig& config() const { return config_; }
  size_t vocab_size() const { return vocab_size_; }

  std::vector<ad::Parameter<T>>& parameters() { return params_; }
  const std::vector<ad::Parameter<T>>& parameters() const { return params_; }
  ad::Parameter<T>& parameter(const std::string& name);
  const ad::Parameter<T>& parameter(const std::string& name) const;
  size_t NumParameters() const;
  void ZeroGrad();

  // Logits for a batch, B×|classes|. The non-const overload records
  // gradients into the parameters; the const overload is inference only.
  ad::Var<T> Forward(ad::Tape<T>& tape,
                     std::span<const EncodedDocument* const> batch);
  ad::Var<T> Forward(ad::Tape<T>& tape,
                     std::span<const EncodedDocument* const> batch) const;

  // Mean cross-entropy of the batch labels.
  ad::Var<T> Loss(ad::Tape<T>& tape,
                  std::span<const EncodedDocument* const> batch);

  // Class probabilities, one row of |classes| per document.
  std::vector<std::vector<T>> Predict(
      std::span<const EncodedDocument* const> batch) const;

  // Word features for N words given their m·n radical slots (or one word id
  // each for the word variant): N×d_x, highway applied when enabled.
  ad::Var<T> EncodeWords(ad::Tape<T>& tape, std::span<const int32_t> indices,
                         size_t num_words) const;

 private:
  struct Bound;

  void AddParameter(const std::string& name, ad::Shape shape);
  Bound Bind(ad::Tape<T>& tape, bool track) const;
  ad::Var<T> EncodeWordsBound(const Bound& b, std::span<const int32_t> indices,
                              size_t num_words) const;
  ad::Var<T> ForwardBound(const Bound& b,
                          std::span<const EncodedDocument* const> batch) const;

  ModelConfig config_;
  size_t vocab_size_;
  std::vector<ad::Parameter<T>> params_;
};

// Element count of every parameter tensor in fixed order, as
// Model::parameters() would produce them.
struct ParameterCount {
  std::string name;
  uint64_t count = 0;
};

// Closed-form itemized budget: embeddings, each filter, highway, each LSTM
// direction, the head.
std::vector<ParameterCount> CountParameters(const ModelConfig& config,
                                            size_t vocab_size);

}  // namespace radnet

#endif  // RADNET_MODEL_H_
