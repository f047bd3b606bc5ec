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

#include "radnet/model.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace radnet {

using json = nlohmann::json;
using ad::Var;

// --- ModelConfig -------------------------------------------------------------

std::vector<FilterSpec> ModelConfig::MakeFilters(
    double channel_multiplier, std::span<const size_t> widths,
    std::span<const size_t> strides) {
  if (widths.size() != strides.size()) {
    throw ConfigError("filter widths and strides differ in length");
  }
  std::vector<FilterSpec> filters;
  for (size_t k = 0; k < widths.size(); ++k) {
    const double a = channel_multiplier * static_cast<double>(widths[k]) /
                     static_cast<double>(strides[k]);
    filters.push_back({widths[k], strides[k], static_cast<size_t>(std::lround(a))});
  }
  return filters;
}

ModelConfig ModelConfig::Proposed() {
  ModelConfig c;
  c.variant = ModelVariant::kRadical;
  c.shape = {500, 4, 3};
  c.channel_multiplier = 50;
  const size_t widths[] = {1, 2, 3, 3, 6, 9};
  const size_t strides[] = {1, 1, 1, 3, 3, 3};
  c.filters = MakeFilters(c.channel_multiplier, widths, strides);
  return c;
}

ModelConfig ModelConfig::CharacterBaseline() {
  ModelConfig c;
  c.variant = ModelVariant::kCharacter;
  c.shape = {500, 4, 1};
  c.channel_multiplier = 100;
  const size_t widths[] = {1, 2, 3};
  const size_t strides[] = {1, 1, 1};
  c.filters = MakeFilters(c.channel_multiplier, widths, strides);
  return c;
}

ModelConfig ModelConfig::WordBaseline() {
  ModelConfig c;
  c.variant = ModelVariant::kWord;
  c.shape = {500, 1, 1};
  c.channel_multiplier = 0;
  c.filters.clear();
  return c;
}

size_t ModelConfig::input_embedding_dim() const {
  return variant == ModelVariant::kWord ? word_dim : embedding_dim;
}

void ModelConfig::Validate() const {
  try {
    shape.Validate();
  } catch (const EncodingError& e) {
    throw ConfigError(e.what());
  }
  if (num_classes < 2) throw ConfigError("num_classes must be at least 2");
  if (doc_dim < 2 || doc_dim % 2 != 0) {
    throw ConfigError("doc_dim must be a positive even number, got " +
                      std::to_string(doc_dim));
  }
  if (word_dim < 1) throw ConfigError("word_dim must be positive");

  if (variant == ModelVariant::kWord) {
    if (shape.chars != 1 || shape.slots != 1) {
      throw ConfigError("word variant needs shape chars = slots = 1");
    }
    if (!filters.empty()) throw ConfigError("word variant takes no filters");
    return;
  }

  if (embedding_dim < 1) throw ConfigError("embedding_dim must be positive");
  if (variant == ModelVariant::kCharacter && shape.slots != 1) {
    throw ConfigError("character variant needs shape slots = 1");
  }
  if (filters.empty()) throw ConfigError("at least one filter is required");
  const size_t temporal = shape.word_size();
  size_t channel_sum = 0;
  for (size_t k = 0; k < filters.size(); ++k) {
    const FilterSpec& f = filters[k];
    const std::string which = "filter " + std::to_string(k) + " (w=" +
                              std::to_string(f.width) + ", r=" +
                              std::to_string(f.stride) + ")";
    if (f.width < 1 || f.stride < 1) {
      throw ConfigError(which + ": width and stride must be positive");
    }
    if (f.stride > 1 && (f.stride != shape.slots || f.width % shape.slots != 0)) {
      throw ConfigError(which + ": a stride above 1 must equal the slot count " +
                        std::to_string(shape.slots) +
                        " with a width that is a multiple of it");
    }
    if (f.width > temporal) {
      throw ConfigError(which + ": width exceeds the " +
                        std::to_string(temporal) + " radical slots of a word");
    }
    const auto expected = static_cast<size_t>(std::lround(
        channel_multiplier * static_cast<double>(f.width) / f.stride));
    if (f.channels != expected || f.channels == 0) {
      throw ConfigError(which + ": " + std::to_string(f.channels) +
                        " output channels, expected round(" +
                        std::to_string(channel_multiplier) + "*w/r) = " +
                        std::to_string(expected));
    }
    channel_sum += f.channels;
  }
  if (channel_sum != word_dim) {
    throw ConfigError("filter channels sum to " + std::to_string(channel_sum) +
                      " but word_dim is " + std::to_string(word_dim));
  }
}

json ModelConfig::ToJson() const {
  json filters_json = json::array();
  for (const auto& f : filters) {
    filters_json.push_back({{"w", f.width}, {"r", f.stride}, {"a", f.channels}});
  }
  return json{
      {"variant", VariantName(variant)},
      {"shape",
       {{"words", shape.words}, {"chars", shape.chars}, {"slots", shape.slots}}},
      {"embedding_dim", embedding_dim},
      {"word_dim", word_dim},
      {"doc_dim", doc_dim},
      {"channel_multiplier", channel_multiplier},
      {"filters", std::move(filters_json)},
      {"activation", ad::ActivationName(activation)},
      {"highway", highway},
      {"num_classes", num_classes},
  };
}

namespace {

size_t GetSize(const json& j, const char* key, size_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && *it >= 0)) {
    throw ConfigError(std::string("\"") + key +
                      "\" must be a non-negative integer");
  }
  return it->get<size_t>();
}

void RejectUnknownKeys(const json& j, const std::set<std::string>& known,
                       const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
  }
}

}  // namespace

ModelConfig ModelConfig::FromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  RejectUnknownKeys(j,
                    {"variant", "shape", "embedding_dim", "word_dim", "doc_dim",
                     "channel_multiplier", "filters", "activation", "highway",
                     "num_classes"},
                    "model config");
  ModelVariant variant = ModelVariant::kRadical;
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ConfigError("\"variant\" must be a string");
    try {
      variant = ParseVariant(j["variant"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  ModelConfig c = variant == ModelVariant::kRadical     ? Proposed()
                  : variant == ModelVariant::kCharacter ? CharacterBaseline()
                                                        : WordBaseline();
  if (j.contains("shape")) {
    const json& s = j["shape"];
    if (!s.is_object()) throw ConfigError("\"shape\" must be an object");
    RejectUnknownKeys(s, {"words", "chars", "slots"}, "shape");
    c.shape.words = GetSize(s, "words", c.shape.words);
    c.shape.chars = GetSize(s, "chars", c.shape.chars);
    c.shape.slots = GetSize(s, "slots", c.shape.slots);
  }
  c.embedding_dim = GetSize(j, "embedding_dim", c.embedding_dim);
  c.word_dim = GetSize(j, "word_dim", c.word_dim);
  c.doc_dim = GetSize(j, "doc_dim", c.doc_dim);
  c.num_classes = GetSize(j, "num_classes", c.num_classes);
  if (j.contains("channel_multiplier")) {
    if (!j["channel_multiplier"].is_number()) {
      throw ConfigError("\"channel_multiplier\" must be a number");
    }
    const double mult = j["channel_multiplier"].get<double>();
    if (mult != c.channel_multiplier && !j.contains("filters")) {
      std::vector<size_t> widths, strides;
      for (const auto& f : c.filters) {
        widths.push_back(f.width);
        strides.push_back(f.stride);
      }
      c.filters = MakeFilters(mult, widths, strides);
    }
    c.channel_multiplier = mult;
  }
  if (j.contains("filters")) {
    const json& fs = j["filters"];
    if (!fs.is_array()) throw ConfigError("\"filters\" must be an array");
    c.filters.clear();
    for (const json& f : fs) {
      if (!f.is_object()) throw ConfigError("each filter must be an object");
      RejectUnknownKeys(f, {"w", "r", "a"}, "filter");
      FilterSpec spec;
      spec.width = GetSize(f, "w", 0);
      spec.stride = GetSize(f, "r", 1);
      if (spec.width == 0 || spec.stride == 0) {
        throw ConfigError("filter needs positive \"w\" and \"r\"");
      }
      spec.channels = GetSize(
          f, "a",
          static_cast<size_t>(std::lround(c.channel_multiplier *
                                          static_cast<double>(spec.width) /
                                          static_cast<double>(spec.stride))));
      c.filters.push_back(spec);
    }
  }
  if (j.contains("activation")) {
    try {
      c.activation = ad::ParseActivation(j["activation"].get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("highway")) {
    if (!j["highway"].is_boolean()) throw ConfigError("\"highway\" must be a boolean");
    c.highway = j["highway"].get<bool>();
  }
  c.Validate();
  return c;
}

// --- Building blocks ---------------------------------------------------------

template <typename T>
LstmState<T> LstmStep(Var<T> x, const LstmState<T>& prev,
                      const LstmWeights<T>& w) {
  Var<T> hx = ad::Concat<T>({prev.h, x});
  Var<T> f = ad::Sigmoid(ad::Linear(hx, w.weight[0], w.bias[0]));
  Var<T> i = ad::Sigmoid(ad::Linear(hx, w.weight[1], w.bias[1]));
  Var<T> candidate = ad::Tanh(ad::Linear(hx, w.weight[2], w.bias[2]));
  Var<T> o = ad::Sigmoid(ad::Linear(hx, w.weight[3], w.bias[3]));
  Var<T> cell = ad::Add(ad::Mul(f, prev.cell), ad::Mul(i, candidate));
  Var<T> h = ad::Mul(o, ad::Tanh(cell));
  return {h, cell};
}

template <typename T>
Var<T> BiLstmEncode(Var<T> features, size_t batch, size_t steps,
                    const LstmWeights<T>& forward,
                    const LstmWeights<T>& backward) {
  if (steps == 0) throw ad::ShapeError("bilstm: empty sequence");
  if (features.shape().size() != 2 || features.shape()[0] != batch * steps) {
    throw ad::ShapeError("bilstm: expected " + std::to_string(batch * steps) +
                         " feature rows, got shape " +
                         ad::ShapeToString(features.shape()));
  }
  ad::Tape<T>& tape = *features.tape();
  auto zero_state = [&](const LstmWeights<T>& w) {
    const size_t hidden = w.weight[0].shape()[0];
    return LstmState<T>{tape.Constant(ad::Tensor<T>({batch, hidden})),
                        tape.Constant(ad::Tensor<T>({batch, hidden}))};
  };
  auto step_input = [&](size_t t) {
    return ad::SliceRows(features, t * batch, (t + 1) * batch);
  };

  LstmState<T> fwd = zero_state(forward);
  for (size_t t = 0; t < steps; ++t) fwd = LstmStep(step_input(t), fwd, forward);
  LstmState<T> bwd = zero_state(backward);
  for (size_t t = steps; t-- > 0;) bwd = LstmStep(step_input(t), bwd, backward);
  return ad::Concat<T>({fwd.h, bwd.h});
}

template <typename T>
Var<T> Highway(Var<T> x, Var<T> transform_weight, Var<T> transform_bias,
               Var<T> gate_weight, Var<T> gate_bias) {
  Var<T> gate = ad::Sigmoid(ad::Linear(x, gate_weight, gate_bias));
  Var<T> transformed = ad::Relu(ad::Linear(x, transform_weight, transform_bias));
  // x + t ⊙ (h − x)
  return ad::Add(x, ad::Mul(gate, ad::Sub(transformed, x)));
}

// --- Model -------------------------------------------------------------------

namespace {

const char* const kGateNames[4] = {"f", "i", "c", "o"};

}  // namespace

template <typename T>
struct Model<T>::Bound {
  Var<T> embedding;
  std::vector<Var<T>> conv_weight;
  std::vector<Var<T>> conv_bias;
  Var<T> hw_transform_weight, hw_transform_bias, hw_gate_weight, hw_gate_bias;
  LstmWeights<T> forward;
  LstmWeights<T> backward;
  Var<T> head_weight, head_bias;
};

template <typename T>
Model<T>::Model(ModelConfig config, size_t vocab_size)
    : config_(std::move(config)), vocab_size_(vocab_size) {
  config_.Validate();
  if (vocab_size_ < 2) throw ConfigError("vocabulary must hold PAD and UNK");
  const size_t d = config_.input_embedding_dim();
  const size_t dx = config_.word_dim;
  const size_t hidden = config_.hidden_dim();
  AddParameter("embedding", {d, vocab_size_});
  for (size_t k = 0; k < config_.filters.size(); ++k) {
    const FilterSpec& f = config_.filters[k];
    const std::string prefix = "conv" + std::to_string(k);
    AddParameter(prefix + ".weight", {f.channels, d, f.width});
    AddParameter(prefix + ".bias", {f.channels});
  }
  if (config_.highway) {
    AddParameter("highway.transform.weight", {dx, dx});
    AddParameter("highway.transform.bias", {dx});
    AddParameter("highway.gate.weight", {dx, dx});
    AddParameter("highway.gate.bias", {dx});
  }
  for (const char* dir : {"lstm_fwd", "lstm_bwd"}) {
    for (const char* g : kGateNames) {
      AddParameter(std::string(dir) + ".W_" + g, {hidden, hidden + dx});
      AddParameter(std::string(dir) + ".b_" + g, {hidden});
    }
  }
  AddParameter("head.W_p", {config_.num_classes, config_.doc_dim});
  AddParameter("head.b_p", {config_.num_classes});
}

template <typename T>
void Model<T>::AddParameter(const std::string& name, ad::Shape shape) {
  params_.emplace_back(name, std::move(shape));
}

template <typename T>
ad::Parameter<T>& Model<T>::parameter(const std::string& name) {
  for (auto& p : params_) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no parameter named " + name);
}

template <typename T>
const ad::Parameter<T>& Model<T>::parameter(const std::string& name) const {
  return const_cast<Model*>(this)->parameter(name);
}

template <typename T>
size_t Model<T>::NumParameters() const {
  size_t n = 0;
  for (const auto& p : params_) n += p.size();
  return n;
}

template <typename T>
void Model<T>::ZeroGrad() {
  for (auto& p : params_) p.ZeroGrad();
}

template <typename T>
void Model<T>::Initialize(Rng rng) {
  for (auto& p : params_) {
    Rng r = rng.Split(p.name);
    auto& v = p.value.data;
    const ad::Shape& s = p.value.shape;
    if (p.name == "embedding") {
      const size_t vocab = s[1];
      for (size_t j = 0; j < s[0]; ++j) {
        for (size_t c = 0; c < vocab; ++c) {
          v[j * vocab + c] =
              c == static_cast<size_t>(kPadId) ? T(0) : T(r.Uniform(-0.05, 0.05));
        }
      }
    } else if (s.size() == 1) {
      std::fill(v.begin(), v.end(), T(0));
    } else {
      // conv filters a×d×w: fan_in d·w, fan_out a·w; matrices out×in.
      const double fan_in = s.size() == 3 ? double(s[1] * s[2]) : double(s[1]);
      const double fan_out = s.size() == 3 ? double(s[0] * s[2]) : double(s[0]);
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (auto& x : v) x = T(r.Uniform(-limit, limit));
    }
    p.ZeroGrad();
  }
}

template <typename T>
typename Model<T>::Bound Model<T>::Bind(ad::Tape<T>& tape, bool track) const {
  size_t next = 0;
  auto bind = [&]() {
    const ad::Parameter<T>& p = params_[next++];
    return track ? tape.Leaf(const_cast<ad::Parameter<T>&>(p)) : tape.View(p);
  };
  Bound b;
  b.embedding = bind();
  for (size_t k = 0; k < config_.filters.size(); ++k) {
    b.conv_weight.push_back(bind());
    b.conv_bias.push_back(bind());
  }
  if (config_.highway) {
    b.hw_transform_weight = bind();
    b.hw_transform_bias = bind();
    b.hw_gate_weight = bind();
    b.hw_gate_bias = bind();
  }
  for (LstmWeights<T>* w : {&b.forward, &b.backward}) {
    for (int g = 0; g < 4; ++g) {
      w->weight[g] = bind();
      w->bias[g] = bind();
    }
  }
  b.head_weight = bind();
  b.head_bias = bind();
  return b;
}

template <typename T>
Var<T> Model<T>::EncodeWordsBound(const Bound& b,
                                  std::span<const int32_t> indices,
                                  size_t num_words) const {
  Var<T> features;
  if (config_.variant == ModelVariant::kWord) {
    Var<T> looked_up =
        ad::EmbeddingLookup(b.embedding, indices, num_words, 1, kPadId);
    features = ad::Reshape(looked_up, {num_words, config_.word_dim});
  } else {
    const size_t len = config_.shape.word_size();
    Var<T> chars = ad::EmbeddingLookup(b.embedding, indices, num_words, len, kPadId);
    std::vector<Var<T>> pooled;
    for (size_t k = 0; k < config_.filters.size(); ++k) {
      Var<T> conv = ad::Conv1d(chars, b.conv_weight[k], b.conv_bias[k],
                               config_.filters[k].stride);
      pooled.push_back(ad::MaxPoolOverTime(ad::Activate(conv, config_.activation)));
    }
    features = ad::Concat<T>(pooled);
  }
  if (config_.highway) {
    features = Highway(features, b.hw_transform_weight, b.hw_transform_bias,
                       b.hw_gate_weight, b.hw_gate_bias);
  }
  return features;
}

template <typename T>
Var<T> Model<T>::EncodeWords(ad::Tape<T>& tape, std::span<const int32_t> indices,
                             size_t num_words) const {
  return EncodeWordsBound(Bind(tape, false), indices, num_words);
}

template <typename T>
Var<T> Model<T>::ForwardBound(
    const Bound& b, std::span<const EncodedDocument* const> batch) const {
  if (batch.empty()) throw ad::ShapeError("forward: empty batch");
  const EncodingShape& shape = config_.shape;
  const size_t steps = shape.words;
  const size_t word = shape.word_size();
  const size_t n = batch.size();
  std::vector<int32_t> indices(steps * n * word);
  for (size_t d = 0; d < n; ++d) {
    const EncodedDocument& doc = *batch[d];
    if (doc.shape != shape) {
      throw ad::ShapeError("document encoded with a different shape than the model");
    }
    for (size_t t = 0; t < steps; ++t) {
      std::copy_n(doc.indices.begin() + t * word, word,
                  indices.begin() + (t * n + d) * word);
    }
  }
  Var<T> features = EncodeWordsBound(b, indices, steps * n);
  Var<T> z = BiLstmEncode(features, n, steps, b.forward, b.backward);
  return ad::Linear(z, b.head_weight, b.head_bias);
}

template <typename T>
Var<T> Model<T>::Forward(ad::Tape<T>& tape,
                         std::span<const EncodedDocument* const> batch) {
  return ForwardBound(Bind(tape, true), batch);
}

template <typename T>
Var<T> Model<T>::Forward(ad::Tape<T>& tape,
                         std::span<const EncodedDocument* const> batch) const {
  return ForwardBound(Bind(tape, false), batch);
}

template <typename T>
Var<T> Model<T>::Loss(ad::Tape<T>& tape,
                      std::span<const EncodedDocument* const> batch) {
  Var<T> logits = Forward(tape, batch);
  std::vector<int> labels;
  labels.reserve(batch.size());
  for (const EncodedDocument* doc : batch) labels.push_back(doc->label);
  return ad::SoftmaxCrossEntropy<T>(logits, labels);
}

template <typename T>
std::vector<std::vector<T>> Model<T>::Predict(
    std::span<const EncodedDocument* const> batch) const {
  ad::Tape<T> tape;
  Var<T> logits = Forward(tape, batch);
  const size_t k = config_.num_classes;
  const std::vector<T> probs = ad::Softmax<T>(logits.value(), batch.size(), k);
  std::vector<std::vector<T>> out(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    out[i].assign(probs.begin() + i * k, probs.begin() + (i + 1) * k);
  }
  return out;
}

std::vector<ParameterCount> CountParameters(const ModelConfig& config,
                                            size_t vocab_size) {
  config.Validate();
  const uint64_t d = config.input_embedding_dim();
  const uint64_t dx = config.word_dim;
  const uint64_t hidden = config.hidden_dim();
  const uint64_t classes = config.num_classes;
  std::vector<ParameterCount> items;
  items.push_back({"embedding", d * vocab_size});
  for (size_t k = 0; k < config.filters.size(); ++k) {
    const FilterSpec& f = config.filters[k];
    items.push_back({"filter" + std::to_string(k) + " (w=" +
                         std::to_string(f.width) + ", r=" +
                         std::to_string(f.stride) + ", a=" +
                         std::to_string(f.channels) + ")",
                     f.channels * d * f.width + f.channels});
  }
  if (config.highway) items.push_back({"highway", 2 * (dx * dx + dx)});
  const uint64_t lstm = 4 * (hidden * (dx + hidden) + hidden);
  items.push_back({"lstm forward", lstm});
  items.push_back({"lstm backward", lstm});
  items.push_back({"head", classes * config.doc_dim + classes});
  return items;
}

#define RADNET_INSTANTIATE(T)                                                \
  template class Model<T>;                                                   \
  template LstmState<T> LstmStep(Var<T>, const LstmState<T>&,                \
                                 const LstmWeights<T>&);                     \
  template Var<T> BiLstmEncode(Var<T>, size_t, size_t, const LstmWeights<T>&, \
                               const LstmWeights<T>&);                       \
  template Var<T> Highway(Var<T>, Var<T>, Var<T>, Var<T>, Var<T>);

RADNET_INSTANTIATE(float)
RADNET_INSTANTIATE(double)

#undef RADNET_INSTANTIATE

}  // namespace radnet
