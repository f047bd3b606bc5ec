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

#include "radnet/vocab.h"

#include <algorithm>

namespace radnet {

using json = nlohmann::json;

std::string VariantName(ModelVariant v) {
  switch (v) {
    case ModelVariant::kRadical:
      return "radical";
    case ModelVariant::kCharacter:
      return "character";
    case ModelVariant::kWord:
      return "word";
  }
  return "?";
}

ModelVariant ParseVariant(std::string_view name) {
  if (name == "radical") return ModelVariant::kRadical;
  if (name == "character") return ModelVariant::kCharacter;
  if (name == "word") return ModelVariant::kWord;
  throw std::invalid_argument("unknown model variant: " + std::string(name));
}

Vocab::Vocab() {
  Add(kPadSymbol);
  Add(kUnkSymbol);
}

int32_t Vocab::Add(std::string_view symbol) {
  auto it = index_.find(std::string(symbol));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<int32_t>(symbols_.size());
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), id);
  return id;
}

int32_t Vocab::Lookup(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocab::Contains(std::string_view symbol) const {
  return index_.count(std::string(symbol)) > 0;
}

json Vocab::ToJson() const {
  json symbols = json::object();
  for (size_t i = 0; i < symbols_.size(); ++i) {
    symbols[symbols_[i]] = static_cast<int32_t>(i);
  }
  return json{{"version", kFormatVersion}, {"symbols", std::move(symbols)}};
}

Vocab Vocab::FromJson(const json& j) {
  if (!j.is_object() || !j.contains("version") || !j.contains("symbols")) {
    throw EncodingError("vocabulary JSON needs \"version\" and \"symbols\"");
  }
  if (j.at("version") != kFormatVersion) {
    throw EncodingError("unsupported vocabulary version " +
                        j.at("version").dump());
  }
  const json& symbols = j.at("symbols");
  if (!symbols.is_object()) {
    throw EncodingError("vocabulary \"symbols\" must be an object");
  }
  std::vector<std::string> by_id(symbols.size());
  std::vector<bool> seen(symbols.size(), false);
  for (const auto& [symbol, id_json] : symbols.items()) {
    if (!id_json.is_number_integer()) {
      throw EncodingError("vocabulary id for '" + symbol + "' is not an int");
    }
    const auto id = id_json.get<int64_t>();
    if (id < 0 || id >= static_cast<int64_t>(by_id.size()) || seen[id]) {
      throw EncodingError("vocabulary ids must be a permutation of 0.." +
                          std::to_string(by_id.size() - 1));
    }
    seen[id] = true;
    by_id[id] = symbol;
  }
  if (by_id.size() < 2 || by_id[kPadId] != kPadSymbol ||
      by_id[kUnkId] != kUnkSymbol) {
    throw EncodingError("vocabulary must reserve ids 0 and 1 for " +
                        std::string(kPadSymbol) + " and " +
                        std::string(kUnkSymbol));
  }
  Vocab v;
  for (size_t i = 2; i < by_id.size(); ++i) v.Add(by_id[i]);
  return v;
}

Vocab BuildRadicalVocab(std::span<const Document> corpus,
                        const DecompositionTable& table) {
  Vocab vocab;
  for (const auto& doc : corpus) {
    for (const auto& token : doc.tokens) {
      for (Codepoint c : DecodeUtf8(token)) {
        for (Codepoint r : FlattenCharacter(c, table).radicals) {
          if (r != kUnknownRadical) vocab.Add(EncodeUtf8(r));
        }
      }
    }
  }
  return vocab;
}

Vocab BuildCharacterVocab(std::span<const Document> corpus) {
  Vocab vocab;
  for (const auto& doc : corpus) {
    for (const auto& token : doc.tokens) {
      for (Codepoint c : DecodeUtf8(token)) vocab.Add(EncodeUtf8(c));
    }
  }
  return vocab;
}

Vocab BuildWordVocab(std::span<const Document> corpus) {
  Vocab vocab;
  for (const auto& doc : corpus) {
    for (const auto& token : doc.tokens) {
      if (!token.empty()) vocab.Add(token);
    }
  }
  return vocab;
}

Vocab BuildVocab(ModelVariant variant, std::span<const Document> corpus,
                 const DecompositionTable& table) {
  switch (variant) {
    case ModelVariant::kRadical:
      return BuildRadicalVocab(corpus, table);
    case ModelVariant::kCharacter:
      return BuildCharacterVocab(corpus);
    case ModelVariant::kWord:
      return BuildWordVocab(corpus);
  }
  return Vocab();
}

void EncodingShape::Validate() const {
  if (words == 0 || chars == 0 || slots == 0) {
    throw EncodingError("encoding shape dimensions must be >= 1");
  }
}

DocumentEncoder::DocumentEncoder(ModelVariant variant, const Vocab& vocab,
                                 const DecompositionTable& table,
                                 EncodingShape shape, int num_classes)
    : variant_(variant),
      vocab_(&vocab),
      table_(&table),
      shape_(shape),
      num_classes_(num_classes) {
  shape_.Validate();
  if (variant_ == ModelVariant::kWord && shape_.word_size() != 1) {
    throw EncodingError("word variant needs chars = slots = 1");
  }
}

std::vector<int32_t> DocumentEncoder::EncodeCharacter(Codepoint c) const {
  std::vector<int32_t> out(shape_.slots, kPadId);
  if (variant_ != ModelVariant::kRadical) {
    out[0] = vocab_->Lookup(EncodeUtf8(c));
    return out;
  }
  const RadicalSequence seq = FlattenCharacter(c, *table_);
  const size_t n = std::min(seq.radicals.size(), shape_.slots);
  for (size_t k = 0; k < n; ++k) {
    const Codepoint r = seq.radicals[k];
    out[k] = r == kUnknownRadical ? kUnkId : vocab_->Lookup(EncodeUtf8(r));
  }
  return out;
}

void DocumentEncoder::WriteWord(std::string_view word, int32_t* out) const {
  std::fill(out, out + shape_.word_size(), kPadId);
  if (word.empty()) return;
  if (variant_ == ModelVariant::kWord) {
    out[0] = vocab_->Lookup(word);
    return;
  }
  const std::vector<Codepoint> chars = DecodeUtf8(word);
  const size_t m = std::min(chars.size(), shape_.chars);
  for (size_t i = 0; i < m; ++i) {
    const std::vector<int32_t> row = EncodeCharacter(chars[i]);
    std::copy(row.begin(), row.end(), out + i * shape_.slots);
  }
}

std::vector<int32_t> DocumentEncoder::EncodeWord(std::string_view word) const {
  std::vector<int32_t> out(shape_.word_size());
  WriteWord(word, out.data());
  return out;
}

EncodedDocument DocumentEncoder::EncodeTokens(
    std::span<const std::string> tokens) const {
  EncodedDocument doc;
  doc.shape = shape_;
  doc.indices.assign(shape_.size(), kPadId);
  doc.true_length = std::min(tokens.size(), shape_.words);
  for (size_t t = 0; t < doc.true_length; ++t) {
    WriteWord(tokens[t], doc.indices.data() + t * shape_.word_size());
  }
  return doc;
}

EncodedDocument DocumentEncoder::EncodeDocument(
    std::span<const std::string> tokens, int label) const {
  if (label < 0 || label >= num_classes_) {
    throw EncodingError("label " + std::to_string(label) +
                        " outside the label set [0, " +
                        std::to_string(num_classes_) + ")");
  }
  EncodedDocument doc = EncodeTokens(tokens);
  doc.label = label;
  return doc;
}

std::vector<EncodedDocument> DocumentEncoder::EncodeAll(
    std::span<const Document> docs) const {
  std::vector<EncodedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    out.push_back(d.label == kNoLabel ? EncodeTokens(d.tokens)
                                      : EncodeDocument(d.tokens, d.label));
  }
  return out;
}

}  // namespace radnet
