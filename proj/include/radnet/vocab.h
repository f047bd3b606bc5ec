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

#ifndef RADNET_VOCAB_H_
#define RADNET_VOCAB_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "radnet/dataset.h"
#include "radnet/ids.h"

namespace radnet {

enum class ModelVariant { kRadical, kCharacter, kWord };

std::string VariantName(ModelVariant v);
ModelVariant ParseVariant(std::string_view name);

inline constexpr int32_t kPadId = 0;
inline constexpr int32_t kUnkId = 1;
inline constexpr std::string_view kPadSymbol = "<pad>";
inline constexpr std::string_view kUnkSymbol = "<unk>";

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symbol <-> id mapping. Ids 0 and 1 are always PAD and UNK; every other
// symbol gets the next id on first insertion.
class Vocab {
 public:
  static constexpr int kFormatVersion = 1;

  Vocab();

  int32_t Add(std::string_view symbol);
  int32_t Lookup(std::string_view symbol) const;
  bool Contains(std::string_view symbol) const;
  const std::string& symbol(int32_t id) const { return symbols_.at(id); }
  size_t size() const { return symbols_.size(); }

  nlohmann::json ToJson() const;
  static Vocab FromJson(const nlohmann::json& j);

  bool operator==(const Vocab& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  std::unordered_map<std::string, int32_t> index_;
  std::vector<std::string> symbols_;
};

// Every terminal reached by flattening every character of every token, in
// first-occurrence order. Unknown ideographs contribute nothing (they encode
// as UNK).
Vocab BuildRadicalVocab(std::span<const Document> corpus,
                        const DecompositionTable& table);
Vocab BuildCharacterVocab(std::span<const Document> corpus);
Vocab BuildWordVocab(std::span<const Document> corpus);

// Dispatches on the variant; `table` is only read for kRadical.
Vocab BuildVocab(ModelVariant variant, std::span<const Document> corpus,
                 const DecompositionTable& table);

struct EncodingShape {
  size_t words = 500;  // l
  size_t chars = 4;    // m
  size_t slots = 3;    // n

  size_t word_size() const { return chars * slots; }
  size_t size() const { return words * chars * slots; }
  void Validate() const;

  bool operator==(const EncodingShape&) const = default;
};

inline constexpr int kNoLabel = -1;

struct EncodedDocument {
  EncodingShape shape;
  std::vector<int32_t> indices;  // words x chars x slots, row-major
  int label = kNoLabel;
  size_t true_length = 0;

  int32_t at(size_t word, size_t ch, size_t slot) const {
    return indices[(word * shape.chars + ch) * shape.slots + slot];
  }
};

// Turns pre-segmented documents into fixed-shape id tensors. Holds
// references to the vocabulary and table; both must outlive the encoder.
class DocumentEncoder {
 public:
  DocumentEncoder(ModelVariant variant, const Vocab& vocab,
                  const DecompositionTable& table, EncodingShape shape,
                  int num_classes);

  // Length `slots`: radical ids truncated or PAD-padded. Non-decomposable
  // symbols take the first slot alone.
  std::vector<int32_t> EncodeCharacter(Codepoint c) const;

  // Length chars*slots. For the word variant, a single id per word.
  std::vector<int32_t> EncodeWord(std::string_view word) const;

  // Throws EncodingError when the label is outside [0, num_classes).
  EncodedDocument EncodeDocument(std::span<const std::string> tokens,
                                 int label) const;

  // Same, for documents without a label.
  EncodedDocument EncodeTokens(std::span<const std::string> tokens) const;

  std::vector<EncodedDocument> EncodeAll(std::span<const Document> docs) const;

  const EncodingShape& shape() const { return shape_; }
  ModelVariant variant() const { return variant_; }

 private:
  void WriteWord(std::string_view word, int32_t* out) const;

  ModelVariant variant_;
  const Vocab* vocab_;
  const DecompositionTable* table_;
  EncodingShape shape_;
  int num_classes_;
};

}  // namespace radnet

#endif  // RADNET_VOCAB_H_
