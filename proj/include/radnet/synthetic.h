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

#ifndef RADNET_SYNTHETIC_H_
#define RADNET_SYNTHETIC_H_

// Labelled toy corpora whose class signal lives at the radical level: each
// class owns a few radicals, and a document of class y contains composite
// characters built from one of y's radicals plus filler radicals. The
// composite characters themselves are numerous, so a model has to pick up
// the shared radical rather than memorise characters or words.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "radnet/dataset.h"

namespace radnet {

struct SyntheticSpec {
  size_t num_classes = 2;
  size_t filler_radicals = 40;
  size_t signal_radicals_per_class = 3;
  size_t signal_characters_per_class = 24;
  size_t filler_characters = 120;
  size_t train_documents = 200;
  size_t test_documents = 100;
  size_t min_words = 4;
  size_t max_words = 20;
  size_t max_chars_per_word = 4;
  size_t min_signal_words = 2;
  size_t max_signal_words = 3;
  // Probability that a document's label is swapped for another class.
  double noise = 0.0;
  uint64_t seed = 0;

  // Throws std::invalid_argument.
  void Validate() const;
};

struct SyntheticCorpus {
  std::string table_tsv;
  std::vector<Document> train;
  std::vector<Document> test;
  // Signal radicals per class, as UTF-8 strings.
  std::vector<std::vector<std::string>> signal_radicals;
};

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace radnet

#endif  // RADNET_SYNTHETIC_H_
