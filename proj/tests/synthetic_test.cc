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

#include "radnet/synthetic.h"

#include <set>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "radnet/ids.h"
#include "radnet/utf8.h"
#include "radnet/vocab.h"

namespace radnet {
namespace {

SyntheticSpec Spec(uint64_t seed) {
  SyntheticSpec s;
  s.seed = seed;
  return s;
}

TEST(SyntheticTest, SameSeedSameCorpus) {
  const SyntheticCorpus a = GenerateSynthetic(Spec(5));
  const SyntheticCorpus b = GenerateSynthetic(Spec(5));
  EXPECT_EQ(a.table_tsv, b.table_tsv);
  EXPECT_EQ(SerializeDataset(a.train), SerializeDataset(b.train));
  EXPECT_EQ(SerializeDataset(a.test), SerializeDataset(b.test));
  const SyntheticCorpus c = GenerateSynthetic(Spec(6));
  EXPECT_NE(SerializeDataset(a.train), SerializeDataset(c.train));
}

TEST(SyntheticTest, SizesAndBalancedLabels) {
  const SyntheticSpec spec = Spec(1);
  const SyntheticCorpus c = GenerateSynthetic(spec);
  ASSERT_EQ(c.train.size(), spec.train_documents);
  ASSERT_EQ(c.test.size(), spec.test_documents);
  size_t ones = 0;
  for (const auto& d : c.train) {
    ASSERT_TRUE(d.label == 0 || d.label == 1);
    ones += d.label;
    EXPECT_GE(d.tokens.size(), spec.min_words);
    EXPECT_LE(d.tokens.size(), spec.max_words);
  }
  EXPECT_EQ(ones, spec.train_documents / 2);
}

TEST(SyntheticTest, SignalRadicalsAreDisjointAcrossClasses) {
  SyntheticSpec spec = Spec(2);
  spec.num_classes = 3;
  const SyntheticCorpus c = GenerateSynthetic(spec);
  ASSERT_EQ(c.signal_radicals.size(), 3u);
  std::set<std::string> all;
  size_t total = 0;
  for (const auto& cls : c.signal_radicals) {
    EXPECT_EQ(cls.size(), spec.signal_radicals_per_class);
    total += cls.size();
    all.insert(cls.begin(), cls.end());
  }
  EXPECT_EQ(all.size(), total);
}

// Without noise, every document contains a signal radical of its own class
// and none of another's.
TEST(SyntheticTest, LabelsFollowTheRadicalSignal) {
  const SyntheticCorpus c = GenerateSynthetic(Spec(3));
  const DecompositionTable table = ParseIdsTable(c.table_tsv);
  auto radicals_of = [&](const Document& d) {
    std::set<std::string> out;
    for (const auto& tok : d.tokens) {
      for (Codepoint ch : DecodeUtf8(tok)) {
        for (Codepoint r : FlattenCharacter(ch, table).radicals) out.insert(EncodeUtf8(r));
      }
    }
    return out;
  };
  for (const auto* split : {&c.train, &c.test}) {
    for (const auto& d : *split) {
      const auto rads = radicals_of(d);
      for (size_t y = 0; y < c.signal_radicals.size(); ++y) {
        bool has = false;
        for (const auto& s : c.signal_radicals[y]) has |= rads.count(s) > 0;
        EXPECT_EQ(has, static_cast<int>(y) == d.label);
      }
    }
  }
}

TEST(SyntheticTest, TableValidatesAndDecomposesEveryCharacter) {
  const SyntheticCorpus c = GenerateSynthetic(Spec(4));
  const DecompositionTable table = ParseIdsTable(c.table_tsv);
  const ValidationReport report = ValidateTable(table);
  EXPECT_TRUE(report.ok());
  EXPECT_LE(report.max_flattened_length, 3u);
  for (const auto& d : c.train) {
    for (const auto& tok : d.tokens) {
      for (Codepoint ch : DecodeUtf8(tok)) {
        for (Codepoint r : FlattenCharacter(ch, table).radicals) {
          EXPECT_NE(r, kUnknownRadical);
          EXPECT_FALSE(IsIdc(r));
        }
      }
    }
  }
}

TEST(SyntheticTest, OutputFeedsTheRadicalPipeline) {
  const SyntheticCorpus c = GenerateSynthetic(Spec(5));
  const auto train = ParseDataset(SerializeDataset(c.train), true);
  const auto test = ParseDataset(SerializeDataset(c.test), true);
  const DecompositionTable table = ParseIdsTable(c.table_tsv);
  const Vocab vocab = BuildRadicalVocab(train, table);
  const DocumentEncoder enc(ModelVariant::kRadical, vocab, table, {20, 4, 3}, 2);
  EXPECT_EQ(enc.EncodeAll(train).size(), train.size());
  EXPECT_EQ(enc.EncodeAll(test).size(), test.size());
}

TEST(SyntheticTest, NoiseFlipsSomeLabels) {
  SyntheticSpec spec = Spec(6);
  spec.noise = 0.3;
  const SyntheticCorpus noisy = GenerateSynthetic(spec);
  size_t ones = 0;
  for (const auto& d : noisy.train) ones += d.label;
  EXPECT_NE(ones, spec.train_documents / 2);
}

TEST(SyntheticTest, InvalidSettingsAreRejected) {
  auto bad = [](auto mutate) {
    SyntheticSpec s;
    mutate(s);
    return s;
  };
  EXPECT_THROW(GenerateSynthetic(bad([](SyntheticSpec& s) { s.noise = 1.0; })),
               std::invalid_argument);
  EXPECT_THROW(GenerateSynthetic(bad([](SyntheticSpec& s) { s.num_classes = 1; })),
               std::invalid_argument);
  EXPECT_THROW(GenerateSynthetic(bad([](SyntheticSpec& s) { s.min_words = 0; })),
               std::invalid_argument);
  EXPECT_THROW(GenerateSynthetic(bad([](SyntheticSpec& s) { s.max_signal_words = 9; })),
               std::invalid_argument);
  EXPECT_THROW(GenerateSynthetic(bad([](SyntheticSpec& s) { s.filler_characters = 100000; })),
               std::invalid_argument);
}

}  // namespace
}  // namespace radnet
