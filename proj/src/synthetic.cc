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

#include <iterator>
#include <optional>
#include <stdexcept>

#include "radnet/ids.h"
#include "radnet/rng.h"
#include "radnet/utf8.h"

namespace radnet {

namespace {

constexpr Codepoint kRadicalBase = 0x4E00;
constexpr Codepoint kCompositeBase = 0x6C00;
constexpr Codepoint kCompositeEnd = 0x9FFF;

constexpr Codepoint kLeftRight = 0x2FF0;
constexpr Codepoint kAboveBelow = 0x2FF1;
constexpr Codepoint kLeftMiddleRight = 0x2FF2;
constexpr Codepoint kAboveMiddleBelow = 0x2FF3;

const char* const kNonCjkTokens[] = {"!", "42", "ok", "。", "、", "abc", "7", "?"};

struct Composite {
  Codepoint cp;
  std::vector<Codepoint> radicals;  // reading order
};

// Renders the IDS for a composite, choosing a layout that reproduces the
// radical order when flattened.
std::string IdsFor(const Composite& c, Rng* rng) {
  std::string s;
  const auto& r = c.radicals;
  if (r.size() == 2) {
    AppendUtf8(rng->Bernoulli(0.5) ? kLeftRight : kAboveBelow, &s);
    AppendUtf8(r[0], &s);
    AppendUtf8(r[1], &s);
    return s;
  }
  switch (rng->UniformInt(3)) {
    case 0:
      AppendUtf8(rng->Bernoulli(0.5) ? kLeftMiddleRight : kAboveMiddleBelow, &s);
      AppendUtf8(r[0], &s);
      AppendUtf8(r[1], &s);
      AppendUtf8(r[2], &s);
      break;
    case 1:  // nested on the right
      AppendUtf8(kLeftRight, &s);
      AppendUtf8(r[0], &s);
      AppendUtf8(kAboveBelow, &s);
      AppendUtf8(r[1], &s);
      AppendUtf8(r[2], &s);
      break;
    default:  // nested on the top
      AppendUtf8(kAboveBelow, &s);
      AppendUtf8(kLeftRight, &s);
      AppendUtf8(r[0], &s);
      AppendUtf8(r[1], &s);
      AppendUtf8(r[2], &s);
      break;
  }
  return s;
}

}  // namespace

void SyntheticSpec::Validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("synthetic spec: " + m); };
  if (num_classes < 2) fail("need at least 2 classes");
  if (filler_radicals < 2) fail("need at least 2 filler radicals");
  if (signal_radicals_per_class < 1) fail("need at least 1 signal radical per class");
  if (signal_characters_per_class < 1 || filler_characters < 1) {
    fail("character pools must be non-empty");
  }
  if (min_words < 1 || min_words > max_words) fail("need 1 <= min_words <= max_words");
  if (max_chars_per_word < 1) fail("max_chars_per_word must be >= 1");
  if (min_signal_words < 1 || min_signal_words > max_signal_words ||
      max_signal_words > min_words) {
    fail("need 1 <= min_signal_words <= max_signal_words <= min_words");
  }
  if (!(noise >= 0.0 && noise < 1.0)) fail("noise must lie in [0, 1)");
  const size_t radicals = filler_radicals + num_classes * signal_radicals_per_class;
  const size_t composites = filler_characters + num_classes * signal_characters_per_class;
  if (kRadicalBase + radicals > kCompositeBase ||
      kCompositeBase + composites > kCompositeEnd) {
    fail("too many radicals or characters for the codepoint budget");
  }
}

SyntheticCorpus GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  const Rng root(spec.seed);
  Rng table_rng = root.Split("table");

  std::vector<Codepoint> fillers;
  Codepoint next = kRadicalBase;
  for (size_t i = 0; i < spec.filler_radicals; ++i) fillers.push_back(next++);

  SyntheticCorpus corpus;
  std::vector<std::vector<Codepoint>> signals(spec.num_classes);
  corpus.signal_radicals.resize(spec.num_classes);
  for (size_t y = 0; y < spec.num_classes; ++y) {
    for (size_t i = 0; i < spec.signal_radicals_per_class; ++i) {
      signals[y].push_back(next);
      corpus.signal_radicals[y].push_back(EncodeUtf8(next));
      ++next;
    }
  }

  auto random_filler = [&]() { return fillers[table_rng.UniformInt(fillers.size())]; };
  Codepoint composite_cp = kCompositeBase;
  auto make_composite = [&](std::optional<Codepoint> signal) {
    Composite c{composite_cp++, {}};
    const size_t parts = 2 + table_rng.UniformInt(2);
    for (size_t i = 0; i < parts; ++i) c.radicals.push_back(random_filler());
    if (signal) c.radicals[table_rng.UniformInt(parts)] = *signal;
    return c;
  };

  std::vector<Composite> filler_chars;
  for (size_t i = 0; i < spec.filler_characters; ++i) {
    filler_chars.push_back(make_composite(std::nullopt));
  }
  std::vector<std::vector<Composite>> signal_chars(spec.num_classes);
  for (size_t y = 0; y < spec.num_classes; ++y) {
    for (size_t i = 0; i < spec.signal_characters_per_class; ++i) {
      const Codepoint s = signals[y][i % signals[y].size()];
      signal_chars[y].push_back(make_composite(s));
    }
  }

  std::string& tsv = corpus.table_tsv;
  tsv += "; synthetic IDS table, seed " + std::to_string(spec.seed) + "\n";
  auto emit_line = [&](Codepoint cp, const std::string& ids) {
    tsv += FormatCodepoint(cp) + "\t" + EncodeUtf8(cp) + "\t" + ids + "\n";
  };
  for (Codepoint r : fillers) emit_line(r, EncodeUtf8(r));
  for (const auto& cls : signals) {
    for (Codepoint r : cls) emit_line(r, EncodeUtf8(r));
  }
  for (const auto& c : filler_chars) emit_line(c.cp, IdsFor(c, &table_rng));
  for (const auto& cls : signal_chars) {
    for (const auto& c : cls) emit_line(c.cp, IdsFor(c, &table_rng));
  }

  auto generate = [&](size_t count, Rng rng) {
    std::vector<Document> docs;
    for (size_t i = 0; i < count; ++i) {
      const size_t label = i % spec.num_classes;
      const size_t words =
          spec.min_words + rng.UniformInt(spec.max_words - spec.min_words + 1);
      std::vector<std::vector<Codepoint>> content(words);
      std::vector<bool> ascii(words, false);
      for (auto& w : content) {
        const size_t len = 1 + rng.UniformInt(spec.max_chars_per_word);
        for (size_t k = 0; k < len; ++k) {
          w.push_back(filler_chars[rng.UniformInt(filler_chars.size())].cp);
        }
      }
      // Positions that will carry the class signal stay ideographic.
      std::vector<size_t> positions(words);
      for (size_t k = 0; k < words; ++k) positions[k] = k;
      rng.Shuffle(&positions);
      const size_t n_signal =
          spec.min_signal_words +
          rng.UniformInt(spec.max_signal_words - spec.min_signal_words + 1);
      for (size_t k = n_signal; k < words; ++k) {
        if (rng.Bernoulli(0.1)) ascii[positions[k]] = true;
      }
      for (size_t k = 0; k < n_signal; ++k) {
        auto& w = content[positions[k]];
        const auto& pool = signal_chars[label];
        w[rng.UniformInt(w.size())] = pool[rng.UniformInt(pool.size())].cp;
      }

      Document doc;
      doc.label = static_cast<int>(label);
      if (spec.noise > 0 && rng.Bernoulli(spec.noise)) {
        const size_t shift = 1 + rng.UniformInt(spec.num_classes - 1);
        doc.label = static_cast<int>((label + shift) % spec.num_classes);
      }
      for (size_t k = 0; k < words; ++k) {
        doc.tokens.push_back(ascii[k] ? kNonCjkTokens[rng.UniformInt(std::size(kNonCjkTokens))]
                                      : EncodeUtf8(content[k]));
      }
      docs.push_back(std::move(doc));
    }
    rng.Shuffle(&docs);
    return docs;
  };
  corpus.train = generate(spec.train_documents, root.Split("train"));
  corpus.test = generate(spec.test_documents, root.Split("test"));
  return corpus;
}

}  // namespace radnet
