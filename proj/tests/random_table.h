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

#ifndef RADNET_TESTS_RANDOM_TABLE_H_
#define RADNET_TESTS_RANDOM_TABLE_H_

#include <string>
#include <vector>

#include "radnet/ids.h"
#include "radnet/rng.h"
#include "radnet/utf8.h"

namespace radnet::testing {

// Builds a random layered table over U+4E00.. with atomic leaves, binary and
// ternary operators and occasional nesting.
inline std::string RandomTableText(Rng& rng, size_t leaves, size_t composites) {
  std::string text;
  std::vector<Codepoint> pool;
  Codepoint next = 0x4E00;
  auto line = [&](Codepoint c, const std::string& ids) {
    text += FormatCodepoint(c) + "\t" + EncodeUtf8(c) + "\t" + ids + "\n";
  };
  for (size_t i = 0; i < leaves; ++i, ++next) {
    line(next, EncodeUtf8(next));
    pool.push_back(next);
  }
  // Some components are plain non-CJK symbols without entries.
  pool.push_back('k');
  pool.push_back(U'ノ');
  auto pick = [&] { return EncodeUtf8(pool[rng.UniformInt(pool.size())]); };
  for (size_t i = 0; i < composites; ++i, ++next) {
    const bool ternary = rng.Bernoulli(0.3);
    const Codepoint op = ternary ? 0x2FF2 + rng.UniformInt(2) : 0x2FF0 + rng.UniformInt(2);
    std::string ids = EncodeUtf8(op);
    const size_t arity = ternary ? 3 : 2;
    for (size_t k = 0; k < arity; ++k) {
      if (rng.Bernoulli(0.15)) {
        ids += EncodeUtf8(0x2FF0 + 4 + rng.UniformInt(8)) + pick() + pick();
      } else {
        ids += pick();
      }
    }
    line(next, ids);
    pool.push_back(next);
  }
  return text;
}

}  // namespace radnet::testing

#endif  // RADNET_TESTS_RANDOM_TABLE_H_
