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

#ifndef RADNET_IDS_H_
#define RADNET_IDS_H_

// Ideographic Description Sequence (IDS) tables and radical flattening.
//
// A table maps a character to a production: either Atomic (the character is
// its own radical) or an Ideographic Description Character (U+2FF0..U+2FFB)
// applied to two or three components. Flattening expands a character
// depth-first in component order, which is the left-to-right, top-to-bottom
// reading order of the glyph, until only terminal radicals remain.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "radnet/utf8.h"

namespace radnet {

// Placeholder emitted for an ideograph that the table knows nothing about.
// Lies outside the Unicode range so it cannot collide with real text.
inline constexpr Codepoint kUnknownRadical = 0x110000;

// Intermediate nodes of nested IDS expressions get heads allocated from
// Supplementary Private Use Area-A.
inline constexpr Codepoint kFirstSyntheticCodepoint = 0xF0000;
inline constexpr Codepoint kLastSyntheticCodepoint = 0xFFFFD;

inline constexpr Codepoint kAtomic = 0;

bool IsIdc(Codepoint cp);

// 2 for binary operators, 3 for U+2FF2 / U+2FF3, 0 for anything else.
int IdcArity(Codepoint cp);

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IdsParseError : public DecompositionError {
 public:
  IdsParseError(size_t line, const std::string& message)
      : DecompositionError("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct IdsProduction {
  Codepoint head = 0;
  Codepoint op = kAtomic;
  std::vector<Codepoint> components;

  bool atomic() const { return op == kAtomic; }
};

class DecompositionTable {
 public:
  // Inserts or replaces the production for p.head. Returns true when an
  // existing entry was replaced; synthetic nodes owned only by the replaced
  // entry are dropped with it.
  bool Insert(IdsProduction p);

  const IdsProduction* Find(Codepoint c) const;
  bool Contains(Codepoint c) const { return Find(c) != nullptr; }

  // True when c is used as a component by some production.
  bool IsComponent(Codepoint c) const;

  bool IsSynthetic(Codepoint c) const {
    return c >= kFirstSyntheticCodepoint && c < next_synthetic_;
  }

  Codepoint AllocateSynthetic();

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  size_t num_synthetic() const;

  const std::map<Codepoint, IdsProduction>& entries() const {
    return entries_;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void AddWarning(std::string w) { warnings_.push_back(std::move(w)); }

  const std::string& source_meta() const { return source_meta_; }
  void set_source_meta(std::string meta) { source_meta_ = std::move(meta); }

 private:
  void Erase(Codepoint c);

  std::map<Codepoint, IdsProduction> entries_;
  std::map<Codepoint, int> component_refs_;
  std::vector<std::string> warnings_;
  std::string source_meta_;
  Codepoint next_synthetic_ = kFirstSyntheticCodepoint;
};

// Parses "CODEPOINT<TAB>CHAR<TAB>IDS" lines. Lines starting with ';' and
// blank lines are skipped. Throws IdsParseError on malformed lines.
DecompositionTable ParseIdsTable(std::string_view text,
                                 std::string source_meta = {});

struct RadicalSequence {
  Codepoint origin = 0;
  std::vector<Codepoint> radicals;
};

// Throws DecompositionError if the expansion runs into a cycle.
RadicalSequence FlattenCharacter(Codepoint c, const DecompositionTable& table);

struct ValidationReport {
  // Each cycle is listed once, rotated to start at its smallest codepoint.
  std::vector<std::vector<Codepoint>> cycles;
  std::vector<Codepoint> arity_violations;
  // Longest flattening among entries not involved in a cycle.
  size_t max_flattened_length = 0;

  bool ok() const { return cycles.empty() && arity_violations.empty(); }
};

ValidationReport ValidateTable(const DecompositionTable& table);

// Human-readable rendering of a radical; kUnknownRadical becomes "<unk>".
std::string RadicalToString(Codepoint cp);

}  // namespace radnet

#endif  // RADNET_IDS_H_
