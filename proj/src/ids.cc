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

#include "radnet/ids.h"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace radnet {

bool IsIdc(Codepoint cp) { return cp >= 0x2FF0 && cp <= 0x2FFB; }

int IdcArity(Codepoint cp) {
  if (!IsIdc(cp)) return 0;
  return (cp == 0x2FF2 || cp == 0x2FF3) ? 3 : 2;
}

bool DecompositionTable::Insert(IdsProduction p) {
  const Codepoint head = p.head;
  const bool replaced = entries_.count(head) > 0;
  // Take the new references first so that synthetic nodes shared with the
  // replaced entry survive its removal.
  for (Codepoint c : p.components) ++component_refs_[c];
  if (replaced) Erase(head);
  entries_.emplace(head, std::move(p));
  return replaced;
}

void DecompositionTable::Erase(Codepoint c) {
  auto it = entries_.find(c);
  if (it == entries_.end()) return;
  const std::vector<Codepoint> components = std::move(it->second.components);
  entries_.erase(it);
  for (Codepoint comp : components) {
    auto ref = component_refs_.find(comp);
    if (ref != component_refs_.end() && --ref->second == 0) {
      component_refs_.erase(ref);
      if (IsSynthetic(comp)) Erase(comp);
    }
  }
}

const IdsProduction* DecompositionTable::Find(Codepoint c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

bool DecompositionTable::IsComponent(Codepoint c) const {
  return component_refs_.count(c) > 0;
}

Codepoint DecompositionTable::AllocateSynthetic() {
  if (next_synthetic_ > kLastSyntheticCodepoint) {
    throw DecompositionError("synthetic codepoint space exhausted");
  }
  return next_synthetic_++;
}

size_t DecompositionTable::num_synthetic() const {
  return std::count_if(entries_.begin(), entries_.end(), [this](const auto& e) {
    return IsSynthetic(e.first);
  });
}

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

class IdsExpressionParser {
 public:
  IdsExpressionParser(const std::vector<Codepoint>& expr, size_t line,
                      DecompositionTable* table)
      : expr_(expr), line_(line), table_(table) {}

  // Parses the whole expression as the production of `head`.
  IdsProduction ParseTop(Codepoint head) {
    if (expr_.empty()) throw IdsParseError(line_, "empty IDS expression");
    if (!IsIdc(expr_[0])) {
      if (expr_.size() == 1 && expr_[0] == head) return {head, kAtomic, {}};
      throw IdsParseError(line_,
                          "expected an IDC operator or the character itself, "
                          "got '" + EncodeUtf8(expr_) + "'");
    }
    IdsProduction p = ParseOperator(head);
    if (pos_ != expr_.size()) {
      throw IdsParseError(
          line_, "IDC arity mismatch: " + std::to_string(expr_.size() - pos_) +
                     " trailing character(s) after a complete expression");
    }
    return p;
  }

 private:
  IdsProduction ParseOperator(Codepoint head) {
    const Codepoint op = expr_[pos_++];
    const int arity = IdcArity(op);
    IdsProduction p{head, op, {}};
    for (int k = 0; k < arity; ++k) {
      if (pos_ >= expr_.size()) {
        throw IdsParseError(line_, "IDC arity mismatch: " +
                                       FormatCodepoint(op) + " expects " +
                                       std::to_string(arity) +
                                       " components, got " + std::to_string(k));
      }
      p.components.push_back(ParseComponent());
    }
    return p;
  }

  Codepoint ParseComponent() {
    if (!IsIdc(expr_[pos_])) return expr_[pos_++];
    const Codepoint node = table_->AllocateSynthetic();
    synthetic_.push_back(ParseOperator(node));
    return node;
  }

 public:
  std::vector<IdsProduction> synthetic_;

 private:
  const std::vector<Codepoint>& expr_;
  size_t pos_ = 0;
  size_t line_;
  DecompositionTable* table_;
};

}  // namespace

DecompositionTable ParseIdsTable(std::string_view text,
                                 std::string source_meta) {
  DecompositionTable table;
  table.set_source_meta(std::move(source_meta));
  std::unordered_map<Codepoint, size_t> defined_at;

  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == ';') continue;

    const auto fields = SplitTabs(line);
    if (fields.size() != 3) {
      throw IdsParseError(line_no, "expected 3 tab-separated fields, got " +
                                       std::to_string(fields.size()));
    }
    Codepoint head;
    std::vector<Codepoint> chars;
    std::vector<Codepoint> expr;
    try {
      head = ParseCodepoint(fields[0]);
      chars = DecodeUtf8(fields[1]);
      expr = DecodeUtf8(fields[2]);
    } catch (const std::exception& e) {
      throw IdsParseError(line_no, e.what());
    }
    if (chars.size() != 1 || chars[0] != head) {
      throw IdsParseError(line_no, "character field '" +
                                       std::string(fields[1]) +
                                       "' does not match " +
                                       FormatCodepoint(head));
    }
    if (IsIdc(head)) {
      throw IdsParseError(line_no, "an IDC operator cannot be a table entry");
    }

    IdsExpressionParser parser(expr, line_no, &table);
    IdsProduction production = parser.ParseTop(head);

    auto seen = defined_at.find(head);
    if (seen != defined_at.end()) {
      table.AddWarning("line " + std::to_string(line_no) +
                       ": duplicate entry for " + FormatCodepoint(head) +
                       " replaces the one from line " +
                       std::to_string(seen->second));
    }
    defined_at[head] = line_no;
    table.Insert(std::move(production));
    for (auto& node : parser.synthetic_) table.Insert(std::move(node));
  }
  return table;
}

namespace {

std::string DescribeCycle(const std::vector<Codepoint>& path, Codepoint back) {
  std::string s;
  auto it = std::find(path.begin(), path.end(), back);
  for (; it != path.end(); ++it) {
    s += RadicalToString(*it) + " -> ";
  }
  return s + RadicalToString(back);
}

void FlattenInto(Codepoint c, const DecompositionTable& table,
                 std::vector<Codepoint>* path, std::vector<Codepoint>* out) {
  const IdsProduction* p = table.Find(c);
  if (p == nullptr) {
    out->push_back(c);
    return;
  }
  if (p->atomic()) {
    out->push_back(c);
    return;
  }
  if (std::find(path->begin(), path->end(), c) != path->end()) {
    throw DecompositionError("cycle in decomposition: " +
                             DescribeCycle(*path, c));
  }
  path->push_back(c);
  for (Codepoint comp : p->components) {
    if (IsIdc(comp)) continue;
    FlattenInto(comp, table, path, out);
  }
  path->pop_back();
}

}  // namespace

RadicalSequence FlattenCharacter(Codepoint c, const DecompositionTable& table) {
  RadicalSequence seq{c, {}};
  if (!table.Contains(c)) {
    const bool known_radical = table.IsComponent(c);
    seq.radicals.push_back(known_radical || !IsCjkIdeograph(c)
                               ? c
                               : kUnknownRadical);
    return seq;
  }
  std::vector<Codepoint> path;
  FlattenInto(c, table, &path, &seq.radicals);
  return seq;
}

namespace {

class CycleFinder {
 public:
  explicit CycleFinder(const DecompositionTable& table) : table_(table) {}

  void Run() {
    for (const auto& [head, p] : table_.entries()) {
      if (state_[head] == kUnvisited) Visit(head);
    }
  }

  std::set<std::vector<Codepoint>> cycles;
  std::set<Codepoint> tainted;  // lies on or reaches a cycle

 private:
  enum State { kUnvisited = 0, kInProgress, kDone };

  bool Visit(Codepoint c) {
    state_[c] = kInProgress;
    stack_.push_back(c);
    bool bad = false;
    const IdsProduction* p = table_.Find(c);
    for (Codepoint comp : p->components) {
      if (!table_.Contains(comp)) continue;
      const State s = state_[comp];
      if (s == kInProgress) {
        auto it = std::find(stack_.begin(), stack_.end(), comp);
        std::vector<Codepoint> cycle(it, stack_.end());
        std::rotate(cycle.begin(),
                    std::min_element(cycle.begin(), cycle.end()),
                    cycle.end());
        cycles.insert(std::move(cycle));
        bad = true;
      } else if (s == kUnvisited) {
        bad |= Visit(comp);
      } else if (tainted.count(comp)) {
        bad = true;
      }
    }
    stack_.pop_back();
    state_[c] = kDone;
    if (bad) tainted.insert(c);
    return bad;
  }

  const DecompositionTable& table_;
  std::unordered_map<Codepoint, State> state_;
  std::vector<Codepoint> stack_;
};

}  // namespace

ValidationReport ValidateTable(const DecompositionTable& table) {
  ValidationReport report;
  for (const auto& [head, p] : table.entries()) {
    const size_t expected = p.atomic() ? 0 : static_cast<size_t>(IdcArity(p.op));
    const bool bad_op = !p.atomic() && !IsIdc(p.op);
    const bool idc_component =
        std::any_of(p.components.begin(), p.components.end(), IsIdc);
    if (bad_op || idc_component || p.components.size() != expected) {
      report.arity_violations.push_back(head);
    }
  }

  CycleFinder finder(table);
  finder.Run();
  report.cycles.assign(finder.cycles.begin(), finder.cycles.end());

  std::unordered_map<Codepoint, size_t> length;
  auto flattened_length = [&](auto&& self, Codepoint c) -> size_t {
    const IdsProduction* p = table.Find(c);
    if (p == nullptr || p->atomic()) return 1;
    auto it = length.find(c);
    if (it != length.end()) return it->second;
    size_t n = 0;
    for (Codepoint comp : p->components) {
      if (!IsIdc(comp)) n += self(self, comp);
    }
    length[c] = n;
    return n;
  };
  for (const auto& [head, p] : table.entries()) {
    if (finder.tainted.count(head)) continue;
    report.max_flattened_length =
        std::max(report.max_flattened_length, flattened_length(flattened_length, head));
  }
  return report;
}

std::string RadicalToString(Codepoint cp) {
  if (cp == kUnknownRadical) return "<unk>";
  return EncodeUtf8(cp);
}

}  // namespace radnet
