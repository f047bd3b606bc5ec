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

#include "radnet/dataset.h"

#include <nlohmann/json.hpp>

#include "radnet/file_util.h"

namespace radnet {

using json = nlohmann::json;

std::vector<Document> ParseDataset(std::string_view text, bool require_labels,
                                   const std::string& source) {
  std::vector<Document> docs;
  size_t line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DatasetError(where + "invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw DatasetError(where + "expected a JSON object");

    Document doc;
    auto label = j.find("label");
    if (label != j.end()) {
      if (!label->is_number_integer()) {
        throw DatasetError(where + "\"label\" must be an integer");
      }
      doc.label = label->get<int>();
      if (doc.label < 0) throw DatasetError(where + "negative label");
    } else if (require_labels) {
      throw DatasetError(where + "missing \"label\"");
    }

    auto tokens = j.find("tokens");
    if (tokens == j.end() || !tokens->is_array()) {
      throw DatasetError(where + "\"tokens\" must be an array of strings");
    }
    for (const auto& t : *tokens) {
      if (!t.is_string()) {
        throw DatasetError(where + "\"tokens\" must be an array of strings");
      }
      doc.tokens.push_back(t.get<std::string>());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ReadDataset(const std::filesystem::path& path,
                                  bool require_labels) {
  return ParseDataset(ReadFile(path), require_labels, path.string());
}

std::string SerializeDataset(const std::vector<Document>& docs) {
  std::string out;
  for (const auto& doc : docs) {
    json j;
    if (doc.label >= 0) j["label"] = doc.label;
    j["tokens"] = doc.tokens;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<std::string> SplitTokens(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace radnet
