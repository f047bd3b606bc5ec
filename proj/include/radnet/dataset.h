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

#ifndef RADNET_DATASET_H_
#define RADNET_DATASET_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radnet {

// A pre-segmented document. label is -1 when the source carries none.
struct Document {
  int label = -1;
  std::vector<std::string> tokens;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON-lines: {"label": int, "tokens": [string, ...]} per line. Blank lines
// are ignored. With require_labels, a missing label is an error.
std::vector<Document> ParseDataset(std::string_view text, bool require_labels,
                                   const std::string& source = "<memory>");
std::vector<Document> ReadDataset(const std::filesystem::path& path,
                                  bool require_labels);

std::string SerializeDataset(const std::vector<Document>& docs);

// Splits on ASCII whitespace.
std::vector<std::string> SplitTokens(std::string_view text);

}  // namespace radnet

#endif  // RADNET_DATASET_H_
