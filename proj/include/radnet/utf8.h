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

#ifndef RADNET_UTF8_H_
#define RADNET_UTF8_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radnet {

using Codepoint = char32_t;

class Utf8Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decodes a UTF-8 string into codepoints. Throws Utf8Error on malformed
// input (overlong forms, surrogates and truncated sequences included).
std::vector<Codepoint> DecodeUtf8(std::string_view text);

void AppendUtf8(Codepoint cp, std::string* out);
std::string EncodeUtf8(Codepoint cp);
std::string EncodeUtf8(const std::vector<Codepoint>& cps);

// "U+4E00" style rendering, at least four hex digits.
std::string FormatCodepoint(Codepoint cp);

// Parses "U+XXXX" (case-insensitive prefix). Throws std::invalid_argument.
Codepoint ParseCodepoint(std::string_view text);

// CJK Unified Ideographs, including the extension blocks.
bool IsCjkIdeograph(Codepoint cp);

}  // namespace radnet

#endif  // RADNET_UTF8_H_
