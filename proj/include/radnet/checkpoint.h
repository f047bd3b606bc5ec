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

#ifndef RADNET_CHECKPOINT_H_
#define RADNET_CHECKPOINT_H_

// Binary checkpoint layout, all integers u32 little-endian:
//
//   "RSNT" | version | blob length | blob (UTF-8 JSON)
//   then, until end of file, per parameter:
//   name length | name | rank | dims... | float32 LE values
//
// The JSON blob carries {"config": ..., "vocab": ...}.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "radnet/model.h"
#include "radnet/vocab.h"

namespace radnet {

inline constexpr char kCheckpointMagic[4] = {'R', 'S', 'N', 'T'};
inline constexpr uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
struct Checkpoint {
  Vocab vocab;
  Model<T> model;
};

template <typename T>
std::string SerializeCheckpoint(const Model<T>& model, const Vocab& vocab);

// Validates the magic, version, config and every stored shape against the
// shapes the config implies.
template <typename T>
Checkpoint<T> DeserializeCheckpoint(std::string_view bytes);

template <typename T>
void SaveCheckpoint(const std::filesystem::path& path, const Model<T>& model,
                    const Vocab& vocab);

template <typename T>
Checkpoint<T> LoadCheckpoint(const std::filesystem::path& path);

}  // namespace radnet

#endif  // RADNET_CHECKPOINT_H_
