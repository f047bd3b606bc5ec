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

#include "radnet/checkpoint.h"

#include <bit>
#include <cstring>
#include <map>

#include "radnet/file_util.h"

namespace radnet {

using json = nlohmann::json;

namespace {

static_assert(sizeof(float) == 4);

void PutU32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutF32(std::string* out, float f) { PutU32(out, std::bit_cast<uint32_t>(f)); }

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  uint32_t U32(const char* what) {
    Need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::string_view Bytes(size_t n, const char* what) {
    Need(n, what);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void Need(size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw CheckpointError(std::string("checkpoint truncated while reading ") + what);
    }
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

template <typename T>
std::string SerializeCheckpoint(const Model<T>& model, const Vocab& vocab) {
  if (vocab.size() != model.vocab_size()) {
    throw CheckpointError("vocabulary size " + std::to_string(vocab.size()) +
                          " does not match the model's " +
                          std::to_string(model.vocab_size()));
  }
  std::string out(kCheckpointMagic, 4);
  PutU32(&out, kCheckpointVersion);
  const std::string blob =
      json{{"config", model.config().ToJson()}, {"vocab", vocab.ToJson()}}.dump();
  PutU32(&out, static_cast<uint32_t>(blob.size()));
  out += blob;
  for (const auto& p : model.parameters()) {
    PutU32(&out, static_cast<uint32_t>(p.name.size()));
    out += p.name;
    PutU32(&out, static_cast<uint32_t>(p.value.shape.size()));
    for (size_t d : p.value.shape) PutU32(&out, static_cast<uint32_t>(d));
    for (T v : p.value.data) PutF32(&out, static_cast<float>(v));
  }
  return out;
}

template <typename T>
Checkpoint<T> DeserializeCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.Bytes(4, "magic") != std::string_view(kCheckpointMagic, 4)) {
    throw CheckpointError("not a checkpoint (bad magic)");
  }
  const uint32_t version = r.U32("version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  const uint32_t blob_len = r.U32("config length");
  json blob;
  try {
    blob = json::parse(r.Bytes(blob_len, "config"));
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("corrupt config blob: ") + e.what());
  }
  if (!blob.contains("config") || !blob.contains("vocab")) {
    throw CheckpointError("config blob lacks \"config\" or \"vocab\"");
  }
  Vocab vocab = Vocab::FromJson(blob["vocab"]);
  Checkpoint<T> ckpt{vocab, Model<T>(ModelConfig::FromJson(blob["config"]), vocab.size())};

  std::map<std::string, bool> loaded;
  for (const auto& p : ckpt.model.parameters()) loaded[p.name] = false;
  while (!r.done()) {
    const uint32_t name_len = r.U32("parameter name length");
    const std::string name(r.Bytes(name_len, "parameter name"));
    auto it = loaded.find(name);
    if (it == loaded.end()) {
      throw CheckpointError("checkpoint holds unknown parameter " + name);
    }
    if (it->second) throw CheckpointError("parameter " + name + " stored twice");
    it->second = true;
    ad::Parameter<T>& p = ckpt.model.parameter(name);
    const uint32_t rank = r.U32("rank");
    ad::Shape shape;
    for (uint32_t i = 0; i < rank; ++i) shape.push_back(r.U32("dimension"));
    if (shape != p.value.shape) {
      throw CheckpointError("parameter " + name + " has stored shape " +
                            ad::ShapeToString(shape) + " but the config implies " +
                            ad::ShapeToString(p.value.shape));
    }
    const std::string_view raw = r.Bytes(4 * p.size(), "parameter values");
    for (size_t i = 0; i < p.size(); ++i) {
      uint32_t bits = 0;
      for (int k = 0; k < 4; ++k) {
        bits |= static_cast<uint32_t>(static_cast<unsigned char>(raw[4 * i + k])) << (8 * k);
      }
      p.value.data[i] = static_cast<T>(std::bit_cast<float>(bits));
    }
  }
  for (const auto& [name, seen] : loaded) {
    if (!seen) throw CheckpointError("checkpoint is missing parameter " + name);
  }
  ckpt.model.ZeroGrad();
  return ckpt;
}

template <typename T>
void SaveCheckpoint(const std::filesystem::path& path, const Model<T>& model,
                    const Vocab& vocab) {
  WriteFileAtomic(path, SerializeCheckpoint(model, vocab));
}

template <typename T>
Checkpoint<T> LoadCheckpoint(const std::filesystem::path& path) {
  try {
    return DeserializeCheckpoint<T>(ReadFile(path));
  } catch (const CheckpointError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(path.string() + ": invalid stored config: " + e.what());
  } catch (const EncodingError& e) {
    throw CheckpointError(path.string() + ": invalid stored vocabulary: " + e.what());
  }
}

#define RADNET_INSTANTIATE(T)                                                   \
  template std::string SerializeCheckpoint(const Model<T>&, const Vocab&);      \
  template Checkpoint<T> DeserializeCheckpoint<T>(std::string_view);            \
  template void SaveCheckpoint(const std::filesystem::path&, const Model<T>&,   \
                               const Vocab&);                                   \
  template Checkpoint<T> LoadCheckpoint<T>(const std::filesystem::path&);

RADNET_INSTANTIATE(float)
RADNET_INSTANTIATE(double)

#undef RADNET_INSTANTIATE

}  // namespace radnet
