// Copyright 2026 The visact Authors. All Rights Reserved.
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

#include "visact/nn/checkpoint.h"

#include <cstring>
#include <fstream>

#include "visact/common/error.h"

namespace visact::nn {
namespace {

constexpr char kMagic[8] = {'V', 'I', 'S', 'A', 'C', 'T', 'C', 'K'};

void put_u32(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  uint64_t v = 0;
  std::memcpy(&v, &d, sizeof v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw CheckpointError("cannot open checkpoint " + path);
  }

  void bytes(char* dst, size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) throw CheckpointError("truncated checkpoint " + path_);
  }
  uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 | static_cast<uint32_t>(b[2]) << 16 |
           static_cast<uint32_t>(b[3]) << 24;
  }
  double f64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    double d = 0.0;
    std::memcpy(&d, &v, sizeof d);
    return d;
  }
  std::string str(uint32_t max_len) {
    const uint32_t n = u32();
    if (n > max_len) throw CheckpointError("implausible string length in " + path_);
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

  CheckpointMeta header() {
    char magic[8];
    bytes(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) throw CheckpointError(path_ + " is not a checkpoint file");
    const uint32_t version = u32();
    if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    const std::string meta_text = str(1u << 24);
    CheckpointMeta meta;
    try {
      const auto j = nlohmann::ordered_json::parse(meta_text);
      meta.kind = j.at("kind").get<std::string>();
      meta.config = j.at("config");
      meta.vocab_hash = j.at("vocab_hash").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw CheckpointError("bad checkpoint metadata: " + std::string(e.what()));
    }
    return meta;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const std::string& path, const ParameterStore& store, const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out.write(kMagic, 8);
  put_u32(out, kCheckpointVersion);
  const std::string meta_text =
      nlohmann::ordered_json{{"kind", meta.kind}, {"config", meta.config}, {"vocab_hash", meta.vocab_hash}}.dump();
  put_u32(out, static_cast<uint32_t>(meta_text.size()));
  out.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));
  put_u32(out, static_cast<uint32_t>(store.size()));
  for (const auto& p : store.all()) {
    put_u32(out, static_cast<uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put_u32(out, static_cast<uint32_t>(p.value.rows()));
    put_u32(out, static_cast<uint32_t>(p.value.cols()));
    for (double v : p.value.values()) put_f64(out, v);
  }
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

CheckpointMeta read_checkpoint_meta(const std::string& path) { return Reader(path).header(); }

CheckpointMeta load_checkpoint(const std::string& path, ParameterStore& store, const std::string& expected_vocab_hash) {
  Reader r(path);
  CheckpointMeta meta = r.header();
  if (meta.vocab_hash != expected_vocab_hash) {
    throw CheckpointError("checkpoint " + path + " was trained against a different vocabulary");
  }
  const uint32_t count = r.u32();
  if (count != store.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(count) + " parameters, model has " +
                          std::to_string(store.size()));
  }
  std::vector<Tensor> values;
  values.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    const auto& p = store.at(static_cast<ParamId>(i));
    const std::string name = r.str(4096);
    const uint32_t rows = r.u32();
    const uint32_t cols = r.u32();
    if (name != p.name || static_cast<int>(rows) != p.value.rows() || static_cast<int>(cols) != p.value.cols()) {
      throw CheckpointError("parameter " + std::to_string(i) + " ('" + name + "') does not match model parameter '" +
                            p.name + "'");
    }
    Tensor t(static_cast<int>(rows), static_cast<int>(cols));
    for (double& v : t.values()) v = r.f64();
    if (!t.all_finite()) throw CheckpointError("non-finite value in parameter '" + name + "'");
    values.push_back(std::move(t));
  }
  if (!r.at_end()) throw CheckpointError("trailing bytes in checkpoint " + path);
  for (uint32_t i = 0; i < count; ++i) store.at(static_cast<ParamId>(i)).value = std::move(values[i]);
  return meta;
}

}  // namespace visact::nn
