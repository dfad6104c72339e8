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

#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "visact/nn/params.h"

namespace visact::nn {

// Binary layout, all integers little-endian:
//   "VISACTCK" | u32 version | u32 n | n bytes of JSON metadata
//   u32 count | count x (u32 len | name | u32 rows | u32 cols | rows*cols f64)
// The metadata carries the model kind, its configuration and the hash of
// the vocabularies the parameters were trained against.
struct CheckpointMeta {
  std::string kind;
  nlohmann::ordered_json config;
  std::string vocab_hash;
};

inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const ParameterStore& store, const CheckpointMeta& meta);

CheckpointMeta read_checkpoint_meta(const std::string& path);

// Loads values into an identically structured store. Throws CheckpointError
// on a format, name or shape mismatch, or when the stored vocabulary hash
// differs from `expected_vocab_hash`.
CheckpointMeta load_checkpoint(const std::string& path, ParameterStore& store, const std::string& expected_vocab_hash);

}  // namespace visact::nn
