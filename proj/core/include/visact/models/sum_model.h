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

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/nn/decode.h"
#include "visact/nn/graph.h"
#include "visact/nn/layers.h"
#include "visact/text/caption.h"
#include "visact/text/vocab.h"
#include "visact/world/render.h"

namespace visact::models {

struct SumConfig {
  nn::ModelConfig model;
  world::View view = world::View::kAuto;
  world::RenderConfig render;
  int max_caption_len = text::kDefaultMaxCaptionLen;

  bool operator==(const SumConfig&) const = default;
};

nlohmann::ordered_json to_json(const SumConfig& c);
SumConfig sum_config_from_json(const nlohmann::ordered_json& j);

// Scene understanding module: raster cells become encoder tokens (tile,
// modifier, hand and cell-position embeddings summed); a causal decoder
// produces the caption.
class SumModel {
 public:
  SumModel(text::Vocab vocab, SumConfig cfg, uint64_t seed, bool zero_output = false);

  const text::Vocab& vocab() const { return vocab_; }
  const SumConfig& config() const { return cfg_; }
  nn::ParameterStore& params() { return store_; }
  const nn::ParameterStore& params() const { return store_; }

  nn::Var encode(nn::Graph& g, const world::Raster& r) const;
  nn::Var hidden(nn::Graph& g, nn::Var memory, std::span<const int> prefix) const;
  nn::Var log_probs(nn::Graph& g, nn::Var memory, std::span<const int> prefix) const;

  // Per-position next-token log-probabilities for a teacher-forced caption
  // (prefix = caption without its final token).
  nn::Tensor forward_logprobs(const world::Raster& r, const text::Caption& c) const;

  // Decoder states of the final layer for the whole caption, used by the
  // hidden coupling into the action model.
  nn::Tensor caption_states(const world::Raster& r, const text::Caption& c) const;

  void save(const std::string& path) const;
  static SumModel load(const std::string& path, const text::Vocab& vocab);

 private:
  void check_raster(const world::Raster& r) const;

  text::Vocab vocab_;
  SumConfig cfg_;
  nn::ParameterStore store_;
  nn::EncoderDecoder net_;
  nn::ParamId tile_embed_ = -1;
  nn::ParamId mod_embed_ = -1;
  nn::ParamId hand_embed_ = -1;
  nn::ParamId cell_embed_ = -1;
};

// Decodes a caption. Output always starts with BOS and ends with EOS: a
// decode cut off at the length limit is closed with EOS, and specials other
// than UNK inside the caption are replaced by UNK.
text::Caption sum_caption(const SumModel& m, const world::Raster& r, const nn::DecodeConfig& d);

// Closes raw decoder output into a well-formed Caption.
text::Caption caption_from_decoded(std::span<const int> generated, int max_len);

}  // namespace visact::models
