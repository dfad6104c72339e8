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

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/common/rng.h"
#include "visact/nn/graph.h"
#include "visact/nn/params.h"

namespace visact::nn {

struct ModelConfig {
  int d_model = 64;
  int n_heads = 4;
  int n_layers = 2;
  int ffn_mult = 4;
  double dropout = 0.1;
  int max_seq = 48;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

void to_json(nlohmann::ordered_json& j, const ModelConfig& c);
void from_json(const nlohmann::ordered_json& j, ModelConfig& c);

struct Linear {
  ParamId w = -1;  // [in x out]
  ParamId b = -1;  // [1 x out], -1 without bias

  static Linear make(ParameterStore& s, const std::string& name, int in, int out, Rng& rng, bool zero = false,
                     bool bias = true);
  Var operator()(Graph& g, Var x) const;
};

struct LayerNorm {
  ParamId gain = -1;
  ParamId bias = -1;

  static LayerNorm make(ParameterStore& s, const std::string& name, int dim);
  Var operator()(Graph& g, Var x) const;
};

struct MultiHeadAttention {
  Linear q, k, v, o;
  int heads = 1;

  static MultiHeadAttention make(ParameterStore& s, const std::string& name, int d, int heads, Rng& rng);
  Var operator()(Graph& g, Var x, Var memory, bool causal) const;
};

struct FeedForward {
  Linear up, down;

  static FeedForward make(ParameterStore& s, const std::string& name, int d, int hidden, Rng& rng);
  Var operator()(Graph& g, Var x) const;
};

// Pre-norm blocks.
struct EncoderLayer {
  LayerNorm ln1, ln2;
  MultiHeadAttention self_att;
  FeedForward ff;

  static EncoderLayer make(ParameterStore& s, const std::string& name, const ModelConfig& c, Rng& rng);
  Var operator()(Graph& g, Var x, double dropout) const;
};

struct DecoderLayer {
  LayerNorm ln1, ln2, ln3;
  MultiHeadAttention self_att, cross_att;
  FeedForward ff;

  static DecoderLayer make(ParameterStore& s, const std::string& name, const ModelConfig& c, Rng& rng);
  Var operator()(Graph& g, Var x, Var memory, double dropout) const;
};

// Transformer encoder-decoder. The encoder consumes an already embedded
// source; the decoder owns its token and position embeddings and an output
// projection onto the target vocabulary.
class EncoderDecoder {
 public:
  EncoderDecoder() = default;
  EncoderDecoder(ParameterStore& s, const std::string& prefix, const ModelConfig& c, int target_vocab, Rng& rng,
                 bool zero_output = false);

  const ModelConfig& config() const { return cfg_; }
  int target_vocab() const { return vocab_; }

  Var encode(Graph& g, Var source) const;
  // Final-normed decoder states for every prefix position, [T x d].
  Var decode_hidden(Graph& g, Var memory, std::span<const int> prefix) const;
  Var log_probs(Graph& g, Var hidden) const;  // [T x V]

 private:
  ModelConfig cfg_;
  int vocab_ = 0;
  std::vector<EncoderLayer> enc_;
  std::vector<DecoderLayer> dec_;
  LayerNorm enc_norm_, dec_norm_;
  ParamId tok_embed_ = -1;
  ParamId pos_embed_ = -1;
  Linear out_;
};

// Positions 0..n-1 of a learned position table.
std::vector<int> iota_ids(int n);

}  // namespace visact::nn
