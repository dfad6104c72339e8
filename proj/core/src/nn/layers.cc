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

#include "visact/nn/layers.h"

#include <cmath>
#include <numeric>

#include "visact/common/error.h"

namespace visact::nn {

void ModelConfig::validate() const {
  if (d_model <= 0 || n_heads <= 0 || n_layers < 0 || ffn_mult <= 0 || max_seq <= 0) {
    throw InvalidArgument("model config dimensions must be positive");
  }
  if (d_model % n_heads != 0) {
    throw InvalidArgument("d_model " + std::to_string(d_model) + " not divisible by n_heads " + std::to_string(n_heads));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw InvalidArgument("dropout must lie in [0, 1)");
}

void to_json(nlohmann::ordered_json& j, const ModelConfig& c) {
  j = nlohmann::ordered_json{{"d_model", c.d_model}, {"n_heads", c.n_heads}, {"n_layers", c.n_layers},
                             {"ffn_mult", c.ffn_mult}, {"dropout", c.dropout},  {"max_seq", c.max_seq}};
}

void from_json(const nlohmann::ordered_json& j, ModelConfig& c) {
  c.d_model = j.value("d_model", c.d_model);
  c.n_heads = j.value("n_heads", c.n_heads);
  c.n_layers = j.value("n_layers", c.n_layers);
  c.ffn_mult = j.value("ffn_mult", c.ffn_mult);
  c.dropout = j.value("dropout", c.dropout);
  c.max_seq = j.value("max_seq", c.max_seq);
}

std::vector<int> iota_ids(int n) {
  std::vector<int> ids(static_cast<size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

Linear Linear::make(ParameterStore& s, const std::string& name, int in, int out, Rng& rng, bool zero, bool bias) {
  Linear l;
  l.w = s.add(name + ".w", in, out, zero ? Init::kZeros : Init::kXavier, rng);
  if (bias) l.b = s.add(name + ".b", 1, out, Init::kZeros, rng);
  return l;
}

Var Linear::operator()(Graph& g, Var x) const {
  const Var y = matmul(x, g.param(w));
  return b >= 0 ? add_row(y, g.param(b)) : y;
}

LayerNorm LayerNorm::make(ParameterStore& s, const std::string& name, int dim) {
  Rng unused(0);
  LayerNorm n;
  n.gain = s.add(name + ".gain", 1, dim, Init::kOnes, unused);
  n.bias = s.add(name + ".bias", 1, dim, Init::kZeros, unused);
  return n;
}

Var LayerNorm::operator()(Graph& g, Var x) const { return layer_norm(x, g.param(gain), g.param(bias)); }

MultiHeadAttention MultiHeadAttention::make(ParameterStore& s, const std::string& name, int d, int heads, Rng& rng) {
  MultiHeadAttention m;
  m.q = Linear::make(s, name + ".q", d, d, rng);
  // A key bias only shifts every score of a query equally, so it is left out.
  m.k = Linear::make(s, name + ".k", d, d, rng, false, false);
  m.v = Linear::make(s, name + ".v", d, d, rng);
  m.o = Linear::make(s, name + ".o", d, d, rng);
  m.heads = heads;
  return m;
}

Var MultiHeadAttention::operator()(Graph& g, Var x, Var memory, bool causal) const {
  return o(g, attention(q(g, x), k(g, memory), v(g, memory), heads, causal));
}

FeedForward FeedForward::make(ParameterStore& s, const std::string& name, int d, int hidden, Rng& rng) {
  return FeedForward{Linear::make(s, name + ".up", d, hidden, rng), Linear::make(s, name + ".down", hidden, d, rng)};
}

Var FeedForward::operator()(Graph& g, Var x) const { return down(g, gelu(up(g, x))); }

EncoderLayer EncoderLayer::make(ParameterStore& s, const std::string& name, const ModelConfig& c, Rng& rng) {
  EncoderLayer l;
  l.ln1 = LayerNorm::make(s, name + ".ln1", c.d_model);
  l.self_att = MultiHeadAttention::make(s, name + ".att", c.d_model, c.n_heads, rng);
  l.ln2 = LayerNorm::make(s, name + ".ln2", c.d_model);
  l.ff = FeedForward::make(s, name + ".ff", c.d_model, c.d_model * c.ffn_mult, rng);
  return l;
}

Var EncoderLayer::operator()(Graph& g, Var x, double drop) const {
  Var h = ln1(g, x);
  x = add(x, dropout(self_att(g, h, h, false), drop));
  return add(x, dropout(ff(g, ln2(g, x)), drop));
}

DecoderLayer DecoderLayer::make(ParameterStore& s, const std::string& name, const ModelConfig& c, Rng& rng) {
  DecoderLayer l;
  l.ln1 = LayerNorm::make(s, name + ".ln1", c.d_model);
  l.self_att = MultiHeadAttention::make(s, name + ".self", c.d_model, c.n_heads, rng);
  l.ln2 = LayerNorm::make(s, name + ".ln2", c.d_model);
  l.cross_att = MultiHeadAttention::make(s, name + ".cross", c.d_model, c.n_heads, rng);
  l.ln3 = LayerNorm::make(s, name + ".ln3", c.d_model);
  l.ff = FeedForward::make(s, name + ".ff", c.d_model, c.d_model * c.ffn_mult, rng);
  return l;
}

Var DecoderLayer::operator()(Graph& g, Var x, Var memory, double drop) const {
  Var h = ln1(g, x);
  x = add(x, dropout(self_att(g, h, h, true), drop));
  x = add(x, dropout(cross_att(g, ln2(g, x), memory, false), drop));
  return add(x, dropout(ff(g, ln3(g, x)), drop));
}

EncoderDecoder::EncoderDecoder(ParameterStore& s, const std::string& prefix, const ModelConfig& c, int target_vocab,
                               Rng& rng, bool zero_output)
    : cfg_(c), vocab_(target_vocab) {
  c.validate();
  if (target_vocab <= 0) throw InvalidArgument("target vocabulary must be nonempty");
  for (int i = 0; i < c.n_layers; ++i) enc_.push_back(EncoderLayer::make(s, prefix + ".enc" + std::to_string(i), c, rng));
  enc_norm_ = LayerNorm::make(s, prefix + ".enc_norm", c.d_model);
  tok_embed_ = s.add(prefix + ".tok_embed", target_vocab, c.d_model, Init::kNormal, rng, 1.0 / std::sqrt(c.d_model));
  pos_embed_ = s.add(prefix + ".pos_embed", c.max_seq, c.d_model, Init::kNormal, rng, 0.02);
  for (int i = 0; i < c.n_layers; ++i) dec_.push_back(DecoderLayer::make(s, prefix + ".dec" + std::to_string(i), c, rng));
  dec_norm_ = LayerNorm::make(s, prefix + ".dec_norm", c.d_model);
  out_ = Linear::make(s, prefix + ".out", c.d_model, target_vocab, rng, zero_output);
}

Var EncoderDecoder::encode(Graph& g, Var source) const {
  if (source.value().cols() != cfg_.d_model) throw ShapeMismatch("encoder input width differs from d_model");
  Var x = dropout(source, cfg_.dropout);
  for (const auto& l : enc_) x = l(g, x, cfg_.dropout);
  return enc_norm_(g, x);
}

Var EncoderDecoder::decode_hidden(Graph& g, Var memory, std::span<const int> prefix) const {
  const int t = static_cast<int>(prefix.size());
  if (t == 0) throw ShapeMismatch("decoder prefix is empty");
  if (t > cfg_.max_seq) {
    throw ShapeMismatch("decoder prefix of " + std::to_string(t) + " exceeds max_seq " + std::to_string(cfg_.max_seq));
  }
  const auto pos = iota_ids(t);
  Var x = add(embed(g.param(tok_embed_), prefix), embed(g.param(pos_embed_), pos));
  x = dropout(x, cfg_.dropout);
  for (const auto& l : dec_) x = l(g, x, memory, cfg_.dropout);
  return dec_norm_(g, x);
}

Var EncoderDecoder::log_probs(Graph& g, Var hidden) const { return log_softmax(out_(g, hidden)); }

}  // namespace visact::nn
