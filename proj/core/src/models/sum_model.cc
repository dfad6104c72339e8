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

#include "visact/models/sum_model.h"

#include "visact/common/error.h"
#include "visact/nn/checkpoint.h"
#include "visact/world/object_class.h"

namespace visact::models {

using nn::Graph;
using nn::Var;

nlohmann::ordered_json to_json(const SumConfig& c) {
  nlohmann::ordered_json m;
  nn::to_json(m, c.model);
  return {{"model", m},
          {"view", world::view_name(c.view)},
          {"auto_size", c.render.auto_size},
          {"first_size", c.render.first_size},
          {"front_width", c.render.front_width},
          {"front_depth", c.render.front_depth},
          {"max_caption_len", c.max_caption_len}};
}

SumConfig sum_config_from_json(const nlohmann::ordered_json& j) {
  SumConfig c;
  try {
    if (j.contains("model")) nn::from_json(j.at("model"), c.model);
    if (j.contains("view")) {
      auto v = world::parse_view(j.at("view").get<std::string>());
      if (!v) throw ConfigError("unknown view '" + j.at("view").get<std::string>() + "'");
      c.view = *v;
    }
    c.render.auto_size = j.value("auto_size", c.render.auto_size);
    c.render.first_size = j.value("first_size", c.render.first_size);
    c.render.front_width = j.value("front_width", c.render.front_width);
    c.render.front_depth = j.value("front_depth", c.render.front_depth);
    c.max_caption_len = j.value("max_caption_len", c.max_caption_len);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sum config: ") + e.what());
  }
  return c;
}

SumModel::SumModel(text::Vocab vocab, SumConfig cfg, uint64_t seed, bool zero_output)
    : vocab_(std::move(vocab)), cfg_(cfg) {
  cfg_.model.validate();
  if (cfg_.max_caption_len < 2 || cfg_.max_caption_len > cfg_.model.max_seq) {
    throw InvalidArgument("max_caption_len must lie in [2, max_seq]");
  }
  Rng rng(mix_seed(seed, 0x5u));
  const int d = cfg_.model.d_model;
  const int glyphs = world::ClassRegistry::builtin().max_glyph() + 1;
  const auto [w, h] = cfg_.render.dims(cfg_.view);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  tile_embed_ = store_.add("sum.tile_embed", glyphs, d, nn::Init::kNormal, rng, s);
  mod_embed_ = store_.add("sum.mod_embed", world::kNumMods, d, nn::Init::kNormal, rng, s);
  hand_embed_ = store_.add("sum.hand_embed", glyphs, d, nn::Init::kNormal, rng, s);
  cell_embed_ = store_.add("sum.cell_embed", w * h, d, nn::Init::kNormal, rng, 0.02);
  net_ = nn::EncoderDecoder(store_, "sum", cfg_.model, vocab_.size(), rng, zero_output);
}

void SumModel::check_raster(const world::Raster& r) const {
  const auto [w, h] = cfg_.render.dims(cfg_.view);
  if (r.view != cfg_.view || r.width != w || r.height != h) {
    throw ShapeMismatch("raster " + std::string(world::view_name(r.view)) + " " + std::to_string(r.width) + "x" +
                        std::to_string(r.height) + " does not match the model's " +
                        std::string(world::view_name(cfg_.view)) + " " + std::to_string(w) + "x" + std::to_string(h));
  }
}

Var SumModel::encode(Graph& g, const world::Raster& r) const {
  check_raster(r);
  auto ids = [](const std::vector<uint8_t>& plane) { return std::vector<int>(plane.begin(), plane.end()); };
  const auto tiles = ids(r.tiles);
  const auto mods = ids(r.mods);
  const auto h0 = ids(r.hand0);
  const auto h1 = ids(r.hand1);
  const auto cells = nn::iota_ids(static_cast<int>(r.cells()));
  Var hand = g.param(hand_embed_);
  Var x = add(embed(g.param(tile_embed_), tiles), embed(g.param(mod_embed_), mods));
  x = add(x, add(embed(hand, h0), embed(hand, h1)));
  x = add(x, embed(g.param(cell_embed_), cells));
  return net_.encode(g, x);
}

Var SumModel::hidden(Graph& g, Var memory, std::span<const int> prefix) const {
  return net_.decode_hidden(g, memory, prefix);
}

Var SumModel::log_probs(Graph& g, Var memory, std::span<const int> prefix) const {
  return net_.log_probs(g, net_.decode_hidden(g, memory, prefix));
}

nn::Tensor SumModel::forward_logprobs(const world::Raster& r, const text::Caption& c) const {
  if (c.ids.size() < 2) throw ShapeMismatch("caption needs at least BOS and EOS");
  Graph g(store_);
  std::span<const int> prefix(c.ids.data(), c.ids.size() - 1);
  return log_probs(g, encode(g, r), prefix).value();
}

nn::Tensor SumModel::caption_states(const world::Raster& r, const text::Caption& c) const {
  Graph g(store_);
  return hidden(g, encode(g, r), c.ids).value();
}

void SumModel::save(const std::string& path) const {
  nn::save_checkpoint(path, store_, nn::CheckpointMeta{"sum", to_json(cfg_), vocab_.hash()});
}

SumModel SumModel::load(const std::string& path, const text::Vocab& vocab) {
  const auto meta = nn::read_checkpoint_meta(path);
  if (meta.kind != "sum") throw CheckpointError(path + " holds a '" + meta.kind + "' model, expected 'sum'");
  SumModel m(vocab, sum_config_from_json(meta.config), 0);
  nn::load_checkpoint(path, m.store_, vocab.hash());
  return m;
}

text::Caption caption_from_decoded(std::span<const int> generated, int max_len) {
  text::Caption c;
  c.ids.push_back(text::kBos);
  for (int t : generated) {
    if (t == text::kEos) break;
    if (static_cast<int>(c.ids.size()) >= max_len - 1) break;
    c.ids.push_back(t < text::kNumSpecials && t != text::kUnk ? text::kUnk : t);
  }
  c.ids.push_back(text::kEos);
  return c;
}

text::Caption sum_caption(const SumModel& m, const world::Raster& r, const nn::DecodeConfig& d) {
  Graph g(m.params());
  const Var memory = m.encode(g, r);
  nn::DecodeConfig dc = d;
  dc.max_len = std::min(d.max_len, m.config().max_caption_len - 1);
  std::vector<int> prefix;
  auto next = [&](std::span<const int> generated) {
    prefix.assign(1, text::kBos);
    prefix.insert(prefix.end(), generated.begin(), generated.end());
    const nn::Tensor lp = m.log_probs(g, memory, prefix).value();
    auto last = lp.row(lp.rows() - 1);
    return std::vector<double>(last.begin(), last.end());
  };
  const auto hyps = nn::decode(next, dc, text::kEos);
  return caption_from_decoded(hyps.front().tokens, m.config().max_caption_len);
}

}  // namespace visact::models
