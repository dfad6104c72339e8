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

#include "visact/models/apm_model.h"

#include <cmath>

#include "visact/common/error.h"
#include "visact/common/hash.h"
#include "visact/nn/checkpoint.h"

namespace visact::models {

using nn::Graph;
using nn::Var;

namespace {

constexpr int kSegTask = 0;
constexpr int kSegCaption = 1;
constexpr int kSegAction = 2;

}  // namespace

nlohmann::ordered_json to_json(const ApmConfig& c) {
  nlohmann::ordered_json m;
  nn::to_json(m, c.model);
  return {{"model", m},
          {"use_task", c.use_task},
          {"couple", c.couple == Coupling::kText ? "text" : "hidden"},
          {"sum_d_model", c.sum_d_model},
          {"max_id", c.max_id},
          {"max_action_len", c.max_action_len}};
}

ApmConfig apm_config_from_json(const nlohmann::ordered_json& j) {
  ApmConfig c;
  try {
    if (j.contains("model")) nn::from_json(j.at("model"), c.model);
    c.use_task = j.value("use_task", c.use_task);
    if (j.contains("couple")) {
      const auto s = j.at("couple").get<std::string>();
      if (s == "text") {
        c.couple = Coupling::kText;
      } else if (s == "hidden") {
        c.couple = Coupling::kHidden;
      } else {
        throw ConfigError("couple must be 'text' or 'hidden', got '" + s + "'");
      }
    }
    c.sum_d_model = j.value("sum_d_model", c.sum_d_model);
    c.max_id = j.value("max_id", c.max_id);
    c.max_action_len = j.value("max_action_len", c.max_action_len);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("apm config: ") + e.what());
  }
  return c;
}

bool is_stop(const ApmAction& a) {
  const auto* m = std::get_if<MalformedAction>(&a);
  return m && m->tokens.empty();
}

ApmModel::ApmModel(text::Vocab text_vocab, text::Vocab program_vocab, ApmConfig cfg, uint64_t seed, bool zero_output)
    : text_vocab_(std::move(text_vocab)), program_vocab_(std::move(program_vocab)), cfg_(cfg) {
  cfg_.model.validate();
  if (cfg_.max_action_len < 2 || cfg_.max_action_len > cfg_.model.max_seq) {
    throw InvalidArgument("max_action_len must lie in [2, max_seq]");
  }
  Rng rng(mix_seed(seed, 0xa9u));
  const int d = cfg_.model.d_model;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  text_embed_ = store_.add("apm.text_embed", text_vocab_.size(), d, nn::Init::kNormal, rng, s);
  prog_embed_ = store_.add("apm.prog_embed", program_vocab_.size(), d, nn::Init::kNormal, rng, s);
  seg_embed_ = store_.add("apm.seg_embed", 3, d, nn::Init::kNormal, rng, 0.02);
  pos_embed_ = store_.add("apm.src_pos_embed", cfg_.model.max_seq, d, nn::Init::kNormal, rng, 0.02);
  if (cfg_.couple == Coupling::kHidden) state_proj_ = nn::Linear::make(store_, "apm.state_proj", cfg_.sum_d_model, d, rng);
  net_ = nn::EncoderDecoder(store_, "apm", cfg_.model, program_vocab_.size(), rng, zero_output);
}

ApmInput ApmModel::make_input(const std::string& task_description, const text::Caption& caption,
                              const std::optional<dsl::ActionStep>& prev_action, nn::Tensor caption_states) const {
  ApmInput in;
  if (cfg_.use_task) {
    for (const auto& w : text::split_words(task_description)) in.task.push_back(text_vocab_.id(w));
  }
  in.caption = caption.ids;
  in.caption_states = std::move(caption_states);
  if (prev_action) {
    const auto toks = dsl::step_tokens(*prev_action, cfg_.max_id);
    in.prev_action = text::encode_tokens(toks, program_vocab_);
  }
  return in;
}

std::vector<int> ApmModel::target_ids(const dsl::ActionStep& step) const {
  const auto toks = dsl::step_tokens(step, cfg_.max_id);
  auto ids = text::encode_tokens(toks, program_vocab_);
  ids.push_back(text::kEos);
  return ids;
}

ApmAction ApmModel::action_from_ids(std::span<const int> generated) const {
  std::vector<std::string> toks;
  bool closed = false;
  for (int id : generated) {
    if (id == text::kEos) {
      closed = true;
      break;
    }
    toks.push_back(program_vocab_.token(id));
  }
  if (closed) {
    if (auto step = dsl::step_from_tokens(toks)) return *step;
  }
  if (toks.empty() && !closed) toks.emplace_back("<eos-missing>");
  return MalformedAction{std::move(toks)};
}

Var ApmModel::encode(Graph& g, const ApmInput& in) const {
  std::vector<Var> parts;
  std::vector<int> segs;
  Var text_table = g.param(text_embed_);
  const int sep[1] = {text::kSep};
  if (cfg_.use_task && !in.task.empty()) {
    parts.push_back(embed(text_table, in.task));
    segs.insert(segs.end(), in.task.size(), kSegTask);
    parts.push_back(embed(text_table, sep));
    segs.push_back(kSegTask);
  }
  if (cfg_.couple == Coupling::kHidden) {
    if (in.caption_states.cols() != cfg_.sum_d_model || in.caption_states.rows() == 0) {
      throw ShapeMismatch("hidden coupling expects caption states of width " + std::to_string(cfg_.sum_d_model));
    }
    parts.push_back(state_proj_(g, g.constant(in.caption_states)));
    segs.insert(segs.end(), static_cast<size_t>(in.caption_states.rows()), kSegCaption);
  } else {
    if (in.caption.empty()) throw ShapeMismatch("empty caption input");
    parts.push_back(embed(text_table, in.caption));
    segs.insert(segs.end(), in.caption.size(), kSegCaption);
  }
  parts.push_back(embed(text_table, sep));
  segs.push_back(kSegCaption);
  if (!in.prev_action.empty()) {
    parts.push_back(embed(g.param(prog_embed_), in.prev_action));
    segs.insert(segs.end(), in.prev_action.size(), kSegAction);
  }
  const int n = static_cast<int>(segs.size());
  if (n > cfg_.model.max_seq) {
    throw ShapeMismatch("action model input of " + std::to_string(n) + " tokens exceeds max_seq " +
                        std::to_string(cfg_.model.max_seq));
  }
  Var x = concat_rows(parts);
  x = add(x, embed(g.param(seg_embed_), segs));
  x = add(x, embed(g.param(pos_embed_), nn::iota_ids(n)));
  return net_.encode(g, x);
}

Var ApmModel::log_probs(Graph& g, Var memory, std::span<const int> prefix) const {
  return net_.log_probs(g, net_.decode_hidden(g, memory, prefix));
}

nn::Tensor ApmModel::forward_logprobs(const ApmInput& in, std::span<const int> target) const {
  Graph g(store_);
  std::vector<int> prefix{text::kBos};
  prefix.insert(prefix.end(), target.begin(), target.end());
  prefix.pop_back();
  return log_probs(g, encode(g, in), prefix).value();
}

std::string ApmModel::vocab_hash(const text::Vocab& text_vocab, const text::Vocab& program_vocab) {
  return sha256_hex(text_vocab.hash() + ":" + program_vocab.hash());
}

void ApmModel::save(const std::string& path) const {
  nn::save_checkpoint(path, store_, nn::CheckpointMeta{"apm", to_json(cfg_), vocab_hash(text_vocab_, program_vocab_)});
}

ApmModel ApmModel::load(const std::string& path, const text::Vocab& text_vocab, const text::Vocab& program_vocab) {
  const auto meta = nn::read_checkpoint_meta(path);
  if (meta.kind != "apm") throw CheckpointError(path + " holds a '" + meta.kind + "' model, expected 'apm'");
  ApmModel m(text_vocab, program_vocab, apm_config_from_json(meta.config), 0);
  nn::load_checkpoint(path, m.store_, vocab_hash(text_vocab, program_vocab));
  return m;
}

namespace {

nn::NextTokenFn next_fn(const ApmModel& m, Graph& g, Var memory, std::vector<int>& prefix) {
  return [&m, &g, memory, &prefix](std::span<const int> generated) {
    prefix.assign(1, text::kBos);
    prefix.insert(prefix.end(), generated.begin(), generated.end());
    const nn::Tensor lp = m.log_probs(g, memory, prefix).value();
    auto last = lp.row(lp.rows() - 1);
    return std::vector<double>(last.begin(), last.end());
  };
}

}  // namespace

ApmDecision apm_decide(const ApmModel& m, const ApmInput& in, const nn::DecodeConfig& d) {
  Graph g(m.params());
  const Var memory = m.encode(g, in);
  std::vector<int> prefix;
  nn::DecodeConfig dc = d;
  dc.max_len = std::min(d.max_len, m.config().max_action_len);
  const auto hyps = nn::decode(next_fn(m, g, memory, prefix), dc, text::kEos);
  return ApmDecision{m.action_from_ids(hyps.front().tokens), hyps.front().tokens, hyps.front().logprob};
}

ApmAction apm_next_action(const ApmModel& m, const ApmInput& in, const nn::DecodeConfig& d) {
  return apm_decide(m, in, d).action;
}

std::vector<ApmDecision> apm_beam(const ApmModel& m, const ApmInput& in, int k) {
  Graph g(m.params());
  const Var memory = m.encode(g, in);
  std::vector<int> prefix;
  const auto hyps =
      nn::decode(next_fn(m, g, memory, prefix), nn::DecodeConfig::beam_search(k, m.config().max_action_len), text::kEos);
  std::vector<ApmDecision> out;
  for (const auto& h : hyps) out.push_back(ApmDecision{m.action_from_ids(h.tokens), h.tokens, h.logprob});
  return out;
}

}  // namespace visact::models
