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

#include "visact/models/rollout.h"

#include "visact/common/error.h"
#include "visact/dsl/script.h"
#include "visact/world/serialize.h"

namespace visact::models {

ModelCaptioner::ModelCaptioner(const SumModel& sum, nn::DecodeConfig decode, bool with_states)
    : sum_(sum), decode_(decode), with_states_(with_states) {}

CaptionResult ModelCaptioner::describe(const world::SceneGraph&, const world::AgentState&, const world::Raster& raster,
                                       const std::optional<dsl::ActionStep>&) {
  const bool cacheable = decode_.mode != nn::DecodeConfig::Mode::kSample;
  std::string key;
  if (cacheable) {
    key = encode_rle(raster);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  CaptionResult r;
  r.caption = sum_caption(sum_, raster, decode_);
  r.text = text::detokenize(r.caption, sum_.vocab());
  if (with_states_) r.states = sum_.caption_states(raster, r.caption);
  if (cacheable) cache_.emplace(std::move(key), r);
  return r;
}

OracleCaptioner::OracleCaptioner(const text::Vocab& vocab, world::View view, text::OracleOptions opts)
    : vocab_(vocab), view_(view), opts_(opts) {}

CaptionResult OracleCaptioner::describe(const world::SceneGraph& world, const world::AgentState& agent,
                                        const world::Raster&, const std::optional<dsl::ActionStep>& last_action) {
  CaptionResult r;
  r.text = text::caption_oracle(world, agent, view_, last_action, opts_);
  r.caption = text::tokenize(r.text, vocab_, text::TokenizeOptions{text::kDefaultMaxCaptionLen, true});
  return r;
}

ModelPolicy::ModelPolicy(const ApmModel& apm, nn::DecodeConfig decode) : apm_(apm), decode_(decode) {}

ApmDecision ModelPolicy::act(const PolicyContext& ctx, ApmInput* input) {
  ApmInput in = apm_.make_input(ctx.task.nl_description, ctx.caption.caption, ctx.prev_action, ctx.caption.states);
  nn::DecodeConfig d = decode_;
  d.seed = mix_seed(mix_seed(decode_.seed, episode_), static_cast<uint64_t>(ctx.step));
  ApmDecision out = apm_decide(apm_, in, d);
  if (input) *input = std::move(in);
  return out;
}

ApmDecision ScriptedPolicy::act(const PolicyContext&, ApmInput*) {
  if (next_ >= program_.steps.size()) return ApmDecision{MalformedAction{}, {}, 0.0};
  return ApmDecision{program_.steps[next_++], {}, 0.0};
}

std::vector<double> Trajectory::rewards() const {
  std::vector<double> r;
  r.reserve(steps.size());
  for (const auto& s : steps) r.push_back(s.reward);
  return r;
}

Trajectory rollout(Policy& policy, Captioner& captioner, const world::SceneGraph& world0,
                   const world::AgentState& agent0, const world::Task& task, const RolloutConfig& cfg) {
  if (cfg.max_steps < 1) throw InvalidArgument("rollout needs max_steps >= 1");
  Trajectory traj;
  traj.task = task.name;
  traj.layout_id = world0.layout_id;
  traj.seed = world0.seed;
  world::SceneGraph w = world0;
  world::AgentState a = agent0;
  std::optional<dsl::ActionStep> prev;
  if (world::check_goal(w, a, task)) {
    traj.success = true;
    return traj;
  }
  for (int t = 0; t < cfg.max_steps; ++t) {
    StepRecord rec;
    rec.world = w;
    rec.agent = a;
    rec.raster = world::render(w, a, cfg.view, cfg.render);
    const CaptionResult cap = captioner.describe(w, a, rec.raster, prev);
    rec.caption = cap.text;
    rec.prev_action = prev;
    ApmDecision dec = policy.act(PolicyContext{task, w, a, cap, prev, t}, &rec.input);
    rec.action = dec.action;
    rec.action_ids = std::move(dec.ids);
    if (const auto* step = std::get_if<dsl::ActionStep>(&rec.action)) {
      auto res = world::step(w, a, *step);
      if (res.ok()) {
        rec.executed = true;
        w = std::move(res.value().world);
        a = std::move(res.value().agent);
        prev = *step;
      } else {
        rec.error = res.error().code;
      }
    }
    rec.goal_reached = rec.executed && world::check_goal(w, a, task);
    rec.reward = world::env_reward(rec.executed, rec.goal_reached, cfg.reward);
    const bool stop = is_stop(rec.action);
    traj.steps.push_back(std::move(rec));
    if (traj.steps.back().goal_reached) {
      traj.success = true;
      break;
    }
    if (stop) {
      traj.stopped = true;
      break;
    }
  }
  return traj;
}

Trajectory rollout(const ApmModel& apm, const SumModel& sum, const world::SceneGraph& world,
                   const world::AgentState& agent, const world::Task& task, const nn::DecodeConfig& d, int max_steps) {
  ModelCaptioner captioner(sum, nn::DecodeConfig::greedy(), apm.config().couple == Coupling::kHidden);
  ModelPolicy policy(apm, d);
  RolloutConfig cfg;
  cfg.view = sum.config().view;
  cfg.render = sum.config().render;
  cfg.max_steps = max_steps;
  return rollout(policy, captioner, world, agent, task, cfg);
}

std::string action_text(const ApmAction& a) {
  if (const auto* s = std::get_if<dsl::ActionStep>(&a)) return dsl::format_step(*s);
  const auto& m = std::get<MalformedAction>(a);
  if (m.tokens.empty()) return "<stop>";
  std::string out = "<malformed>";
  for (const auto& t : m.tokens) out += " " + t;
  return out;
}

nlohmann::ordered_json to_json(const Trajectory& t) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    steps.push_back({{"t", i},
                     {"raster", world::encode_rle(s.raster)},
                     {"caption", s.caption},
                     {"action", action_text(s.action)},
                     {"executed", s.executed},
                     {"error", s.error ? std::string(world::to_string(*s.error)) : std::string()},
                     {"reward", s.reward},
                     {"goal_reached", s.goal_reached}});
  }
  return {{"task", t.task},       {"layout_id", t.layout_id}, {"seed", t.seed},
          {"success", t.success}, {"stopped", t.stopped},     {"steps", steps}};
}

}  // namespace visact::models
