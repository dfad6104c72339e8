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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/models/apm_model.h"
#include "visact/models/sum_model.h"
#include "visact/text/oracle.h"
#include "visact/world/sim.h"
#include "visact/world/task.h"

namespace visact::models {

struct CaptionResult {
  text::Caption caption;
  std::string text;
  nn::Tensor states;  // filled only for hidden coupling
};

// Source of the caption the policy sees at each step.
class Captioner {
 public:
  virtual ~Captioner() = default;
  virtual CaptionResult describe(const world::SceneGraph& world, const world::AgentState& agent,
                                 const world::Raster& raster, const std::optional<dsl::ActionStep>& last_action) = 0;
};

// Frozen SUM decoding. Deterministic decode modes are cached per raster.
class ModelCaptioner : public Captioner {
 public:
  ModelCaptioner(const SumModel& sum, nn::DecodeConfig decode = {}, bool with_states = false);
  CaptionResult describe(const world::SceneGraph& world, const world::AgentState& agent, const world::Raster& raster,
                         const std::optional<dsl::ActionStep>& last_action) override;
  size_t cache_size() const { return cache_.size(); }

 private:
  const SumModel& sum_;
  nn::DecodeConfig decode_;
  bool with_states_;
  std::map<std::string, CaptionResult> cache_;
};

// Ground-truth captions from the simulator state.
class OracleCaptioner : public Captioner {
 public:
  OracleCaptioner(const text::Vocab& vocab, world::View view, text::OracleOptions opts = {});
  CaptionResult describe(const world::SceneGraph& world, const world::AgentState& agent, const world::Raster& raster,
                         const std::optional<dsl::ActionStep>& last_action) override;

 private:
  const text::Vocab& vocab_;
  world::View view_;
  text::OracleOptions opts_;
};

struct PolicyContext {
  const world::Task& task;
  const world::SceneGraph& world;
  const world::AgentState& agent;
  const CaptionResult& caption;
  const std::optional<dsl::ActionStep>& prev_action;
  int step = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  // `input` is filled when the policy is a model (kept for credit assignment).
  virtual ApmDecision act(const PolicyContext& ctx, ApmInput* input) = 0;
};

// APM decoding; sampling seeds are derived from (seed, episode, step).
class ModelPolicy : public Policy {
 public:
  ModelPolicy(const ApmModel& apm, nn::DecodeConfig decode);
  ApmDecision act(const PolicyContext& ctx, ApmInput* input) override;
  void set_episode(uint64_t episode) { episode_ = episode; }

 private:
  const ApmModel& apm_;
  nn::DecodeConfig decode_;
  uint64_t episode_ = 0;
};

// Replays a fixed program, then stops.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(dsl::Program program) : program_(std::move(program)) {}
  ApmDecision act(const PolicyContext& ctx, ApmInput* input) override;

 private:
  dsl::Program program_;
  size_t next_ = 0;
};

struct StepRecord {
  world::SceneGraph world;  // state before the action
  world::AgentState agent;
  world::Raster raster;
  std::string caption;
  ApmInput input;
  std::optional<dsl::ActionStep> prev_action;
  ApmAction action;
  std::vector<int> action_ids;
  bool executed = false;
  std::optional<world::ExecErrorCode> error;
  double reward = 0.0;
  bool goal_reached = false;
};

struct Trajectory {
  std::string task;
  int layout_id = 0;
  uint64_t seed = 0;
  std::vector<StepRecord> steps;
  bool success = false;
  bool stopped = false;  // policy emitted an empty action

  std::vector<double> rewards() const;
};

struct RolloutConfig {
  world::View view = world::View::kAuto;
  world::RenderConfig render;
  int max_steps = 12;
  world::RewardSpec reward;
};

// render -> caption -> act -> step until the goal holds, the policy stops or
// max_steps actions were taken. A stop is recorded as one failed step.
Trajectory rollout(Policy& policy, Captioner& captioner, const world::SceneGraph& world,
                   const world::AgentState& agent, const world::Task& task, const RolloutConfig& cfg);

// Model-to-model form: SUM captions (greedy, cached) feed the APM.
Trajectory rollout(const ApmModel& apm, const SumModel& sum, const world::SceneGraph& world,
                   const world::AgentState& agent, const world::Task& task, const nn::DecodeConfig& d, int max_steps);

std::string action_text(const ApmAction& a);
nlohmann::ordered_json to_json(const Trajectory& t);

}  // namespace visact::models
