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

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visact/models/apm_model.h"
#include "visact/models/rollout.h"
#include "visact/models/sum_model.h"
#include "visact/pipeline/dataset.h"
#include "visact/train/config.h"

namespace visact::train {

struct SumExample {
  world::Raster raster;
  text::Caption caption;
};

struct ApmExample {
  models::ApmInput input;
  std::vector<int> target;  // program ids of the expert step, EOS-terminated
};

// Records of one view become (raster, caption) pairs. Captions longer than
// the model limit are truncated.
std::vector<SumExample> sum_examples(std::span<const pipeline::EpisodeRecord> records, const text::Vocab& vocab,
                                     std::optional<world::View> view = std::nullopt,
                                     int max_caption_len = text::kDefaultMaxCaptionLen);

// Action-model inputs. Captions come from the records when `sum` is null or
// `oracle_captions` is set, otherwise from greedy SUM decoding of the raster
// (cached per raster). Hidden coupling needs `sum` for the decoder states.
std::vector<ApmExample> apm_examples(std::span<const pipeline::EpisodeRecord> records, const models::ApmModel& apm,
                                     const models::SumModel* sum, bool oracle_captions);

using ProgressFn = std::function<void(const EpochLog&)>;

// Cross-entropy fine-tuning of the captioner.
TrainLog finetune_sum(models::SumModel& sum, std::span<const SumExample> data, const TrainConfig& cfg,
                      const ProgressFn& progress = nullptr);

// Imitation fine-tuning of the action model; `sum` is read only.
TrainLog finetune_apm_il(models::ApmModel& apm, const models::SumModel& sum,
                         std::span<const pipeline::EpisodeRecord> records, const TrainConfig& cfg,
                         const ProgressFn& progress = nullptr);
TrainLog finetune_apm_examples(models::ApmModel& apm, std::span<const ApmExample> data, const TrainConfig& cfg,
                               const ProgressFn& progress = nullptr);

// A start state and the task to achieve from it.
struct TaskInstance {
  world::SceneGraph world;
  world::AgentState agent;
  const world::Task* task = nullptr;
};

// `count` instances over `layouts`, each with an achievable, not yet
// satisfied task drawn from `filter` (all tasks when empty).
std::vector<TaskInstance> sample_tasks(std::span<const int> layouts, int count, uint64_t seed,
                                       const std::vector<std::string>& filter = {});
// The start states of the episodes behind `records`, one per episode.
std::vector<TaskInstance> tasks_from_records(std::span<const pipeline::EpisodeRecord> records);

// REINFORCE fine-tuning of the action model against the simulator.
TrainLog finetune_apm_rl(models::ApmModel& apm, models::Captioner& captioner, std::span<const TaskInstance> tasks,
                         const TrainConfig& cfg, const models::RolloutConfig& env,
                         const ProgressFn& progress = nullptr);
// Uses a frozen SUM (or oracle captions when cfg.oracle_captions) in the
// SUM's view.
TrainLog finetune_apm_rl(models::ApmModel& apm, const models::SumModel& sum, std::span<const TaskInstance> tasks,
                         const TrainConfig& cfg, const ProgressFn& progress = nullptr);

// Reward of proposing `action` in (world, agent), with the optional
// expert-match bonus.
double candidate_reward(const world::SceneGraph& world, const world::AgentState& agent, const world::Task& task,
                        const models::ApmAction& action, const TrainConfig& cfg,
                        const std::optional<dsl::ActionStep>& expert = std::nullopt);

}  // namespace visact::train
