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
#include "visact/nn/optim.h"
#include "visact/world/sim.h"

namespace visact::train {

enum class BaselineMode { kGreedySelfCritical, kBeamMean, kNone };
std::string baseline_name(BaselineMode m);
BaselineMode parse_baseline(const std::string& name);

// How sampled actions are credited in REINFORCE: each step's own reward, or
// the discounted return of the collected trajectory from that step on.
enum class Credit { kPerStep, kReturn };

struct TrainConfig {
  int batch_size = 8;
  int epochs = 10;
  nn::OptimizerConfig optim;
  nn::DecodeConfig rl_decode = nn::DecodeConfig::sample(1.0, 0);
  int k = 4;  // candidates per visited state
  world::RewardSpec reward;
  BaselineMode baseline = BaselineMode::kGreedySelfCritical;
  uint64_t seed = 0;
  bool match_expert = false;  // +match_bonus when a candidate equals the expert step
  double match_bonus = 1.0;
  Credit credit = Credit::kPerStep;
  double gamma = 1.0;
  double convergence_delta = 1e-5;  // epoch loss delta that ends supervised training
  double reward_convergence = 1e-3; // moving-average reward delta that ends RL; 0 disables
  int max_updates = 0;              // optimizer steps cap for RL; 0 = no cap
  int max_steps = 12;               // episode cap during RL rollouts
  bool oracle_captions = false;     // APM sees simulator captions instead of SUM output

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::ordered_json& j, const TrainConfig& c);
void from_json(const nlohmann::ordered_json& j, TrainConfig& c);

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double mean_reward = 0.0;
  double execution_rate = 0.0;
  double seconds = 0.0;
  long updates = 0;
};

nlohmann::ordered_json to_json(const EpochLog& e);

struct TrainLog {
  std::vector<EpochLog> epochs;
  bool converged = false;
  // One JSON object per line, one line per epoch.
  std::string to_text() const;
  void write(const std::string& path) const;
};

}  // namespace visact::train
