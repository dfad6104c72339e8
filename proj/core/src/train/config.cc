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

#include "visact/train/config.h"

#include <cmath>
#include <fstream>

#include "visact/common/error.h"

namespace visact::train {

std::string baseline_name(BaselineMode m) {
  switch (m) {
    case BaselineMode::kGreedySelfCritical: return "greedy";
    case BaselineMode::kBeamMean: return "beam_mean";
    case BaselineMode::kNone: return "none";
  }
  return "?";
}

BaselineMode parse_baseline(const std::string& name) {
  if (name == "greedy" || name == "self_critical") return BaselineMode::kGreedySelfCritical;
  if (name == "beam_mean") return BaselineMode::kBeamMean;
  if (name == "none") return BaselineMode::kNone;
  throw ConfigError("unknown baseline '" + name + "' (greedy, beam_mean, none)");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (max_updates < 0) throw ConfigError("max_updates must be non-negative");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  for (double v : {reward.step_reward, reward.fail_reward, reward.goal_bonus, match_bonus, convergence_delta,
                   reward_convergence}) {
    if (!std::isfinite(v)) throw ConfigError("non-finite training setting");
  }
  optim.validate();
  rl_decode.validate();
}

void to_json(nlohmann::ordered_json& j, const TrainConfig& c) {
  nlohmann::ordered_json optim, decode;
  to_json(optim, c.optim);
  to_json(decode, c.rl_decode);
  j = nlohmann::ordered_json{
      {"batch_size", c.batch_size},
      {"epochs", c.epochs},
      {"optim", optim},
      {"rl_decode", decode},
      {"k", c.k},
      {"reward",
       {{"step_reward", c.reward.step_reward}, {"fail_reward", c.reward.fail_reward},
        {"goal_bonus", c.reward.goal_bonus}}},
      {"baseline", baseline_name(c.baseline)},
      {"seed", c.seed},
      {"match_expert", c.match_expert},
      {"match_bonus", c.match_bonus},
      {"credit", c.credit == Credit::kReturn ? "return" : "per_step"},
      {"gamma", c.gamma},
      {"convergence_delta", c.convergence_delta},
      {"reward_convergence", c.reward_convergence},
      {"max_updates", c.max_updates},
      {"max_steps", c.max_steps},
      {"oracle_captions", c.oracle_captions},
  };
}

void from_json(const nlohmann::ordered_json& j, TrainConfig& c) {
  if (!j.is_object()) throw ConfigError("training config must be an object");
  try {
    TrainConfig d;
    d.batch_size = j.value("batch_size", d.batch_size);
    d.epochs = j.value("epochs", d.epochs);
    if (j.contains("optim")) from_json(j.at("optim"), d.optim);
    if (j.contains("rl_decode")) from_json(j.at("rl_decode"), d.rl_decode);
    d.k = j.value("k", d.k);
    if (j.contains("reward")) {
      const auto& r = j.at("reward");
      d.reward.step_reward = r.value("step_reward", d.reward.step_reward);
      d.reward.fail_reward = r.value("fail_reward", d.reward.fail_reward);
      d.reward.goal_bonus = r.value("goal_bonus", d.reward.goal_bonus);
    }
    if (j.contains("baseline")) d.baseline = parse_baseline(j.at("baseline").get<std::string>());
    d.seed = j.value("seed", d.seed);
    d.match_expert = j.value("match_expert", d.match_expert);
    d.match_bonus = j.value("match_bonus", d.match_bonus);
    if (j.contains("credit")) {
      const auto s = j.at("credit").get<std::string>();
      if (s == "return") d.credit = Credit::kReturn;
      else if (s == "per_step") d.credit = Credit::kPerStep;
      else throw ConfigError("unknown credit mode '" + s + "'");
    }
    d.gamma = j.value("gamma", d.gamma);
    d.convergence_delta = j.value("convergence_delta", d.convergence_delta);
    d.reward_convergence = j.value("reward_convergence", d.reward_convergence);
    d.max_updates = j.value("max_updates", d.max_updates);
    d.max_steps = j.value("max_steps", d.max_steps);
    d.oracle_captions = j.value("oracle_captions", d.oracle_captions);
    d.validate();
    c = d;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("training config: ") + e.what());
  }
}

nlohmann::ordered_json to_json(const EpochLog& e) {
  return nlohmann::ordered_json{{"epoch", e.epoch},
                                {"loss", e.loss},
                                {"mean_reward", e.mean_reward},
                                {"execution_rate", e.execution_rate},
                                {"seconds", e.seconds},
                                {"updates", e.updates}};
}

std::string TrainLog::to_text() const {
  std::string out;
  for (const auto& e : epochs) out += to_json(e).dump() + "\n";
  return out;
}

void TrainLog::write(const std::string& path) const {
  std::ofstream f(path, std::ios::trunc);
  f << to_text();
  if (!f) throw Error("cannot write " + path);
}

}  // namespace visact::train
