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

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/models/apm_model.h"
#include "visact/models/sum_model.h"
#include "visact/nn/decode.h"
#include "visact/pipeline/dataset.h"
#include "visact/train/config.h"

namespace visact::cli {

using Json = nlohmann::ordered_json;

struct EvalOptions {
  std::string split = "test";
  int tasks = 0;  // 0 = every test episode
  int max_steps = 12;
  bool oracle_captions = false;
  std::string predictions;  // caption-only mode: one caption per line
  std::string references;
};

struct RolloutOptions {
  int layout = 1;
  std::string task;  // empty = first achievable task of the layout
  uint64_t world_seed = 0;
  int max_steps = 12;
};

// Everything a run needs, resolved from defaults, the config file,
// VISACT_* environment variables and flags, in that order.
struct RunConfig {
  uint64_t seed = 0;
  int threads = 1;
  std::string data;
  std::string out;
  std::string sum_checkpoint;
  std::string apm_checkpoint;
  pipeline::GenerateConfig dataset;
  models::SumConfig sum;
  models::ApmConfig apm;
  train::TrainConfig train;
  int rl_tasks = 0;  // 0 = every training episode
  nn::DecodeConfig decode = nn::DecodeConfig::greedy();
  EvalOptions eval;
  RolloutOptions rollout;
};

Json default_json();
Json to_json(const RunConfig& c);
RunConfig run_config_from_json(const Json& j);

// "a.b.c" or "/a/b/c"
Json::json_pointer pointer_for(std::string_view key);

// Raw flag or env text: JSON when it parses, otherwise a string.
Json parse_value(const std::string& text);

class ConfigBuilder {
 public:
  ConfigBuilder();
  void merge_file(const std::string& path);
  // Applies VISACT_SEED, VISACT_TRAIN__EPOCHS, ... ("__" nests).
  std::vector<std::string> merge_env(char** envp);
  void set(std::string_view key, const Json& value);
  const Json& json() const { return j_; }
  RunConfig build() const;

 private:
  Json j_;
};

std::vector<int> parse_int_list(std::string_view text);  // "1-3,5" -> 1 2 3 5

}  // namespace visact::cli
