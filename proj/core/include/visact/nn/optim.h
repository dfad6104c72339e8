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

#include <vector>

#include <nlohmann/json.hpp>

#include "visact/nn/params.h"

namespace visact::nn {

struct OptimizerConfig {
  enum class Kind { kSgd, kAdam };
  Kind kind = Kind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 1.0;  // <= 0 disables clipping

  void validate() const;
  bool operator==(const OptimizerConfig&) const = default;
};

void to_json(nlohmann::ordered_json& j, const OptimizerConfig& c);
void from_json(const nlohmann::ordered_json& j, OptimizerConfig& c);

// Rescales gradients to `max_norm` when their global norm exceeds it.
// Returns the norm before clipping.
double clip_grad_norm(ParameterStore& store, double max_norm);

class Optimizer {
 public:
  Optimizer(ParameterStore& store, OptimizerConfig cfg);

  // Clips, then applies one update from the accumulated gradients.
  void step();
  long steps() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

 private:
  ParameterStore& store_;
  OptimizerConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace visact::nn
