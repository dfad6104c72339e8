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

#include "visact/nn/optim.h"

#include <cmath>

#include "visact/common/error.h"

namespace visact::nn {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw InvalidArgument("Adam betas must lie in [0, 1)");
  if (!(eps > 0.0)) throw InvalidArgument("Adam epsilon must be positive");
}

void to_json(nlohmann::ordered_json& j, const OptimizerConfig& c) {
  j = nlohmann::ordered_json{{"kind", c.kind == OptimizerConfig::Kind::kSgd ? "sgd" : "adam"},
                             {"learning_rate", c.learning_rate},
                             {"beta1", c.beta1},
                             {"beta2", c.beta2},
                             {"eps", c.eps},
                             {"clip_norm", c.clip_norm}};
}

void from_json(const nlohmann::ordered_json& j, OptimizerConfig& c) {
  if (j.contains("kind")) {
    const auto k = j.at("kind").get<std::string>();
    if (k == "sgd") {
      c.kind = OptimizerConfig::Kind::kSgd;
    } else if (k == "adam") {
      c.kind = OptimizerConfig::Kind::kAdam;
    } else {
      throw ConfigError("unknown optimizer kind '" + k + "'");
    }
  }
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.eps = j.value("eps", c.eps);
  c.clip_norm = j.value("clip_norm", c.clip_norm);
}

double clip_grad_norm(ParameterStore& store, double max_norm) {
  const double norm = store.grad_norm();
  if (max_norm > 0.0 && norm > max_norm) store.scale_grad(max_norm / norm);
  return norm;
}

Optimizer::Optimizer(ParameterStore& store, OptimizerConfig cfg) : store_(store), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.kind == OptimizerConfig::Kind::kAdam) {
    for (const auto& p : store_.all()) {
      m_.emplace_back(p.value.size(), 0.0);
      v_.emplace_back(p.value.size(), 0.0);
    }
  }
}

void Optimizer::step() {
  clip_grad_norm(store_, cfg_.clip_norm);
  ++t_;
  const double lr = cfg_.learning_rate;
  if (cfg_.kind == OptimizerConfig::Kind::kSgd) {
    for (auto& p : store_.all()) {
      for (size_t i = 0; i < p.value.size(); ++i) p.value.data()[i] -= lr * p.grad.data()[i];
    }
    return;
  }
  const double b1 = cfg_.beta1;
  const double b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto& params = store_.all();
  for (size_t k = 0; k < params.size(); ++k) {
    auto& p = params[k];
    auto& m = m_[k];
    auto& v = v_[k];
    for (size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad.data()[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      const double mh = m[i] / c1;
      const double vh = v[i] / c2;
      p.value.data()[i] -= lr * mh / (std::sqrt(vh) + cfg_.eps);
    }
  }
}

}  // namespace visact::nn
