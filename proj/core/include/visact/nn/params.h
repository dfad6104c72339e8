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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "visact/common/rng.h"
#include "visact/nn/tensor.h"

namespace visact::nn {

using ParamId = int;

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

enum class Init { kZeros, kOnes, kNormal, kXavier };

class ParameterStore {
 public:
  ParamId add(std::string name, int rows, int cols, Init init, Rng& rng, double scale = 0.02);
  ParamId add(std::string name, Tensor value);

  size_t size() const { return params_.size(); }
  Parameter& at(ParamId id) { return params_.at(static_cast<size_t>(id)); }
  const Parameter& at(ParamId id) const { return params_.at(static_cast<size_t>(id)); }
  std::optional<ParamId> find(std::string_view name) const;
  std::vector<Parameter>& all() { return params_; }
  const std::vector<Parameter>& all() const { return params_; }

  size_t num_values() const;
  void zero_grad();
  double grad_norm() const;
  void scale_grad(double s);

  // SHA-256 over names, shapes and little-endian values.
  std::string checksum() const;

 private:
  std::vector<Parameter> params_;
};

}  // namespace visact::nn
