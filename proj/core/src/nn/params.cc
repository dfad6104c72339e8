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

#include "visact/nn/params.h"

#include <cmath>
#include <cstring>

#include "visact/common/error.h"
#include "visact/common/hash.h"

namespace visact::nn {

ParamId ParameterStore::add(std::string name, int rows, int cols, Init init, Rng& rng, double scale) {
  Tensor t(rows, cols);
  switch (init) {
    case Init::kZeros: break;
    case Init::kOnes: t.fill(1.0); break;
    case Init::kNormal:
      for (double& v : t.values()) v = scale * rng.normal();
      break;
    case Init::kXavier: {
      const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
      for (double& v : t.values()) v = rng.uniform(-a, a);
      break;
    }
  }
  return add(std::move(name), std::move(t));
}

ParamId ParameterStore::add(std::string name, Tensor value) {
  if (find(name)) throw InvalidArgument("duplicate parameter name '" + name + "'");
  Tensor grad(value.rows(), value.cols());
  params_.push_back(Parameter{std::move(name), std::move(value), std::move(grad)});
  return static_cast<ParamId>(params_.size() - 1);
}

std::optional<ParamId> ParameterStore::find(std::string_view name) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return static_cast<ParamId>(i);
  }
  return std::nullopt;
}

size_t ParameterStore::num_values() const {
  size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.grad.fill(0.0);
}

double ParameterStore::grad_norm() const {
  double s = 0.0;
  for (const auto& p : params_) {
    for (double g : p.grad.values()) s += g * g;
  }
  return std::sqrt(s);
}

void ParameterStore::scale_grad(double s) {
  for (auto& p : params_) {
    for (double& g : p.grad.values()) g *= s;
  }
}

std::string ParameterStore::checksum() const {
  Sha256 h;
  for (const auto& p : params_) {
    h.update(p.name);
    h.update(std::to_string(p.value.rows()) + "x" + std::to_string(p.value.cols()));
    for (double v : p.value.values()) {
      uint64_t bits = 0;
      std::memcpy(&bits, &v, sizeof bits);
      unsigned char le[8];
      for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>(bits >> (8 * i));
      h.update(std::string_view(reinterpret_cast<const char*>(le), 8));
    }
  }
  return h.hex_digest();
}

}  // namespace visact::nn
