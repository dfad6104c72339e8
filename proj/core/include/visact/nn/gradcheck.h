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
#include <string>

#include "visact/common/rng.h"
#include "visact/nn/graph.h"
#include "visact/nn/params.h"

namespace visact::nn {

struct GradcheckOptions {
  int probes_per_tensor = 20;  // every coordinate when the tensor is smaller
  double h = 1e-5;
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-5;
};

struct GradcheckResult {
  double max_rel_err = 0.0;
  int probes = 0;
  std::string worst;  // "param[index]"
};

// Compares reverse-mode gradients of `loss` against central differences on
// randomly probed coordinates of every parameter in `store`. `loss` must be
// deterministic and build a fresh graph each call.
GradcheckResult gradcheck(ParameterStore& store, const std::function<Var(Graph&)>& loss, Rng& rng,
                          const GradcheckOptions& opts = {});

}  // namespace visact::nn
