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

#include <span>

#include "visact/models/rollout.h"

namespace visact::metrics {

// Executed steps over predicted steps, pooled across trajectories. Malformed
// and stop outputs count as failed steps.
double execution_rate(std::span<const models::Trajectory> trajectories);

// Fraction of trajectories whose goal held at termination.
double episode_success_rate(std::span<const models::Trajectory> trajectories);

}  // namespace visact::metrics
