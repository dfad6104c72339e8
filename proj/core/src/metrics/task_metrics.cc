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

#include "visact/metrics/task_metrics.h"

#include "visact/common/error.h"

namespace visact::metrics {

double execution_rate(std::span<const models::Trajectory> trajectories) {
  if (trajectories.empty()) throw EmptyInput("execution rate over no trajectories");
  size_t steps = 0;
  size_t executed = 0;
  for (const auto& t : trajectories) {
    for (const auto& s : t.steps) {
      ++steps;
      executed += s.executed ? 1 : 0;
    }
  }
  if (steps == 0) throw EmptyInput("execution rate over trajectories without predicted steps");
  return static_cast<double>(executed) / static_cast<double>(steps);
}

double episode_success_rate(std::span<const models::Trajectory> trajectories) {
  if (trajectories.empty()) throw EmptyInput("success rate over no trajectories");
  size_t ok = 0;
  for (const auto& t : trajectories) ok += t.success ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(trajectories.size());
}

}  // namespace visact::metrics
