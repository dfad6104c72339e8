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

#include "visact/dsl/action.h"
#include "visact/world/scene.h"
#include "visact/world/task.h"

namespace visact::world {

// Deterministic scripted expert. Goal atoms are achieved in the order
// placements, holdings, object states, seating; each atom already true is
// skipped, so a satisfied goal yields an empty program. Instances are chosen
// by lowest id. Throws Unachievable when the goal names a class the layout
// lacks or cannot be reached with two hands.
dsl::Program expert_plan(const SceneGraph& world, const AgentState& agent, const Task& task);

}  // namespace visact::world
