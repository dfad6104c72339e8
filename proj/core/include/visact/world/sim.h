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
#include <string_view>

#include "visact/common/error.h"
#include "visact/dsl/action.h"
#include "visact/world/scene.h"
#include "visact/world/task.h"

namespace visact::world {

enum class ExecErrorCode {
  kUnknownVerb,
  kBadArity,
  kUnknownObjectId,
  kNotNear,
  kNotGrabbable,
  kHandsFull,
  kAlreadyOpen,
  kAlreadyClosed,
  kNotOpenable,
  kNotSwitchable,
  kAlreadyOn,
  kAlreadyOff,
  kNotHolding,
  kNotSurface,
  kNotContainer,
  kContainerClosed,
  kNotSittable,
  kWrongPosture,
  kTargetHeld,
};

std::string_view to_string(ExecErrorCode code);

struct ExecError {
  ExecErrorCode code;
  std::string detail;
};

struct Transition {
  SceneGraph world;
  AgentState agent;
};

// Applies one action. Pure: the inputs are never modified.
//
// Postconditions by verb:
//   Walk/Run   agent.near = target, agent.room = target's room (standing only)
//   Grab       target moves to a free hand; near re-anchors to the spot the
//              target was taken from (cleared if the target was that spot)
//   Open/Close target.open flips
//   SwitchOn/Off target.powered flips
//   PutOn/PutIn held object placed on/inside the destination
//   Sit        posture = sitting on target
//   StandUp    posture = standing
Result<Transition, ExecError> step(const SceneGraph& world, const AgentState& agent, const dsl::ActionStep& action);

bool predicate_holds(const SceneGraph& world, const AgentState& agent, const Predicate& p);
bool check_goal(const SceneGraph& world, const AgentState& agent, const Task& task);

struct RewardSpec {
  double step_reward = 1.0;
  double fail_reward = 0.0;
  double goal_bonus = 5.0;

  bool operator==(const RewardSpec&) const = default;
};

double env_reward(bool executed, bool goal_reached, const RewardSpec& spec);

// Where episodes start: standing, empty-handed, near nothing, in a
// seed-chosen room.
AgentState initial_agent(const SceneGraph& world, uint64_t seed);

}  // namespace visact::world
