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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "visact/dsl/action.h"
#include "visact/world/object_class.h"

namespace visact::world {

using dsl::ObjectRef;

struct FloorSpot {
  int room = 0;
  int x = 0;
  int y = 0;
  bool operator==(const FloorSpot&) const = default;
};
struct OnTop {
  ObjectRef base;
  bool operator==(const OnTop&) const = default;
};
struct InsideOf {
  ObjectRef container;
  bool operator==(const InsideOf&) const = default;
};
// Held by the agent: the object has no placement in the scene.
struct InHand {
  bool operator==(const InHand&) const = default;
};

using Placement = std::variant<FloorSpot, OnTop, InsideOf, InHand>;

struct ObjectState {
  Placement placement;
  bool open = false;
  bool powered = false;

  bool operator==(const ObjectState&) const = default;
};

struct Room {
  int id = 0;
  std::string name;
  int width = 0;   // interior cells
  int height = 0;

  bool operator==(const Room&) const = default;
};

// The simulated household. Objects are keyed by (class name, instance id);
// the map order is the canonical serialisation order.
struct SceneGraph {
  int layout_id = 1;
  uint64_t seed = 0;
  std::vector<Room> rooms;
  std::map<ObjectRef, ObjectState> objects;

  bool operator==(const SceneGraph&) const = default;

  const ObjectState* find(const ObjectRef& ref) const;
  const ObjectClass& class_of(const ObjectRef& ref) const;
  bool has_class(const std::string& name) const;
  // Instances of a class in ascending id order.
  std::vector<ObjectRef> instances_of(const std::string& name) const;

  // Follows On/Inside links down to the floor-standing object. Returns
  // nullopt for objects carried by the agent (directly or transitively).
  std::optional<ObjectRef> root_of(const ObjectRef& ref) const;
  std::optional<FloorSpot> spot_of(const ObjectRef& ref) const;

  // Objects placed directly on or inside `ref`.
  std::vector<ObjectRef> children_of(const ObjectRef& ref) const;

  // True when `ref` sits (transitively) inside a closed openable container.
  bool enclosed(const ObjectRef& ref) const;
};

enum class Posture { kStanding, kSitting };

struct AgentState {
  int room = 0;
  std::optional<ObjectRef> near;
  std::vector<ObjectRef> holding;  // at most two
  Posture posture = Posture::kStanding;
  std::optional<ObjectRef> seat;   // set iff sitting

  bool operator==(const AgentState&) const = default;

  bool holds(const ObjectRef& ref) const;
};

inline constexpr size_t kHands = 2;

// Whether the agent is close enough to manipulate `ref`: it stands at the same
// floor location (the object or anything stacked with it).
bool is_near(const SceneGraph& world, const AgentState& agent, const ObjectRef& ref);

// Checks the structural invariants; throws InvalidArgument describing the
// first violation.
void check_invariants(const SceneGraph& world, const AgentState& agent);

}  // namespace visact::world
