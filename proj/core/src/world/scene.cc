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

#include "visact/world/scene.h"

#include <algorithm>
#include <set>

#include "visact/common/error.h"

namespace visact::world {

const ObjectState* SceneGraph::find(const ObjectRef& ref) const {
  auto it = objects.find(ref);
  return it == objects.end() ? nullptr : &it->second;
}

const ObjectClass& SceneGraph::class_of(const ObjectRef& ref) const {
  return ClassRegistry::builtin().at(ref.name);
}

bool SceneGraph::has_class(const std::string& name) const {
  auto it = objects.lower_bound(ObjectRef{name, 0});
  return it != objects.end() && it->first.name == name;
}

std::vector<ObjectRef> SceneGraph::instances_of(const std::string& name) const {
  std::vector<ObjectRef> out;
  for (auto it = objects.lower_bound(ObjectRef{name, 0}); it != objects.end() && it->first.name == name; ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::optional<ObjectRef> SceneGraph::root_of(const ObjectRef& ref) const {
  ObjectRef cur = ref;
  for (size_t hops = 0; hops <= objects.size(); ++hops) {
    const ObjectState* s = find(cur);
    if (s == nullptr) return std::nullopt;
    if (std::holds_alternative<FloorSpot>(s->placement)) return cur;
    if (std::holds_alternative<InHand>(s->placement)) return std::nullopt;
    cur = std::holds_alternative<OnTop>(s->placement) ? std::get<OnTop>(s->placement).base
                                                      : std::get<InsideOf>(s->placement).container;
  }
  return std::nullopt;  // cycle; rejected by check_invariants
}

std::optional<FloorSpot> SceneGraph::spot_of(const ObjectRef& ref) const {
  auto root = root_of(ref);
  if (!root) return std::nullopt;
  return std::get<FloorSpot>(find(*root)->placement);
}

std::vector<ObjectRef> SceneGraph::children_of(const ObjectRef& ref) const {
  std::vector<ObjectRef> out;
  for (const auto& [r, s] : objects) {
    if (const auto* on = std::get_if<OnTop>(&s.placement); on && on->base == ref) out.push_back(r);
    if (const auto* in = std::get_if<InsideOf>(&s.placement); in && in->container == ref) out.push_back(r);
  }
  return out;
}

bool SceneGraph::enclosed(const ObjectRef& ref) const {
  ObjectRef cur = ref;
  for (size_t hops = 0; hops <= objects.size(); ++hops) {
    const ObjectState* s = find(cur);
    if (s == nullptr) return false;
    if (const auto* in = std::get_if<InsideOf>(&s->placement)) {
      const ObjectState* c = find(in->container);
      if (c != nullptr && class_of(in->container).has(Affordance::kOpenable) && !c->open) return true;
      cur = in->container;
    } else if (const auto* on = std::get_if<OnTop>(&s->placement)) {
      cur = on->base;
    } else {
      return false;
    }
  }
  return false;
}

bool AgentState::holds(const ObjectRef& ref) const {
  return std::find(holding.begin(), holding.end(), ref) != holding.end();
}

bool is_near(const SceneGraph& world, const AgentState& agent, const ObjectRef& ref) {
  if (!agent.near) return false;
  auto a = world.root_of(*agent.near);
  auto b = world.root_of(ref);
  return a && b && *a == *b;
}

void check_invariants(const SceneGraph& world, const AgentState& agent) {
  const auto& reg = ClassRegistry::builtin();
  if (world.layout_id < 1 || world.layout_id > 7) throw InvalidArgument("layout_id out of range");
  for (const auto& [ref, s] : world.objects) {
    if (reg.find(ref.name) == nullptr) throw InvalidArgument("unknown class " + ref.name);
    if (ref.id < 1) throw InvalidArgument("object ids must be positive");
    if (const auto* f = std::get_if<FloorSpot>(&s.placement)) {
      if (f->room < 0 || f->room >= static_cast<int>(world.rooms.size())) throw InvalidArgument("bad room");
      const Room& room = world.rooms[f->room];
      if (f->x < 0 || f->y < 0 || f->x >= room.width || f->y >= room.height) {
        throw InvalidArgument("floor spot outside room for " + ref.name);
      }
    } else if (const auto* on = std::get_if<OnTop>(&s.placement)) {
      if (world.find(on->base) == nullptr) throw InvalidArgument("dangling On reference");
      if (!world.class_of(on->base).has(Affordance::kSurface)) throw InvalidArgument("On non-surface");
    } else if (const auto* in = std::get_if<InsideOf>(&s.placement)) {
      if (world.find(in->container) == nullptr) throw InvalidArgument("dangling Inside reference");
      if (!world.class_of(in->container).has(Affordance::kContainer)) throw InvalidArgument("Inside non-container");
    } else if (!agent.holds(ref)) {
      // Carried transitively is fine only through a held parent, which is
      // expressed with On/Inside, so a bare InHand must be in a hand.
      throw InvalidArgument("InHand object not held: " + ref.name);
    }
    // Placement links must form a forest.
    std::set<ObjectRef> seen{ref};
    ObjectRef cur = ref;
    for (;;) {
      const ObjectState* cs = world.find(cur);
      if (const auto* on = std::get_if<OnTop>(&cs->placement)) {
        cur = on->base;
      } else if (const auto* in = std::get_if<InsideOf>(&cs->placement)) {
        cur = in->container;
      } else {
        break;
      }
      if (!seen.insert(cur).second) throw InvalidArgument("placement cycle through " + ref.name);
    }
  }
  if (agent.holding.size() > kHands) throw InvalidArgument("more than two held objects");
  for (const auto& h : agent.holding) {
    const ObjectState* s = world.find(h);
    if (s == nullptr || !std::holds_alternative<InHand>(s->placement)) {
      throw InvalidArgument("held object has a scene placement: " + h.name);
    }
  }
  if ((agent.posture == Posture::kSitting) != agent.seat.has_value()) {
    throw InvalidArgument("posture and seat disagree");
  }
  if (agent.seat && !world.class_of(*agent.seat).has(Affordance::kSittable)) {
    throw InvalidArgument("sitting on a non-sittable object");
  }
  if (agent.room < 0 || agent.room >= static_cast<int>(world.rooms.size())) throw InvalidArgument("agent room");
}

}  // namespace visact::world
