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

#include "visact/world/planner.h"

#include <algorithm>

#include "visact/common/error.h"
#include "visact/world/sim.h"

namespace visact::world {
namespace {

int phase(PredicateKind k) {
  switch (k) {
    case PredicateKind::kInside:
    case PredicateKind::kOn:
      return 0;
    case PredicateKind::kHolding:
      return 1;
    case PredicateKind::kState:
      return 2;
    case PredicateKind::kSittingOn:
      return 3;
  }
  return 4;
}

class Planner {
 public:
  Planner(const SceneGraph& world, const AgentState& agent) : world_(world), agent_(agent) {}

  void achieve(const Predicate& p) {
    if (predicate_holds(world_, agent_, p)) return;
    switch (p.kind) {
      case PredicateKind::kInside:
      case PredicateKind::kOn: {
        const ObjectRef item = pick_item(p.a);
        const ObjectRef dest = first_instance(p.b);
        ensure_holding(item);
        go_to(dest);
        const bool in = p.kind == PredicateKind::kInside;
        if (in && world_.class_of(dest).has(Affordance::kOpenable) && !world_.find(dest)->open) {
          emit("Open", {dest});
        }
        emit(in ? "PutIn" : "PutOn", {item, dest});
        break;
      }
      case PredicateKind::kHolding:
        ensure_holding(pick_item(p.a));
        break;
      case PredicateKind::kState: {
        const ObjectRef target = first_instance(p.a);
        go_to(target);
        static constexpr const char* kVerbs[] = {"Open", "Close", "SwitchOn", "SwitchOff"};
        emit(kVerbs[static_cast<int>(p.state)], {target});
        break;
      }
      case PredicateKind::kSittingOn: {
        const ObjectRef seat = first_instance(p.a);
        go_to(seat);
        emit("Sit", {seat});
        break;
      }
    }
    if (!predicate_holds(world_, agent_, p)) throw Unachievable("planner could not satisfy " + to_string(p));
  }

  dsl::Program take() { return std::move(program_); }
  const SceneGraph& world() const { return world_; }
  const AgentState& agent() const { return agent_; }

 private:
  ObjectRef first_instance(const std::string& cls) const {
    auto all = world_.instances_of(cls);
    if (all.empty()) throw Unachievable("no instance of " + cls);
    return all.front();
  }

  // Prefers an instance already in hand.
  ObjectRef pick_item(const std::string& cls) const {
    for (const auto& h : agent_.holding) {
      if (h.name == cls) return h;
    }
    return first_instance(cls);
  }

  void emit(const std::string& verb, std::vector<ObjectRef> args) {
    dsl::ActionStep s{verb, std::move(args)};
    auto r = step(world_, agent_, s);
    if (!r.ok()) {
      throw Unachievable("planner step " + verb + " failed: " + std::string(to_string(r.error().code)) + " " +
                         r.error().detail);
    }
    world_ = std::move(r.value().world);
    agent_ = std::move(r.value().agent);
    program_.steps.push_back(std::move(s));
  }

  void stand() {
    if (agent_.posture == Posture::kSitting) emit("StandUp", {});
  }

  void go_to(const ObjectRef& target) {
    if (is_near(world_, agent_, target)) return;
    stand();
    emit("Walk", {target});
  }

  void ensure_holding(const ObjectRef& item) {
    if (agent_.holds(item)) return;
    if (agent_.holding.size() >= kHands) throw Unachievable("both hands busy before grabbing " + item.name);
    go_to(item);
    // Open whatever encloses the item, outermost first.
    std::vector<ObjectRef> closed;
    ObjectRef cur = item;
    for (;;) {
      const Placement& pl = world_.find(cur)->placement;
      if (const auto* in = std::get_if<InsideOf>(&pl)) {
        if (world_.class_of(in->container).has(Affordance::kOpenable) && !world_.find(in->container)->open) {
          closed.push_back(in->container);
        }
        cur = in->container;
      } else if (const auto* top = std::get_if<OnTop>(&pl)) {
        cur = top->base;
      } else {
        break;
      }
    }
    for (auto it = closed.rbegin(); it != closed.rend(); ++it) emit("Open", {*it});
    emit("Grab", {item});
  }

  SceneGraph world_;
  AgentState agent_;
  dsl::Program program_;
};

}  // namespace

dsl::Program expert_plan(const SceneGraph& world, const AgentState& agent, const Task& task) {
  for (const auto& cls : task_classes(task)) {
    if (!world.has_class(cls)) throw Unachievable("task " + task.name + " needs absent class " + cls);
  }
  std::vector<Predicate> ordered = task.goal;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Predicate& a, const Predicate& b) { return phase(a.kind) < phase(b.kind); });
  Planner planner(world, agent);
  for (const auto& p : ordered) planner.achieve(p);
  if (!check_goal(planner.world(), planner.agent(), task)) {
    throw Unachievable("task " + task.name + ": later goal atoms undid earlier ones");
  }
  return planner.take();
}

}  // namespace visact::world
