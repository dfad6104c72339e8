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

#include "visact/world/sim.h"

#include <algorithm>

#include "visact/common/rng.h"

namespace visact::world {

std::string_view to_string(ExecErrorCode code) {
  switch (code) {
    case ExecErrorCode::kUnknownVerb: return "UnknownVerb";
    case ExecErrorCode::kBadArity: return "BadArity";
    case ExecErrorCode::kUnknownObjectId: return "UnknownObjectId";
    case ExecErrorCode::kNotNear: return "NotNear";
    case ExecErrorCode::kNotGrabbable: return "NotGrabbable";
    case ExecErrorCode::kHandsFull: return "HandsFull";
    case ExecErrorCode::kAlreadyOpen: return "AlreadyOpen";
    case ExecErrorCode::kAlreadyClosed: return "AlreadyClosed";
    case ExecErrorCode::kNotOpenable: return "NotOpenable";
    case ExecErrorCode::kNotSwitchable: return "NotSwitchable";
    case ExecErrorCode::kAlreadyOn: return "AlreadyOn";
    case ExecErrorCode::kAlreadyOff: return "AlreadyOff";
    case ExecErrorCode::kNotHolding: return "NotHolding";
    case ExecErrorCode::kNotSurface: return "NotSurface";
    case ExecErrorCode::kNotContainer: return "NotContainer";
    case ExecErrorCode::kContainerClosed: return "ContainerClosed";
    case ExecErrorCode::kNotSittable: return "NotSittable";
    case ExecErrorCode::kWrongPosture: return "WrongPosture";
    case ExecErrorCode::kTargetHeld: return "TargetHeld";
  }
  return "?";
}

namespace {

ExecError fail(ExecErrorCode code, const dsl::ObjectRef* ref = nullptr) {
  return ExecError{code, ref ? ref->name + "(" + std::to_string(ref->id) + ")" : std::string()};
}

}  // namespace

Result<Transition, ExecError> step(const SceneGraph& world, const AgentState& agent,
                                   const dsl::ActionStep& action) {
  using dsl::Verb;
  using E = ExecErrorCode;
  auto info = dsl::lookup_verb(action.verb);
  if (!info) return ExecError{E::kUnknownVerb, action.verb};
  if (static_cast<int>(action.args.size()) != info->arity) return ExecError{E::kBadArity, action.verb};
  for (const auto& arg : action.args) {
    if (world.find(arg) == nullptr) return fail(E::kUnknownObjectId, &arg);
  }

  Transition next{world, agent};
  auto& w = next.world;
  auto& a = next.agent;
  const dsl::ObjectRef* target = action.args.empty() ? nullptr : &action.args[0];

  switch (info->verb) {
    case Verb::kWalk:
    case Verb::kRun: {
      if (agent.posture != Posture::kStanding) return fail(E::kWrongPosture, target);
      auto spot = world.spot_of(*target);
      if (!spot) return fail(E::kTargetHeld, target);
      a.near = *target;
      a.room = spot->room;
      break;
    }
    case Verb::kGrab: {
      if (agent.holds(*target) || !world.root_of(*target)) return fail(E::kTargetHeld, target);
      if (!is_near(world, agent, *target)) return fail(E::kNotNear, target);
      if (!world.class_of(*target).has(Affordance::kGrabbable)) return fail(E::kNotGrabbable, target);
      if (world.enclosed(*target)) return fail(E::kContainerClosed, target);
      if (agent.holding.size() >= kHands) return fail(E::kHandsFull, target);
      const auto root = *world.root_of(*target);
      w.objects.at(*target).placement = InHand{};
      a.holding.push_back(*target);
      if (a.near && *a.near == *target) {
        a.near = root == *target ? std::nullopt : std::optional<dsl::ObjectRef>(root);
      } else if (a.near && !w.root_of(*a.near)) {
        // The anchor was stacked on the grabbed object.
        a.near = root == *target ? std::nullopt : std::optional<dsl::ObjectRef>(root);
      }
      break;
    }
    case Verb::kOpen:
    case Verb::kClose: {
      if (!is_near(world, agent, *target)) return fail(E::kNotNear, target);
      if (!world.class_of(*target).has(Affordance::kOpenable)) return fail(E::kNotOpenable, target);
      const bool want_open = info->verb == Verb::kOpen;
      const bool is_open = world.find(*target)->open;
      if (want_open && is_open) return fail(E::kAlreadyOpen, target);
      if (!want_open && !is_open) return fail(E::kAlreadyClosed, target);
      w.objects.at(*target).open = want_open;
      break;
    }
    case Verb::kSwitchOn:
    case Verb::kSwitchOff: {
      if (!is_near(world, agent, *target)) return fail(E::kNotNear, target);
      if (!world.class_of(*target).has(Affordance::kSwitchable)) return fail(E::kNotSwitchable, target);
      const bool want_on = info->verb == Verb::kSwitchOn;
      const bool is_on = world.find(*target)->powered;
      if (want_on && is_on) return fail(E::kAlreadyOn, target);
      if (!want_on && !is_on) return fail(E::kAlreadyOff, target);
      w.objects.at(*target).powered = want_on;
      break;
    }
    case Verb::kPutOn:
    case Verb::kPutIn: {
      const auto& item = action.args[0];
      const auto& dest = action.args[1];
      if (!agent.holds(item)) return fail(E::kNotHolding, &item);
      if (!is_near(world, agent, dest)) return fail(E::kNotNear, &dest);
      const auto& cls = world.class_of(dest);
      if (info->verb == Verb::kPutOn) {
        if (!cls.has(Affordance::kSurface)) return fail(E::kNotSurface, &dest);
        w.objects.at(item).placement = OnTop{dest};
      } else {
        if (!cls.has(Affordance::kContainer)) return fail(E::kNotContainer, &dest);
        if (world.enclosed(dest) || (cls.has(Affordance::kOpenable) && !world.find(dest)->open)) {
          return fail(E::kContainerClosed, &dest);
        }
        w.objects.at(item).placement = InsideOf{dest};
      }
      a.holding.erase(std::find(a.holding.begin(), a.holding.end(), item));
      break;
    }
    case Verb::kSit: {
      if (agent.posture != Posture::kStanding) return fail(E::kWrongPosture, target);
      if (!is_near(world, agent, *target)) return fail(E::kNotNear, target);
      if (!world.class_of(*target).has(Affordance::kSittable)) return fail(E::kNotSittable, target);
      a.posture = Posture::kSitting;
      a.seat = *target;
      break;
    }
    case Verb::kStandUp: {
      if (agent.posture != Posture::kSitting) return fail(E::kWrongPosture);
      a.posture = Posture::kStanding;
      a.seat.reset();
      break;
    }
  }
  return next;
}

bool predicate_holds(const SceneGraph& world, const AgentState& agent, const Predicate& p) {
  switch (p.kind) {
    case PredicateKind::kInside:
    case PredicateKind::kOn:
      for (const auto& ref : world.instances_of(p.a)) {
        const auto& pl = world.find(ref)->placement;
        if (p.kind == PredicateKind::kInside) {
          if (const auto* in = std::get_if<InsideOf>(&pl); in && in->container.name == p.b) return true;
        } else {
          if (const auto* top = std::get_if<OnTop>(&pl); top && top->base.name == p.b) return true;
        }
      }
      return false;
    case PredicateKind::kState: {
      const auto& cls = ClassRegistry::builtin().at(p.a);
      for (const auto& ref : world.instances_of(p.a)) {
        const ObjectState& s = *world.find(ref);
        switch (p.state) {
          case StateValue::kOpen:
            if (cls.has(Affordance::kOpenable) && s.open) return true;
            break;
          case StateValue::kClosed:
            if (cls.has(Affordance::kOpenable) && !s.open) return true;
            break;
          case StateValue::kPoweredOn:
            if (cls.has(Affordance::kSwitchable) && s.powered) return true;
            break;
          case StateValue::kPoweredOff:
            if (cls.has(Affordance::kSwitchable) && !s.powered) return true;
            break;
        }
      }
      return false;
    }
    case PredicateKind::kHolding:
      return std::any_of(agent.holding.begin(), agent.holding.end(), [&](const auto& h) { return h.name == p.a; });
    case PredicateKind::kSittingOn:
      return agent.posture == Posture::kSitting && agent.seat && agent.seat->name == p.a;
  }
  return false;
}

bool check_goal(const SceneGraph& world, const AgentState& agent, const Task& task) {
  return std::all_of(task.goal.begin(), task.goal.end(),
                     [&](const Predicate& p) { return predicate_holds(world, agent, p); });
}

double env_reward(bool executed, bool goal_reached, const RewardSpec& spec) {
  return (executed ? spec.step_reward : spec.fail_reward) + (goal_reached ? spec.goal_bonus : 0.0);
}

AgentState initial_agent(const SceneGraph& world, uint64_t seed) {
  AgentState a;
  Rng rng(mix_seed(seed, 0xa6e47));
  a.room = static_cast<int>(rng.below(world.rooms.size()));
  return a;
}

}  // namespace visact::world
