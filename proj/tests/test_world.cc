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

#include <gtest/gtest.h>

#include <set>

#include "visact/common/error.h"
#include "visact/dsl/script.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"
#include "visact/world/serialize.h"
#include "visact/world/sim.h"

namespace visact::world {
namespace {

using dsl::ActionStep;

ActionStep act(std::string verb, std::vector<ObjectRef> args = {}) { return ActionStep{std::move(verb), std::move(args)}; }

const Task kGroceries{"groceries", {inside("groceries", "fridge"), state("fridge", StateValue::kClosed)}, "put groceries in the fridge"};

// A layout/seed whose groceries start reachable and whose fridge is closed.
std::pair<SceneGraph, AgentState> groceries_world() {
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    for (uint64_t seed = 1; seed < 200; ++seed) {
      SceneGraph w = gen_layout(layout, seed);
      if (!w.has_class("groceries") || !w.has_class("fridge")) continue;
      const ObjectRef g{"groceries", 1};
      const ObjectRef f{"fridge", 1};
      if (w.enclosed(g) || w.find(f)->open) continue;
      if (!std::holds_alternative<FloorSpot>(w.find(*w.root_of(g))->placement)) continue;
      if (w.root_of(g) == f) continue;
      return {w, initial_agent(w, seed)};
    }
  }
  ADD_FAILURE() << "no layout with groceries and a fridge";
  return {};
}

TEST(Layout, DeterministicPerSeed) {
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    EXPECT_EQ(serialize(gen_layout(layout, 42)), serialize(gen_layout(layout, 42)));
  }
  EXPECT_NE(serialize(gen_layout(1, 42)), serialize(gen_layout(1, 43)));
}

TEST(Layout, RejectsOutOfRangeIds) {
  EXPECT_THROW(gen_layout(8, 42), InvalidLayout);
  EXPECT_THROW(gen_layout(0, 42), InvalidLayout);
}

TEST(Layout, TemplatesAreDistinctAndValid) {
  std::set<std::string> templates;
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const SceneGraph w = gen_layout(layout, seed);
      EXPECT_NO_THROW(check_invariants(w, initial_agent(w, seed)));
    }
    const SceneGraph w = gen_layout(layout, 0);
    std::string sig;
    for (const auto& r : w.rooms) sig += r.name + ",";
    for (const auto& [ref, s] : w.objects) sig += ref.name + ",";
    templates.insert(sig);
  }
  EXPECT_EQ(templates.size(), static_cast<size_t>(kNumLayouts));
}

TEST(Step, GrabNearbyGroceries) {
  auto [w, a] = groceries_world();
  const ObjectRef g{"groceries", 1};
  auto walked = step(w, a, act("Walk", {g}));
  ASSERT_TRUE(walked.ok());
  auto grabbed = step(walked.value().world, walked.value().agent, act("Grab", {g}));
  ASSERT_TRUE(grabbed.ok());
  EXPECT_TRUE(grabbed.value().agent.holds(g));
  EXPECT_TRUE(std::holds_alternative<InHand>(grabbed.value().world.find(g)->placement));
}

TEST(Step, OpenFromAnotherRoomIsNotNear) {
  auto [w, a] = groceries_world();
  const ObjectRef f{"fridge", 1};
  const int fridge_room = w.spot_of(f)->room;
  ASSERT_GT(w.rooms.size(), 1u);
  a.room = fridge_room == 0 ? 1 : 0;
  a.near.reset();
  auto r = step(w, a, act("Open", {f}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, ExecErrorCode::kNotNear);
}

TEST(Step, PutInClosedFridge) {
  auto [w, a] = groceries_world();
  const ObjectRef g{"groceries", 1};
  const ObjectRef f{"fridge", 1};
  AgentState cur = a;
  SceneGraph sw = w;
  for (const auto& s : {act("Walk", {g}), act("Grab", {g}), act("Walk", {f})}) {
    auto r = step(sw, cur, s);
    ASSERT_TRUE(r.ok()) << dsl::format_step(s);
    sw = r.value().world;
    cur = r.value().agent;
  }
  auto r = step(sw, cur, act("PutIn", {g, f}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, ExecErrorCode::kContainerClosed);
}

TEST(Step, UnknownVerbAndObject) {
  auto [w, a] = groceries_world();
  EXPECT_EQ(step(w, a, act("Dance", {{"groceries", 1}})).error().code, ExecErrorCode::kUnknownVerb);
  EXPECT_EQ(step(w, a, act("Walk", {{"groceries", 99}})).error().code, ExecErrorCode::kUnknownObjectId);
  EXPECT_EQ(step(w, a, act("StandUp")).error().code, ExecErrorCode::kWrongPosture);
}

// Every verb applied to every object (and every pair for Put*) from states
// along expert plans: successes satisfy the verb's postcondition and change
// nothing else; failures name a precondition that is indeed violated.
TEST(Step, PostconditionsAndErrorsOverGeneratedLayouts) {
  long successes = 0, failures = 0;
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    for (uint64_t seed = 0; seed < 3; ++seed) {
      SceneGraph w0 = gen_layout(layout, seed);
      AgentState a0 = initial_agent(w0, seed);
      std::vector<std::pair<SceneGraph, AgentState>> states{{w0, a0}};
      for (const auto* task : tasks_for(w0)) {
        const auto plan = expert_plan(w0, a0, *task);
        SceneGraph w = w0;
        AgentState a = a0;
        for (const auto& s : plan.steps) {
          auto r = step(w, a, s);
          ASSERT_TRUE(r.ok());
          w = r.value().world;
          a = r.value().agent;
          states.emplace_back(w, a);
        }
        if (states.size() > 40) break;
      }
      for (const auto& [w, a] : states) {
        const SceneGraph w_copy = w;
        const AgentState a_copy = a;
        std::vector<ObjectRef> refs;
        for (const auto& [ref, s] : w.objects) refs.push_back(ref);
        for (const auto& v : dsl::registered_verbs()) {
          std::vector<std::vector<ObjectRef>> arglists;
          if (v.arity == 0) arglists.push_back({});
          if (v.arity == 1) {
            for (const auto& r : refs) arglists.push_back({r});
          }
          if (v.arity == 2) {
            for (const auto& h : a.holding) {
              for (const auto& r : refs) arglists.push_back({h, r});
            }
            if (!refs.empty()) arglists.push_back({refs[0], refs.back()});
          }
          for (const auto& args : arglists) {
            const ActionStep s{std::string(v.name), args};
            auto res = step(w, a, s);
            auto res2 = step(w, a, s);
            ASSERT_EQ(res.ok(), res2.ok());
            ASSERT_EQ(w, w_copy);
            ASSERT_EQ(a, a_copy);
            if (res.ok()) {
              ++successes;
              const SceneGraph& nw = res.value().world;
              const AgentState& na = res.value().agent;
              EXPECT_EQ(nw, res2.value().world);
              EXPECT_NO_THROW(check_invariants(nw, na));
              const ObjectRef* t = args.empty() ? nullptr : &args[0];
              switch (v.verb) {
                case dsl::Verb::kWalk:
                case dsl::Verb::kRun:
                  EXPECT_EQ(na.near, *t);
                  EXPECT_EQ(na.room, w.spot_of(*t)->room);
                  EXPECT_EQ(nw, w);
                  EXPECT_EQ(na.holding, a.holding);
                  break;
                case dsl::Verb::kGrab:
                  EXPECT_TRUE(na.holds(*t));
                  EXPECT_EQ(na.holding.size(), a.holding.size() + 1);
                  EXPECT_TRUE(w.class_of(*t).has(Affordance::kGrabbable));
                  EXPECT_TRUE(is_near(w, a, *t));
                  break;
                case dsl::Verb::kOpen:
                case dsl::Verb::kClose: {
                  const bool open = v.verb == dsl::Verb::kOpen;
                  EXPECT_EQ(nw.find(*t)->open, open);
                  EXPECT_EQ(w.find(*t)->open, !open);
                  SceneGraph back = nw;
                  back.objects.at(*t).open = !open;
                  EXPECT_EQ(back, w);
                  EXPECT_EQ(na, a);
                  break;
                }
                case dsl::Verb::kSwitchOn:
                case dsl::Verb::kSwitchOff: {
                  const bool on = v.verb == dsl::Verb::kSwitchOn;
                  EXPECT_EQ(nw.find(*t)->powered, on);
                  SceneGraph back = nw;
                  back.objects.at(*t).powered = !on;
                  EXPECT_EQ(back, w);
                  EXPECT_EQ(na, a);
                  break;
                }
                case dsl::Verb::kPutOn:
                  EXPECT_EQ(nw.find(args[0])->placement, Placement(OnTop{args[1]}));
                  EXPECT_FALSE(na.holds(args[0]));
                  break;
                case dsl::Verb::kPutIn:
                  EXPECT_EQ(nw.find(args[0])->placement, Placement(InsideOf{args[1]}));
                  EXPECT_FALSE(na.holds(args[0]));
                  break;
                case dsl::Verb::kSit:
                  EXPECT_EQ(na.posture, Posture::kSitting);
                  EXPECT_EQ(na.seat, *t);
                  EXPECT_EQ(nw, w);
                  break;
                case dsl::Verb::kStandUp:
                  EXPECT_EQ(na.posture, Posture::kStanding);
                  EXPECT_EQ(nw, w);
                  break;
              }
            } else {
              ++failures;
              const auto code = res.error().code;
              const ObjectRef* t = args.empty() ? nullptr : &args[0];
              switch (code) {
                case ExecErrorCode::kNotNear:
                  EXPECT_FALSE(is_near(w, a, args.size() == 2 ? args[1] : *t));
                  break;
                case ExecErrorCode::kNotGrabbable:
                  EXPECT_FALSE(w.class_of(*t).has(Affordance::kGrabbable));
                  break;
                case ExecErrorCode::kHandsFull:
                  EXPECT_EQ(a.holding.size(), kHands);
                  break;
                case ExecErrorCode::kAlreadyOpen:
                  EXPECT_TRUE(w.find(*t)->open);
                  break;
                case ExecErrorCode::kAlreadyClosed:
                  EXPECT_FALSE(w.find(*t)->open);
                  break;
                case ExecErrorCode::kAlreadyOn:
                  EXPECT_TRUE(w.find(*t)->powered);
                  break;
                case ExecErrorCode::kAlreadyOff:
                  EXPECT_FALSE(w.find(*t)->powered);
                  break;
                case ExecErrorCode::kNotHolding:
                  EXPECT_FALSE(a.holds(args[0]));
                  break;
                case ExecErrorCode::kContainerClosed:
                  if (v.verb == dsl::Verb::kGrab) {
                    EXPECT_TRUE(w.enclosed(*t));
                  } else {
                    EXPECT_TRUE(w.enclosed(args[1]) || !w.find(args[1])->open);
                  }
                  break;
                case ExecErrorCode::kWrongPosture:
                  EXPECT_EQ(a.posture == Posture::kSitting, v.verb != dsl::Verb::kStandUp);
                  break;
                case ExecErrorCode::kNotOpenable:
                  EXPECT_FALSE(w.class_of(*t).has(Affordance::kOpenable));
                  break;
                case ExecErrorCode::kNotSwitchable:
                  EXPECT_FALSE(w.class_of(*t).has(Affordance::kSwitchable));
                  break;
                case ExecErrorCode::kNotSurface:
                  EXPECT_FALSE(w.class_of(args[1]).has(Affordance::kSurface));
                  break;
                case ExecErrorCode::kNotContainer:
                  EXPECT_FALSE(w.class_of(args[1]).has(Affordance::kContainer));
                  break;
                case ExecErrorCode::kNotSittable:
                  EXPECT_FALSE(w.class_of(*t).has(Affordance::kSittable));
                  break;
                case ExecErrorCode::kTargetHeld:
                  EXPECT_FALSE(w.root_of(*t).has_value());
                  break;
                default:
                  ADD_FAILURE() << "unexpected error " << to_string(code);
              }
            }
          }
        }
      }
    }
  }
  EXPECT_GT(successes, 100);
  EXPECT_GT(failures, 100);
}

TEST(Goal, FreshLayoutAndAfterPlan) {
  auto [w, a] = groceries_world();
  EXPECT_FALSE(check_goal(w, a, kGroceries));
  const auto plan = expert_plan(w, a, kGroceries);
  for (const auto& s : plan.steps) {
    auto r = step(w, a, s);
    ASSERT_TRUE(r.ok());
    w = r.value().world;
    a = r.value().agent;
  }
  EXPECT_TRUE(check_goal(w, a, kGroceries));
  EXPECT_TRUE(check_goal(w, a, Task{"empty", {}, ""}));
}

TEST(Planner, GroceriesProgramShape) {
  auto [w, a] = groceries_world();
  const auto plan = expert_plan(w, a, kGroceries);
  EXPECT_EQ(dsl::format_program(plan),
            "[Walk] <groceries> (1)\n[Grab] <groceries> (1)\n[Walk] <fridge> (1)\n[Open] <fridge> (1)\n"
            "[PutIn] <groceries> (1) <fridge> (1)\n[Close] <fridge> (1)");
}

TEST(Planner, SatisfiedGoalAndAbsentClass) {
  auto [w, a] = groceries_world();
  EXPECT_TRUE(expert_plan(w, a, Task{"closed", {state("fridge", StateValue::kClosed)}, ""}).steps.empty());
  EXPECT_THROW(expert_plan(w, a, Task{"x", {holding("unicorn")}, ""}), Unachievable);
}

TEST(Planner, ValidOverManyTriples) {
  int checked = 0;
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    for (uint64_t seed = 0; seed < 25; ++seed) {
      const SceneGraph w0 = gen_layout(layout, seed);
      const AgentState a0 = initial_agent(w0, seed);
      for (const auto* task : tasks_for(w0)) {
        const auto plan = expert_plan(w0, a0, *task);
        EXPECT_EQ(plan, expert_plan(w0, a0, *task));
        SceneGraph w = w0;
        AgentState a = a0;
        for (const auto& s : plan.steps) {
          auto r = step(w, a, s);
          ASSERT_TRUE(r.ok()) << task->name << " layout " << layout << " seed " << seed << ": "
                              << dsl::format_step(s);
          w = r.value().world;
          a = r.value().agent;
        }
        EXPECT_TRUE(check_goal(w, a, *task)) << task->name;
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(Render, DeterministicAndViewsDiffer) {
  auto [w, a] = groceries_world();
  auto walked = step(w, a, act("Walk", {{"groceries", 1}}));
  ASSERT_TRUE(walked.ok());
  const auto& sw = walked.value().world;
  const auto& sa = walked.value().agent;
  std::set<std::string> seen;
  for (View v : {View::kAuto, View::kFirstPerson, View::kFrontPerson}) {
    const Raster r = render(sw, sa, v);
    EXPECT_EQ(r, render(sw, sa, v));
    EXPECT_EQ(decode_rle(v, encode_rle(r)), r);
    seen.insert(encode_rle(r));
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Render, HeldObjectMovesToHandPlane) {
  auto [w, a] = groceries_world();
  const ObjectRef g{"groceries", 1};
  const int glyph = w.class_of(g).glyph;
  auto walked = step(w, a, act("Walk", {g})).value();
  auto grabbed = step(walked.world, walked.agent, act("Grab", {g})).value();
  const Raster before = render(walked.world, walked.agent, View::kAuto);
  const Raster after = render(grabbed.world, grabbed.agent, View::kAuto);
  auto count = [&](const std::vector<uint8_t>& plane) { return std::count(plane.begin(), plane.end(), glyph); };
  EXPECT_EQ(count(before.hand0), 0);
  EXPECT_EQ(count(after.hand0), 1);
  EXPECT_EQ(count(after.tiles), 0);
}

TEST(Render, FirstPersonIgnoresOtherRooms) {
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    SceneGraph w = gen_layout(layout, 5);
    AgentState a = initial_agent(w, 5);
    const Raster fp = render(w, a, View::kFirstPerson);
    // Move a floor object of another room to a free cell of that room.
    for (auto& [ref, s] : w.objects) {
      auto* f = std::get_if<FloorSpot>(&s.placement);
      if (!f || f->room == a.room) continue;
      std::set<std::pair<int, int>> used;
      for (const auto& [r2, s2] : w.objects) {
        if (const auto* f2 = std::get_if<FloorSpot>(&s2.placement); f2 && f2->room == f->room) used.insert({f2->x, f2->y});
      }
      const Room& room = w.rooms.at(static_cast<size_t>(f->room));
      bool moved = false;
      for (int x = 0; x < room.width && !moved; ++x) {
        for (int y = 0; y < room.height && !moved; ++y) {
          if (!used.count({x, y})) {
            f->x = x;
            f->y = y;
            moved = true;
          }
        }
      }
      if (moved) break;
    }
    EXPECT_EQ(render(w, a, View::kFirstPerson), fp) << "layout " << layout;
  }
}

TEST(Reward, DefaultSpec) {
  const RewardSpec spec;
  EXPECT_DOUBLE_EQ(env_reward(true, false, spec), 1.0);
  EXPECT_DOUBLE_EQ(env_reward(false, false, spec), 0.0);
  EXPECT_DOUBLE_EQ(env_reward(true, true, spec), 6.0);
}

TEST(Serialize, RoundTrip) {
  for (int layout = 1; layout <= kNumLayouts; ++layout) {
    const SceneGraph w = gen_layout(layout, 9);
    const AgentState a = initial_agent(w, 9);
    EXPECT_EQ(parse_scene(serialize(w)), w);
    EXPECT_EQ(parse_agent(serialize(a)), a);
    EXPECT_EQ(serialize(parse_scene(serialize(w))), serialize(w));
  }
  EXPECT_THROW(parse_scene("{not json"), DataFormatError);
}

}  // namespace
}  // namespace visact::world
