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

#include "visact/world/task.h"

#include <algorithm>

namespace visact::world {

Predicate inside(std::string a, std::string b) { return {PredicateKind::kInside, std::move(a), std::move(b), StateValue::kOpen}; }
Predicate on(std::string a, std::string b) { return {PredicateKind::kOn, std::move(a), std::move(b), StateValue::kOpen}; }
Predicate state(std::string a, StateValue v) { return {PredicateKind::kState, std::move(a), {}, v}; }
Predicate holding(std::string a) { return {PredicateKind::kHolding, std::move(a), {}, StateValue::kOpen}; }
Predicate sitting_on(std::string a) { return {PredicateKind::kSittingOn, std::move(a), {}, StateValue::kOpen}; }

namespace {

using SV = StateValue;

std::vector<Task> make_tasks() {
  return {
      {"put_groceries_in_fridge", {inside("groceries", "fridge"), state("fridge", SV::kClosed)},
       "put groceries in the fridge"},
      {"turn_on_tv", {state("tv", SV::kPoweredOn)}, "turn on the tv"},
      {"watch_tv", {state("tv", SV::kPoweredOn), sitting_on("sofa")}, "watch tv"},
      {"sit_on_chair", {sitting_on("chair")}, "sit on a chair"},
      {"read_book", {holding("book"), sitting_on("sofa")}, "read a book"},
      {"put_mug_on_table", {on("mug", "table")}, "put the mug on the table"},
      {"heat_mug",
       {inside("mug", "microwave"), state("microwave", SV::kClosed), state("microwave", SV::kPoweredOn)},
       "heat the mug in the microwave"},
      {"wash_clothes",
       {inside("clothes", "washingmachine"), state("washingmachine", SV::kClosed),
        state("washingmachine", SV::kPoweredOn)},
       "wash the clothes"},
      {"go_to_sleep", {state("lamp", SV::kPoweredOff), sitting_on("bed")}, "go to sleep"},
      {"turn_on_light", {state("lamp", SV::kPoweredOn)}, "turn on the light"},
      {"use_computer", {state("computer", SV::kPoweredOn), sitting_on("chair")}, "use the computer"},
      {"make_coffee", {holding("mug"), state("coffeemaker", SV::kPoweredOn)}, "make coffee"},
      {"wash_dishes",
       {inside("plate", "dishwasher"), state("dishwasher", SV::kClosed), state("dishwasher", SV::kPoweredOn)},
       "wash the dishes"},
      {"shelve_book", {on("book", "bookshelf")}, "put the book on the bookshelf"},
      {"grab_towel", {holding("towel")}, "grab a towel"},
      {"brush_teeth", {holding("toothbrush")}, "brush teeth"},
      {"listen_to_music", {state("radio", SV::kPoweredOn)}, "listen to music"},
      {"work_out", {state("treadmill", SV::kPoweredOn)}, "work out"},
      {"put_apple_in_fridge", {inside("apple", "fridge"), state("fridge", SV::kClosed)},
       "put the apple in the fridge"},
      {"make_bed", {on("pillow", "bed")}, "put the pillow on the bed"},
      {"store_clothes", {inside("clothes", "wardrobe"), state("wardrobe", SV::kClosed)},
       "put clothes in the wardrobe"},
      {"turn_on_stove", {state("stove", SV::kPoweredOn)}, "turn on the stove"},
      {"open_fridge", {state("fridge", SV::kOpen)}, "open the fridge"},
      {"take_bath", {sitting_on("bathtub")}, "take a bath"},
      {"use_toilet", {sitting_on("toilet")}, "use the toilet"},
      {"relax_on_sofa", {holding("remote"), sitting_on("sofa")}, "relax on the sofa"},
  };
}

}  // namespace

std::span<const Task> builtin_tasks() {
  static const std::vector<Task> tasks = make_tasks();
  return tasks;
}

const Task* find_task(std::string_view name) {
  for (const auto& t : builtin_tasks()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::vector<std::string> task_classes(const Task& task) {
  std::vector<std::string> out;
  for (const auto& p : task.goal) {
    out.push_back(p.a);
    if (p.kind == PredicateKind::kInside || p.kind == PredicateKind::kOn) out.push_back(p.b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool task_valid_for(const Task& task, const SceneGraph& world) {
  for (const auto& c : task_classes(task)) {
    if (!world.has_class(c)) return false;
  }
  return true;
}

std::vector<const Task*> tasks_for(const SceneGraph& world) {
  std::vector<const Task*> out;
  for (const auto& t : builtin_tasks()) {
    if (task_valid_for(t, world)) out.push_back(&t);
  }
  return out;
}

std::string to_string(const Predicate& p) {
  switch (p.kind) {
    case PredicateKind::kInside:
      return "Inside(" + p.a + "," + p.b + ")";
    case PredicateKind::kOn:
      return "On(" + p.a + "," + p.b + ")";
    case PredicateKind::kHolding:
      return "Holding(" + p.a + ")";
    case PredicateKind::kSittingOn:
      return "SittingOn(" + p.a + ")";
    case PredicateKind::kState: {
      static constexpr const char* kNames[] = {"open", "closed", "powered_on", "powered_off"};
      return "State(" + p.a + "," + kNames[static_cast<int>(p.state)] + ")";
    }
  }
  return "?";
}

}  // namespace visact::world
