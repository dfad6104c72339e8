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
#include <string>
#include <vector>

#include "visact/world/scene.h"

namespace visact::world {

enum class PredicateKind { kInside, kOn, kState, kHolding, kSittingOn };
enum class StateValue { kOpen, kClosed, kPoweredOn, kPoweredOff };

// Goal atoms range over object classes: Inside(a, b) holds when some `a`
// instance is inside some `b` instance.
struct Predicate {
  PredicateKind kind = PredicateKind::kHolding;
  std::string a;
  std::string b;  // Inside/On destination class
  StateValue state = StateValue::kOpen;

  bool operator==(const Predicate&) const = default;
};

struct Task {
  std::string name;
  std::vector<Predicate> goal;  // conjunction
  std::string nl_description;

  bool operator==(const Task&) const = default;
};

Predicate inside(std::string a, std::string b);
Predicate on(std::string a, std::string b);
Predicate state(std::string a, StateValue v);
Predicate holding(std::string a);
Predicate sitting_on(std::string a);

std::span<const Task> builtin_tasks();
const Task* find_task(std::string_view name);

// Classes referenced by a task's goal.
std::vector<std::string> task_classes(const Task& task);
bool task_valid_for(const Task& task, const SceneGraph& world);
std::vector<const Task*> tasks_for(const SceneGraph& world);

std::string to_string(const Predicate& p);

}  // namespace visact::world
