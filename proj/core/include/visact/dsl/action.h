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

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visact::dsl {

// An object named in a script: class name plus per-class instance number,
// e.g. `<fridge> (1)`.
struct ObjectRef {
  std::string name;
  int id = 0;

  auto operator<=>(const ObjectRef&) const = default;
};

struct ActionStep {
  std::string verb;
  std::vector<ObjectRef> args;

  bool operator==(const ActionStep&) const = default;
};

struct Program {
  std::vector<ActionStep> steps;

  bool operator==(const Program&) const = default;
};

enum class Verb { kWalk, kRun, kGrab, kOpen, kClose, kSwitchOn, kSwitchOff, kPutOn, kPutIn, kSit, kStandUp };

struct VerbInfo {
  Verb verb;
  std::string_view name;  // canonical capitalisation
  int arity;
};

std::span<const VerbInfo> registered_verbs();

// Case-insensitive lookup.
std::optional<VerbInfo> lookup_verb(std::string_view name);

// Canonical spelling of a registered verb; unregistered verbs are returned
// unchanged.
std::string canonical_verb(std::string_view name);

}  // namespace visact::dsl
