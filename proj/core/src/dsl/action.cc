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

#include "visact/dsl/action.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace visact::dsl {
namespace {

constexpr std::array<VerbInfo, 11> kVerbs = {{
    {Verb::kWalk, "Walk", 1},
    {Verb::kRun, "Run", 1},
    {Verb::kGrab, "Grab", 1},
    {Verb::kOpen, "Open", 1},
    {Verb::kClose, "Close", 1},
    {Verb::kSwitchOn, "SwitchOn", 1},
    {Verb::kSwitchOff, "SwitchOff", 1},
    {Verb::kPutOn, "PutOn", 2},
    {Verb::kPutIn, "PutIn", 2},
    {Verb::kSit, "Sit", 1},
    {Verb::kStandUp, "StandUp", 0},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::span<const VerbInfo> registered_verbs() { return kVerbs; }

std::optional<VerbInfo> lookup_verb(std::string_view name) {
  for (const auto& v : kVerbs) {
    if (iequals(v.name, name)) return v;
  }
  return std::nullopt;
}

std::string canonical_verb(std::string_view name) {
  if (auto v = lookup_verb(name)) return std::string(v->name);
  return std::string(name);
}

}  // namespace visact::dsl
