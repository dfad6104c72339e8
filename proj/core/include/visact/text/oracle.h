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
#include <optional>
#include <string>
#include <string_view>

#include "visact/dsl/action.h"
#include "visact/world/render.h"
#include "visact/world/scene.h"

namespace visact::text {

struct OracleOptions {
  int salient = 1;  // nearby objects mentioned after the activity
};

// Ground-truth caption of a state:
//   "the agent <activity> [holding the X [and the Y]] [near the ADJ Z] in the <room>"
// The activity comes from the last executed action, or describes the posture
// when there is none. Salient objects are the closest visible floor-stack
// tops adjacent to the agent that the activity does not already name.
std::string caption_oracle(const world::SceneGraph& world, const world::AgentState& agent, world::View view,
                           const std::optional<dsl::ActionStep>& last_action, const OracleOptions& opts = {});

// State adjectives of an object, e.g. "closed unpowered" for an idle
// microwave; empty for stateless classes.
std::string state_words(const world::SceneGraph& world, const dsl::ObjectRef& ref);

// Rule-based expansion of "<verb> <noun>" into a sentence. The seed picks
// one of the synonymous templates of the verb.
std::string expand_caption(std::string_view two_word, uint64_t seed);

// Number of synonymous templates registered for a verb form; 0 if unknown.
size_t template_count(std::string_view verb);

}  // namespace visact::text
