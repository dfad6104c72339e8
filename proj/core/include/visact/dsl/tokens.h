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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visact/dsl/action.h"

namespace visact::dsl {

// Decoder token form of a step: `[Verb]`, `<name>` and `(id)` are one token
// each. Ids above `max_id` collapse to kUnknownIdToken.
inline constexpr std::string_view kUnknownIdToken = "(?)";
inline constexpr int kDefaultMaxId = 8;

std::vector<std::string> step_tokens(const ActionStep& step, int max_id = kDefaultMaxId);

// Inverse of step_tokens. Returns nullopt for anything that is not a
// registered verb followed by exactly its arity of (name, id) pairs.
std::optional<ActionStep> step_from_tokens(std::span<const std::string> tokens);

// Every token the decoder may need: all verbs, the given object names and
// ids 1..max_id plus kUnknownIdToken. Sorted, unique.
std::vector<std::string> program_token_inventory(std::span<const std::string> object_names,
                                                 int max_id = kDefaultMaxId);

}  // namespace visact::dsl
