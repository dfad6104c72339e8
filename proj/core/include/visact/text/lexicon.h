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
#include <string_view>
#include <vector>

namespace visact::text {

// Closed word lists of the caption language, shared by the caption oracle,
// the template expander and the tuple extractor used for SPICE-lite.

struct RelationPhrase {
  std::vector<std::string_view> words;
  std::string_view relation;
  bool transitive = true;  // takes a noun phrase
};

std::span<const RelationPhrase> relation_phrases();
std::span<const std::string_view> state_adjectives();
std::span<const std::string_view> determiners();

// Object class names, room names and "agent".
const std::vector<std::string>& nouns();
bool is_noun(std::string_view w);
bool is_adjective(std::string_view w);
bool is_determiner(std::string_view w);

}  // namespace visact::text
