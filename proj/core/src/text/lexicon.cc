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

#include "visact/text/lexicon.h"

#include <algorithm>
#include <array>

#include "visact/world/layouts.h"
#include "visact/world/object_class.h"

namespace visact::text {

std::span<const RelationPhrase> relation_phrases() {
  // Longer phrases first so that matching is greedy.
  static const std::vector<RelationPhrase> kPhrases = {
      {{"is", "sitting", "on"}, "sit_on"},
      {{"switches", "on"}, "switch_on"},
      {{"switches", "off"}, "switch_off"},
      {{"turns", "on"}, "switch_on"},
      {{"turns", "off"}, "switch_off"},
      {{"walks", "to"}, "walk_to"},
      {{"goes", "to"}, "walk_to"},
      {{"heads", "to"}, "walk_to"},
      {{"runs", "to"}, "run_to"},
      {{"runs", "on"}, "run_on"},
      {{"jogs", "on"}, "run_on"},
      {{"sits", "on"}, "sit_on"},
      {{"lies", "on"}, "lie_on"},
      {{"picks", "up"}, "grab"},
      {{"puts", "down"}, "put"},
      {{"stands", "up"}, "stand_up", false},
      {{"stands", "near"}, "near"},
      {{"grabs"}, "grab"},
      {{"opens"}, "open"},
      {{"closes"}, "close"},
      {{"shuts"}, "close"},
      {{"puts"}, "put"},
      {{"watches"}, "watch"},
      {{"reads"}, "read"},
      {{"uses"}, "use"},
      {{"holding"}, "hold"},
      {{"near"}, "near"},
      {{"stands"}, "stand", false},
  };
  return kPhrases;
}

std::span<const std::string_view> state_adjectives() {
  static constexpr std::array<std::string_view, 4> kAdj = {"open", "closed", "powered", "unpowered"};
  return kAdj;
}

std::span<const std::string_view> determiners() {
  static constexpr std::array<std::string_view, 3> kDet = {"the", "a", "an"};
  return kDet;
}

const std::vector<std::string>& nouns() {
  static const std::vector<std::string> kNouns = [] {
    std::vector<std::string> n = world::ClassRegistry::builtin().names();
    for (auto& r : world::room_names()) n.push_back(r);
    n.emplace_back("agent");
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    return n;
  }();
  return kNouns;
}

bool is_noun(std::string_view w) {
  const auto& n = nouns();
  return std::binary_search(n.begin(), n.end(), w);
}

bool is_adjective(std::string_view w) {
  auto a = state_adjectives();
  return std::find(a.begin(), a.end(), w) != a.end();
}

bool is_determiner(std::string_view w) {
  auto d = determiners();
  return std::find(d.begin(), d.end(), w) != d.end();
}

}  // namespace visact::text
