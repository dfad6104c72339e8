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

#include "visact/world/object_class.h"

#include <algorithm>
#include <set>

#include "visact/common/error.h"

namespace visact::world {
namespace {

constexpr uint32_t G = static_cast<uint32_t>(Affordance::kGrabbable);
constexpr uint32_t O = static_cast<uint32_t>(Affordance::kOpenable);
constexpr uint32_t S = static_cast<uint32_t>(Affordance::kSwitchable);
constexpr uint32_t C = static_cast<uint32_t>(Affordance::kContainer);
constexpr uint32_t F = static_cast<uint32_t>(Affordance::kSurface);
constexpr uint32_t T = static_cast<uint32_t>(Affordance::kSittable);

std::vector<ObjectClass> builtin_classes() {
  // Glyph codes are assigned in list order and must stay stable: they are
  // baked into stored rasters.
  const std::vector<std::pair<std::string, uint32_t>> spec = {
      {"apple", G},
      {"bathtub", C | T},
      {"bed", F | T},
      {"bench", T},
      {"book", G},
      {"bookshelf", F},
      {"cabinet", O | C},
      {"chair", T},
      {"clothes", G},
      {"coffeemaker", S},
      {"coffeetable", F},
      {"computer", S},
      {"desk", F},
      {"dishwasher", O | C | S},
      {"fridge", O | C},
      {"groceries", G},
      {"lamp", S},
      {"microwave", O | C | S},
      {"mug", G},
      {"nightstand", F},
      {"pillow", G},
      {"plate", G | F},
      {"radio", G | S},
      {"remote", G},
      {"sink", C},
      {"sofa", F | T},
      {"stove", S | F},
      {"table", F},
      {"toilet", T},
      {"toothbrush", G},
      {"towel", G},
      {"treadmill", S},
      {"tv", S},
      {"wardrobe", O | C},
      {"washingmachine", O | C | S},
  };
  std::vector<ObjectClass> out;
  int glyph = kFirstGlyph;
  for (const auto& [name, aff] : spec) out.push_back(ObjectClass{name, aff, glyph++});
  return out;
}

}  // namespace

ClassRegistry::ClassRegistry(std::vector<ObjectClass> classes) : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::set<int> glyphs;
  for (size_t i = 0; i < classes_.size(); ++i) {
    if (i > 0 && classes_[i].name == classes_[i - 1].name) {
      throw InvalidArgument("duplicate object class: " + classes_[i].name);
    }
    if (classes_[i].glyph < kFirstGlyph || !glyphs.insert(classes_[i].glyph).second) {
      throw InvalidArgument("invalid or duplicate glyph for class " + classes_[i].name);
    }
    max_glyph_ = std::max(max_glyph_, classes_[i].glyph);
  }
}

const ClassRegistry& ClassRegistry::builtin() {
  static const ClassRegistry registry(builtin_classes());
  return registry;
}

const ObjectClass* ClassRegistry::find(std::string_view name) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), name,
                             [](const ObjectClass& c, std::string_view n) { return c.name < n; });
  return it != classes_.end() && it->name == name ? &*it : nullptr;
}

const ObjectClass& ClassRegistry::at(std::string_view name) const {
  const auto* c = find(name);
  if (c == nullptr) throw InvalidArgument("unknown object class: " + std::string(name));
  return *c;
}

std::vector<std::string> ClassRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& c : classes_) out.push_back(c.name);
  return out;
}

}  // namespace visact::world
