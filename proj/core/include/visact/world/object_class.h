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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace visact::world {

enum class Affordance : uint32_t {
  kGrabbable = 1u << 0,
  kOpenable = 1u << 1,
  kSwitchable = 1u << 2,
  kContainer = 1u << 3,
  kSurface = 1u << 4,
  kSittable = 1u << 5,
};

// Reserved raster tile codes; class glyphs start at kFirstGlyph.
inline constexpr int kTileEmpty = 0;
inline constexpr int kTileWall = 1;
inline constexpr int kTileAgent = 2;
inline constexpr int kFirstGlyph = 3;

struct ObjectClass {
  std::string name;
  uint32_t affordances = 0;
  int glyph = 0;

  bool has(Affordance a) const { return (affordances & static_cast<uint32_t>(a)) != 0; }
};

class ClassRegistry {
 public:
  explicit ClassRegistry(std::vector<ObjectClass> classes);

  // The household object set shared by all layouts.
  static const ClassRegistry& builtin();

  const ObjectClass* find(std::string_view name) const;
  const ObjectClass& at(std::string_view name) const;
  std::span<const ObjectClass> all() const { return classes_; }
  std::vector<std::string> names() const;
  int max_glyph() const { return max_glyph_; }

 private:
  std::vector<ObjectClass> classes_;  // sorted by name
  int max_glyph_ = kFirstGlyph;
};

}  // namespace visact::world
