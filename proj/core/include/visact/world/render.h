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
#include <vector>

#include "visact/world/scene.h"

namespace visact::world {

enum class View { kAuto, kFirstPerson, kFrontPerson };

std::string_view view_name(View v);  // "auto", "first_person", "front_person"
std::optional<View> parse_view(std::string_view name);

struct RenderConfig {
  int auto_size = 8;    // square room canvas, walls included
  int first_size = 5;   // square egocentric crop
  int front_width = 5;
  int front_depth = 3;

  std::pair<int, int> dims(View v) const;  // (width, height)

  bool operator==(const RenderConfig&) const = default;
};

// Symbolic observation. Each cell carries the tile code of the topmost
// visible thing, a state modifier, and the two hand slots, which are only
// set at the agent's cell.
struct Raster {
  View view = View::kAuto;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> tiles;
  std::vector<uint8_t> mods;
  std::vector<uint8_t> hand0;
  std::vector<uint8_t> hand1;

  bool operator==(const Raster&) const = default;
  size_t cells() const { return tiles.size(); }
};

// Modifier codes: 0 stateless, else 1 + open + 2 * powered. The agent cell
// uses kModSitting while seated and shows its facing otherwise.
inline constexpr int kModFacing = 1;  // standing agent: kModFacing + canvas direction (up, right, down, left)
inline constexpr int kModSitting = 5;
inline constexpr int kNumMods = 6;

struct Pose {
  int room = 0;
  int x = 0;
  int y = 0;
  int dir = 0;  // 0 north (-y), 1 east, 2 south, 3 west

  bool operator==(const Pose&) const = default;
};

// The agent stands beside the floor location of `near` facing it, or at the
// room's bottom-centre facing north when near nothing.
Pose agent_pose(const SceneGraph& world, const AgentState& agent);

// Auto: the whole current room from a fixed camera whose rotation is chosen
//   per room from the world seed.
// FirstPerson: square crop centred on the agent, rotated so it faces up.
// FrontPerson: band in front of the agent seen from a camera facing it.
Raster render(const SceneGraph& world, const AgentState& agent, View view, const RenderConfig& cfg = {});

// Run-length text form: "<w> <h> <count>*<cell> ...", where a cell packs
// tile | mod << 8 | hand0 << 16 | hand1 << 24.
std::string encode_rle(const Raster& r);
Raster decode_rle(View view, std::string_view text);

}  // namespace visact::world
