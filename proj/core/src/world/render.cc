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

#include "visact/world/render.h"

#include <array>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "visact/common/error.h"
#include "visact/common/rng.h"

namespace visact::world {
namespace {

constexpr std::array<std::pair<int, int>, 4> kForward = {{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

struct Cell {
  uint8_t tile = kTileWall;
  uint8_t mod = 0;
  uint8_t hand0 = 0;
  uint8_t hand1 = 0;
};

int state_mod(const SceneGraph& world, const ObjectRef& ref) {
  const auto& cls = world.class_of(ref);
  if (!cls.has(Affordance::kOpenable) && !cls.has(Affordance::kSwitchable)) return 0;
  const ObjectState& s = *world.find(ref);
  return 1 + (s.open ? 1 : 0) + (s.powered ? 2 : 0);
}

// Room-local view of what occupies each interior cell.
class RoomPicture {
 public:
  RoomPicture(const SceneGraph& world, const AgentState& agent, const Pose& pose)
      : world_(world), agent_(agent), pose_(pose), room_(world.rooms.at(pose.room)) {
    for (const auto& [ref, s] : world.objects) {
      if (const auto* f = std::get_if<FloorSpot>(&s.placement); f && f->room == pose.room) {
        floor_[{f->x, f->y}] = ref;
      }
    }
  }

  Cell at(int x, int y) const {
    Cell c;
    if (x < 0 || y < 0 || x >= room_.width || y >= room_.height) return c;
    c.tile = kTileEmpty;
    if (x == pose_.x && y == pose_.y) {
      c.tile = kTileAgent;
      c.mod = agent_.posture == Posture::kSitting ? kModSitting : 0;
      if (agent_.holding.size() > 0) c.hand0 = static_cast<uint8_t>(world_.class_of(agent_.holding[0]).glyph);
      if (agent_.holding.size() > 1) c.hand1 = static_cast<uint8_t>(world_.class_of(agent_.holding[1]).glyph);
      return c;
    }
    auto it = floor_.find({x, y});
    if (it == floor_.end()) return c;
    const ObjectRef top = topmost(it->second);
    c.tile = static_cast<uint8_t>(world_.class_of(top).glyph);
    c.mod = static_cast<uint8_t>(state_mod(world_, top));
    return c;
  }

 private:
  // Climbs On links; contents of containers stay hidden.
  ObjectRef topmost(ObjectRef cur) const {
    for (size_t hops = 0; hops <= world_.objects.size(); ++hops) {
      std::optional<ObjectRef> above;
      for (const auto& child : world_.children_of(cur)) {
        if (std::holds_alternative<OnTop>(world_.find(child)->placement)) above = child;  // last in key order
      }
      if (!above) break;
      cur = *above;
    }
    return cur;
  }

  const SceneGraph& world_;
  const AgentState& agent_;
  Pose pose_;
  const Room& room_;
  std::map<std::pair<int, int>, ObjectRef> floor_;
};

Raster blank(View view, int w, int h) {
  Raster r;
  r.view = view;
  r.width = w;
  r.height = h;
  const size_t n = static_cast<size_t>(w) * static_cast<size_t>(h);
  r.tiles.assign(n, kTileWall);
  r.mods.assign(n, 0);
  r.hand0.assign(n, 0);
  r.hand1.assign(n, 0);
  return r;
}

void put(Raster& r, int col, int row, const Cell& c) {
  const size_t i = static_cast<size_t>(row) * static_cast<size_t>(r.width) + static_cast<size_t>(col);
  r.tiles[i] = c.tile;
  r.mods[i] = c.mod;
  r.hand0[i] = c.hand0;
  r.hand1[i] = c.hand1;
}

}  // namespace

std::string_view view_name(View v) {
  switch (v) {
    case View::kAuto: return "auto";
    case View::kFirstPerson: return "first_person";
    case View::kFrontPerson: return "front_person";
  }
  return "?";
}

std::optional<View> parse_view(std::string_view name) {
  for (View v : {View::kAuto, View::kFirstPerson, View::kFrontPerson}) {
    if (view_name(v) == name) return v;
  }
  return std::nullopt;
}

std::pair<int, int> RenderConfig::dims(View v) const {
  switch (v) {
    case View::kAuto: return {auto_size, auto_size};
    case View::kFirstPerson: return {first_size, first_size};
    case View::kFrontPerson: return {front_width, front_depth};
  }
  return {0, 0};
}

Pose agent_pose(const SceneGraph& world, const AgentState& agent) {
  const Room& room = world.rooms.at(agent.room);
  Pose pose{agent.room, room.width / 2, room.height - 1, 0};
  if (!agent.near) return pose;
  auto spot = world.spot_of(*agent.near);
  if (!spot || spot->room != agent.room) return pose;

  std::map<std::pair<int, int>, bool> occupied;
  for (const auto& [ref, s] : world.objects) {
    if (const auto* f = std::get_if<FloorSpot>(&s.placement); f && f->room == agent.room) occupied[{f->x, f->y}] = true;
  }
  // Candidate standing cells south, west, east, north of the object; the
  // agent faces back towards it.
  constexpr std::array<std::array<int, 3>, 4> kSides = {{{0, 1, 0}, {-1, 0, 1}, {1, 0, 3}, {0, -1, 2}}};
  std::optional<Pose> fallback;
  for (const auto& [dx, dy, facing] : kSides) {
    const int x = spot->x + dx;
    const int y = spot->y + dy;
    if (x < 0 || y < 0 || x >= room.width || y >= room.height) continue;
    Pose p{agent.room, x, y, facing};
    if (!occupied.count({x, y})) return p;
    if (!fallback) fallback = p;
  }
  return fallback.value_or(pose);
}

Raster render(const SceneGraph& world, const AgentState& agent, View view, const RenderConfig& cfg) {
  const Pose pose = agent_pose(world, agent);
  const RoomPicture picture(world, agent, pose);
  const auto [w, h] = cfg.dims(view);
  Raster r = blank(view, w, h);

  // Canvas positions of the agent and of the cell it faces, to mark the
  // facing direction as seen on the canvas.
  const auto [ffx, ffy] = kForward[pose.dir];
  std::optional<std::pair<int, int>> at_agent, at_front;
  auto track = [&](int col, int row, int x, int y) {
    if (x == pose.x && y == pose.y) at_agent = {col, row};
    if (x == pose.x + ffx && y == pose.y + ffy) at_front = {col, row};
  };

  switch (view) {
    case View::kAuto: {
      // Canvas cell (cx, cy) shows room cell (cx - 1, cy - 1) under one of
      // four fixed camera rotations.
      const int rot = static_cast<int>(mix_seed(world.seed, 0xca3e7a + static_cast<uint64_t>(pose.room)) % 4);
      const int n = w;
      for (int cy = 0; cy < n; ++cy) {
        for (int cx = 0; cx < n; ++cx) {
          int sx = cx;
          int sy = cy;
          for (int k = 0; k < rot; ++k) {
            const int t = sx;
            sx = sy;
            sy = n - 1 - t;
          }
          put(r, cx, cy, picture.at(sx - 1, sy - 1));
          track(cx, cy, sx - 1, sy - 1);
        }
      }
      break;
    }
    case View::kFirstPerson: {
      const auto [fx, fy] = kForward[pose.dir];
      const int rx = -fy;
      const int ry = fx;
      const int half = w / 2;
      for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
          const int f = half - row;
          const int l = col - half;
          put(r, col, row, picture.at(pose.x + f * fx + l * rx, pose.y + f * fy + l * ry));
          track(col, row, pose.x + f * fx + l * rx, pose.y + f * fy + l * ry);
        }
      }
      break;
    }
    case View::kFrontPerson: {
      const auto [fx, fy] = kForward[pose.dir];
      const int rx = -fy;
      const int ry = fx;
      const int half = w / 2;
      for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
          const int f = row;
          const int l = half - col;
          put(r, col, row, picture.at(pose.x + f * fx + l * rx, pose.y + f * fy + l * ry));
          track(col, row, pose.x + f * fx + l * rx, pose.y + f * fy + l * ry);
        }
      }
      break;
    }
  }
  if (at_agent && agent.posture != Posture::kSitting) {
    int dir = 0;
    if (at_front) {
      const std::pair<int, int> d{at_front->first - at_agent->first, at_front->second - at_agent->second};
      for (int k = 0; k < 4; ++k) {
        if (kForward[static_cast<size_t>(k)] == d) dir = k;
      }
    }
    r.mods[static_cast<size_t>(at_agent->second) * static_cast<size_t>(w) + static_cast<size_t>(at_agent->first)] =
        static_cast<uint8_t>(kModFacing + dir);
  }
  return r;
}

std::string encode_rle(const Raster& r) {
  std::ostringstream os;
  os << r.width << ' ' << r.height;
  const size_t n = r.cells();
  size_t i = 0;
  while (i < n) {
    const uint32_t v = r.tiles[i] | (uint32_t{r.mods[i]} << 8) | (uint32_t{r.hand0[i]} << 16) |
                       (uint32_t{r.hand1[i]} << 24);
    size_t j = i + 1;
    while (j < n && (r.tiles[j] | (uint32_t{r.mods[j]} << 8) | (uint32_t{r.hand0[j]} << 16) |
                     (uint32_t{r.hand1[j]} << 24)) == v) {
      ++j;
    }
    os << ' ' << (j - i) << '*' << v;
    i = j;
  }
  return os.str();
}

Raster decode_rle(View view, std::string_view text) {
  std::istringstream is{std::string(text)};
  int w = 0;
  int h = 0;
  if (!(is >> w >> h) || w <= 0 || h <= 0 || w > 256 || h > 256) throw DataFormatError("raster: bad dimensions");
  Raster r = blank(view, w, h);
  size_t i = 0;
  std::string run;
  while (is >> run) {
    const auto star = run.find('*');
    if (star == std::string::npos) throw DataFormatError("raster: malformed run '" + run + "'");
    size_t count = 0;
    uint32_t v = 0;
    auto a = std::from_chars(run.data(), run.data() + star, count);
    auto b = std::from_chars(run.data() + star + 1, run.data() + run.size(), v);
    if (a.ec != std::errc() || b.ec != std::errc() || count == 0 || i + count > r.cells()) {
      throw DataFormatError("raster: malformed run '" + run + "'");
    }
    for (size_t k = 0; k < count; ++k, ++i) {
      r.tiles[i] = static_cast<uint8_t>(v & 0xff);
      r.mods[i] = static_cast<uint8_t>((v >> 8) & 0xff);
      r.hand0[i] = static_cast<uint8_t>((v >> 16) & 0xff);
      r.hand1[i] = static_cast<uint8_t>((v >> 24) & 0xff);
    }
  }
  if (i != r.cells()) throw DataFormatError("raster: run lengths do not cover the grid");
  return r;
}

}  // namespace visact::world
