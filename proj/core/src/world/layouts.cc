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

#include "visact/world/layouts.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "visact/common/error.h"
#include "visact/common/rng.h"

namespace visact::world {
namespace {

struct RoomTemplate {
  const char* name;
  int width;
  int height;
};

// `options` lists where the object may start: "floor", "on:<class>[:<id>]"
// or "in:<class>[:<id>]". One is picked per seed.
struct ItemTemplate {
  const char* cls;
  int room;
  std::vector<const char*> options = {"floor"};
};

struct LayoutTemplate {
  std::vector<RoomTemplate> rooms;
  std::vector<ItemTemplate> items;
};

const std::vector<LayoutTemplate>& templates() {
  static const std::vector<LayoutTemplate> kTemplates = {
      // 1: kitchen and living room
      {{{"kitchen", 5, 4}, {"livingroom", 5, 5}},
       {{"fridge", 0},
        {"microwave", 0},
        {"stove", 0},
        {"sink", 0},
        {"table", 0},
        {"chair", 0},
        {"chair", 0},
        {"cabinet", 0},
        {"groceries", 0, {"floor", "on:table"}},
        {"mug", 0, {"on:table", "in:cabinet"}},
        {"plate", 0, {"in:cabinet", "on:table"}},
        {"apple", 0, {"on:table", "in:fridge"}},
        {"sofa", 1},
        {"tv", 1},
        {"coffeetable", 1},
        {"lamp", 1},
        {"bookshelf", 1},
        {"book", 1, {"on:coffeetable", "on:bookshelf", "on:sofa"}},
        {"remote", 1, {"on:sofa", "on:coffeetable"}}}},
      // 2: kitchen, bedroom, bathroom
      {{{"kitchen", 5, 4}, {"bedroom", 5, 4}, {"bathroom", 4, 3}},
       {{"fridge", 0},
        {"stove", 0},
        {"table", 0},
        {"chair", 0},
        {"dishwasher", 0},
        {"sink", 0},
        {"groceries", 0, {"floor", "on:table"}},
        {"plate", 0, {"on:table", "in:sink"}},
        {"apple", 0, {"on:table", "in:fridge"}},
        {"bed", 1},
        {"nightstand", 1},
        {"lamp", 1},
        {"wardrobe", 1},
        {"chair", 1},
        {"clothes", 1, {"on:bed", "floor"}},
        {"pillow", 1, {"floor", "on:nightstand"}},
        {"book", 1, {"on:nightstand", "on:bed"}},
        {"toilet", 2},
        {"sink", 2},
        {"bathtub", 2},
        {"towel", 2, {"floor", "in:bathtub"}},
        {"toothbrush", 2, {"in:sink:2"}}}},
      // 3: living room, office, kitchen
      {{{"livingroom", 5, 5}, {"office", 4, 4}, {"kitchen", 5, 4}},
       {{"sofa", 0},
        {"tv", 0},
        {"coffeetable", 0},
        {"lamp", 0},
        {"radio", 0, {"on:coffeetable", "floor"}},
        {"remote", 0, {"on:sofa", "on:coffeetable"}},
        {"desk", 1},
        {"chair", 1},
        {"lamp", 1},
        {"bookshelf", 1},
        {"computer", 1, {"on:desk"}},
        {"book", 1, {"on:desk", "on:bookshelf"}},
        {"fridge", 2},
        {"microwave", 2},
        {"coffeemaker", 2},
        {"table", 2},
        {"groceries", 2, {"on:table", "floor"}},
        {"mug", 2, {"on:table", "in:microwave"}}}},
      // 4: gym, bathroom, living room
      {{{"gym", 5, 4}, {"bathroom", 4, 4}, {"livingroom", 5, 4}},
       {{"treadmill", 0},
        {"treadmill", 0},
        {"bench", 0},
        {"radio", 0},
        {"towel", 0},
        {"toilet", 1},
        {"sink", 1},
        {"bathtub", 1},
        {"towel", 1, {"floor", "in:bathtub"}},
        {"toothbrush", 1, {"in:sink"}},
        {"sofa", 2},
        {"tv", 2},
        {"lamp", 2},
        {"coffeetable", 2},
        {"remote", 2, {"on:sofa", "on:coffeetable"}},
        {"book", 2, {"on:coffeetable", "on:sofa"}}}},
      // 5: bedroom, kitchen, laundry room
      {{{"bedroom", 5, 5}, {"kitchen", 5, 4}, {"laundryroom", 4, 3}},
       {{"bed", 0},
        {"lamp", 0},
        {"lamp", 0},
        {"nightstand", 0},
        {"desk", 0},
        {"chair", 0},
        {"book", 0, {"on:nightstand", "on:desk"}},
        {"pillow", 0, {"on:bed", "floor"}},
        {"computer", 0, {"on:desk"}},
        {"fridge", 1},
        {"stove", 1},
        {"table", 1},
        {"chair", 1},
        {"dishwasher", 1},
        {"sink", 1},
        {"groceries", 1, {"floor", "on:table"}},
        {"apple", 1, {"on:table", "in:fridge"}},
        {"plate", 1, {"on:table", "in:sink"}},
        {"mug", 1, {"on:table", "in:dishwasher"}},
        {"washingmachine", 2},
        {"cabinet", 2},
        {"clothes", 2, {"floor", "in:cabinet"}}}},
      // 6: living room and kitchen, sparse
      {{{"livingroom", 5, 4}, {"kitchen", 4, 4}},
       {{"sofa", 0},
        {"tv", 0},
        {"coffeetable", 0},
        {"lamp", 0},
        {"remote", 0, {"on:sofa", "on:coffeetable"}},
        {"book", 0, {"on:coffeetable"}},
        {"fridge", 1},
        {"microwave", 1},
        {"table", 1},
        {"mug", 1, {"on:table"}},
        {"groceries", 1, {"on:table", "floor"}}}},
      // 7: full house
      {{{"kitchen", 6, 5}, {"livingroom", 6, 5}, {"bedroom", 5, 5}, {"bathroom", 4, 4}},
       {{"fridge", 0},
        {"microwave", 0},
        {"stove", 0},
        {"sink", 0},
        {"table", 0},
        {"chair", 0},
        {"chair", 0},
        {"dishwasher", 0},
        {"coffeemaker", 0},
        {"cabinet", 0},
        {"groceries", 0, {"floor", "on:table"}},
        {"mug", 0, {"on:table", "in:cabinet"}},
        {"plate", 0, {"on:table", "in:dishwasher"}},
        {"apple", 0, {"in:fridge", "on:table"}},
        {"sofa", 1},
        {"tv", 1},
        {"coffeetable", 1},
        {"lamp", 1},
        {"bookshelf", 1},
        {"radio", 1, {"on:bookshelf", "floor"}},
        {"book", 1, {"on:bookshelf", "on:coffeetable"}},
        {"remote", 1, {"on:coffeetable", "on:sofa"}},
        {"bed", 2},
        {"nightstand", 2},
        {"lamp", 2},
        {"wardrobe", 2},
        {"clothes", 2, {"in:wardrobe", "on:bed"}},
        {"pillow", 2, {"on:bed", "floor"}},
        {"toilet", 3},
        {"sink", 3},
        {"bathtub", 3},
        {"washingmachine", 3},
        {"towel", 3, {"floor", "in:bathtub"}},
        {"toothbrush", 3, {"in:sink:2"}}}},
  };
  return kTemplates;
}

ObjectRef parse_parent(std::string_view spec) {
  // spec is "<class>" or "<class>:<id>"
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return ObjectRef{std::string(spec), 1};
  return ObjectRef{std::string(spec.substr(0, colon)), std::stoi(std::string(spec.substr(colon + 1)))};
}

}  // namespace

SceneGraph gen_layout(int layout_id, uint64_t seed) {
  if (layout_id < 1 || layout_id > kNumLayouts) {
    throw InvalidLayout("layout id " + std::to_string(layout_id) + " outside 1.." + std::to_string(kNumLayouts));
  }
  const LayoutTemplate& tpl = templates()[layout_id - 1];
  Rng rng(mix_seed(seed, static_cast<uint64_t>(layout_id)));

  SceneGraph world;
  world.layout_id = layout_id;
  world.seed = seed;
  for (size_t i = 0; i < tpl.rooms.size(); ++i) {
    world.rooms.push_back(Room{static_cast<int>(i), tpl.rooms[i].name, tpl.rooms[i].width, tpl.rooms[i].height});
  }

  std::map<std::string, int> next_id;
  std::vector<std::vector<ObjectRef>> floor_by_room(tpl.rooms.size());
  for (const auto& item : tpl.items) {
    const ObjectRef ref{item.cls, ++next_id[item.cls]};
    const std::string_view option = item.options[rng.below(item.options.size())];
    ObjectState state;
    if (option == "floor") {
      floor_by_room[item.room].push_back(ref);
    } else if (option.starts_with("on:")) {
      state.placement = OnTop{parse_parent(option.substr(3))};
    } else {
      state.placement = InsideOf{parse_parent(option.substr(3))};
    }
    if (std::string_view(item.cls) == "lamp") state.powered = rng.below(2) == 1;
    world.objects[ref] = state;
  }

  for (size_t r = 0; r < floor_by_room.size(); ++r) {
    const Room& room = world.rooms[r];
    std::vector<std::pair<int, int>> cells;
    for (int y = 0; y < room.height; ++y) {
      for (int x = 0; x < room.width; ++x) cells.emplace_back(x, y);
    }
    if (floor_by_room[r].size() >= cells.size()) throw Error("layout template overfills room " + room.name);
    rng.shuffle(std::span(cells));
    for (size_t i = 0; i < floor_by_room[r].size(); ++i) {
      world.objects[floor_by_room[r][i]].placement =
          FloorSpot{static_cast<int>(r), cells[i].first, cells[i].second};
    }
  }
  check_invariants(world, AgentState{});
  return world;
}

std::vector<std::string> room_names() {
  std::set<std::string> names;
  for (const auto& tpl : templates()) {
    for (const auto& r : tpl.rooms) names.insert(r.name);
  }
  return {names.begin(), names.end()};
}

}  // namespace visact::world
