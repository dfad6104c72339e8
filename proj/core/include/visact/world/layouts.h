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
#include <string>
#include <vector>

#include "visact/world/scene.h"

namespace visact::world {

inline constexpr int kNumLayouts = 7;

// Builds household `layout_id` (1..7). Each id has its own room and object
// template; the seed jitters floor positions, which surface or container
// small items start on, and lamp power. Throws InvalidLayout.
SceneGraph gen_layout(int layout_id, uint64_t seed);

// Sorted names of every room used by any layout.
std::vector<std::string> room_names();

}  // namespace visact::world
