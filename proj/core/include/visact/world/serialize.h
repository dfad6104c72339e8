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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "visact/world/scene.h"
#include "visact/world/task.h"

namespace visact::world {

using Json = nlohmann::ordered_json;

// Canonical structured form with a fixed key order. Objects are listed in
// (name, id) order so equal graphs serialize byte-identically.
Json to_json(const SceneGraph& world);
Json to_json(const AgentState& agent);
Json to_json(const Task& task);

SceneGraph scene_from_json(const Json& j);
AgentState agent_from_json(const Json& j);

// Indented text form used by golden files and the CLI.
std::string serialize(const SceneGraph& world);
std::string serialize(const AgentState& agent);
SceneGraph parse_scene(std::string_view text);
AgentState parse_agent(std::string_view text);

}  // namespace visact::world
