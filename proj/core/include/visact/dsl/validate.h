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
#include <vector>

#include "visact/dsl/action.h"
#include "visact/world/scene.h"

namespace visact::dsl {

struct BindingError {
  size_t step = 0;  // 0-based index into the program
  ObjectRef ref;
  std::string message;

  bool operator==(const BindingError&) const = default;
};

// Reports every argument whose (name, id) pair is not an object of `world`.
// Nothing is executed.
std::vector<BindingError> validate_against(const Program& program, const world::SceneGraph& world);

}  // namespace visact::dsl
