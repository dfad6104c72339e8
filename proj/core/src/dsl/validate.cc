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

#include "visact/dsl/validate.h"

namespace visact::dsl {

std::vector<BindingError> validate_against(const Program& program, const world::SceneGraph& world) {
  std::vector<BindingError> errors;
  for (size_t i = 0; i < program.steps.size(); ++i) {
    for (const ObjectRef& ref : program.steps[i].args) {
      if (world.find(ref)) continue;
      std::string msg = world.has_class(ref.name) ? "no " + ref.name + " with id " + std::to_string(ref.id)
                                                  : "no object class '" + ref.name + "'";
      errors.push_back(BindingError{i, ref, std::move(msg)});
    }
  }
  return errors;
}

}  // namespace visact::dsl
