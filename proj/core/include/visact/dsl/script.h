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

#include "visact/common/error.h"
#include "visact/dsl/action.h"

namespace visact::dsl {

struct ParseError {
  enum class Kind { kSyntax, kUnknownArity };

  Kind kind = Kind::kSyntax;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  std::string expected;

  std::string to_string() const;
};

// Parses the bracketed script form:
//
//   [Walk] <groceries> (1)
//   [PutIn] <groceries> (1) <fridge> (1)
//
// Steps are separated by newlines or commas and the whole list may be wrapped
// in an outer pair of brackets. Verbs are matched case-insensitively and
// stored canonically; unregistered verbs parse but are left unchecked.
Result<Program, ParseError> parse_program(std::string_view text);

// One step per line, `[Verb] <name> (id)`, no trailing newline.
std::string format_step(const ActionStep& step);
std::string format_program(const Program& program);

}  // namespace visact::dsl
