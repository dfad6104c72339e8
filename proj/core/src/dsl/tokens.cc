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

#include "visact/dsl/tokens.h"

#include <algorithm>
#include <cctype>

namespace visact::dsl {
namespace {

bool wrapped(std::string_view tok, char open, char close) {
  return tok.size() >= 3 && tok.front() == open && tok.back() == close;
}

std::optional<int> parse_id(std::string_view tok) {
  if (!wrapped(tok, '(', ')')) return std::nullopt;
  std::string_view digits = tok.substr(1, tok.size() - 2);
  if (digits.empty() || digits.size() > 9) return std::nullopt;
  int value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    value = value * 10 + (c - '0');
  }
  if (value <= 0) return std::nullopt;
  return value;
}

}  // namespace

std::vector<std::string> step_tokens(const ActionStep& step, int max_id) {
  std::vector<std::string> out;
  out.push_back("[" + canonical_verb(step.verb) + "]");
  for (const auto& arg : step.args) {
    out.push_back("<" + arg.name + ">");
    out.push_back(arg.id >= 1 && arg.id <= max_id ? "(" + std::to_string(arg.id) + ")"
                                                   : std::string(kUnknownIdToken));
  }
  return out;
}

std::optional<ActionStep> step_from_tokens(std::span<const std::string> tokens) {
  if (tokens.empty() || !wrapped(tokens[0], '[', ']')) return std::nullopt;
  auto info = lookup_verb(std::string_view(tokens[0]).substr(1, tokens[0].size() - 2));
  if (!info) return std::nullopt;
  if (tokens.size() != 1 + 2 * static_cast<size_t>(info->arity)) return std::nullopt;
  ActionStep step{std::string(info->name), {}};
  for (size_t i = 1; i < tokens.size(); i += 2) {
    if (!wrapped(tokens[i], '<', '>')) return std::nullopt;
    auto id = parse_id(tokens[i + 1]);
    if (!id) return std::nullopt;
    step.args.push_back(ObjectRef{tokens[i].substr(1, tokens[i].size() - 2), *id});
  }
  return step;
}

std::vector<std::string> program_token_inventory(std::span<const std::string> object_names, int max_id) {
  std::vector<std::string> out;
  for (const auto& v : registered_verbs()) out.push_back("[" + std::string(v.name) + "]");
  for (const auto& n : object_names) out.push_back("<" + n + ">");
  for (int i = 1; i <= max_id; ++i) out.push_back("(" + std::to_string(i) + ")");
  out.emplace_back(kUnknownIdToken);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace visact::dsl
