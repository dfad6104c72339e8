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

#include <gtest/gtest.h>

#include "visact/common/rng.h"
#include "visact/dsl/script.h"
#include "visact/dsl/tokens.h"
#include "visact/dsl/validate.h"
#include "visact/world/layouts.h"

namespace visact::dsl {
namespace {

Program random_program(Rng& rng) {
  static const std::vector<std::string> names = {"fridge", "groceries", "tv", "mug", "coffee_table", "x1"};
  Program p;
  const auto n = rng.below(6);
  const auto verbs = registered_verbs();
  for (size_t i = 0; i < n; ++i) {
    const auto& v = verbs[rng.below(verbs.size())];
    ActionStep s{std::string(v.name), {}};
    for (int k = 0; k < v.arity; ++k) {
      s.args.push_back({names[rng.below(names.size())], static_cast<int>(1 + rng.below(30))});
    }
    p.steps.push_back(std::move(s));
  }
  return p;
}

// Same program in a noisier surface form: odd verb case, extra blanks,
// commas, an optional outer bracket pair.
std::string noisy(const Program& p, Rng& rng) {
  std::string out = rng.below(2) ? "[ " : "";
  const bool outer = !out.empty();
  for (size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    std::string verb = s.verb;
    for (char& c : verb) {
      if (rng.below(2)) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      else c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    out += "[" + verb + "]";
    for (const auto& a : s.args) out += std::string(1 + rng.below(3), ' ') + "<" + a.name + ">  (" + std::to_string(a.id) + ")";
    if (i + 1 < p.steps.size()) out += rng.below(2) ? " ,\n" : "\n";
  }
  if (outer) out += " ]";
  return out;
}

TEST(Parse, PaperExample) {
  auto p = parse_program("[Walk] <groceries> (1)");
  ASSERT_TRUE(p.ok());
  ASSERT_EQ(p.value().steps.size(), 1u);
  EXPECT_EQ(p.value().steps[0], (ActionStep{"Walk", {{"groceries", 1}}}));
}

TEST(Parse, EmptyInput) {
  auto p = parse_program("");
  ASSERT_TRUE(p.ok());
  EXPECT_TRUE(p.value().steps.empty());
}

TEST(Parse, MissingIdIsPositionedError) {
  auto p = parse_program("[Grab] <cup>");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.error().kind, ParseError::Kind::kSyntax);
  EXPECT_EQ(p.error().line, 1);
  EXPECT_EQ(p.error().column, 13);
  EXPECT_FALSE(p.error().expected.empty());
}

TEST(Parse, WrongArityOfRegisteredVerb) {
  auto p = parse_program("[Walk]\n[PutIn] <mug> (1)");
  ASSERT_FALSE(p.ok());
  EXPECT_EQ(p.error().kind, ParseError::Kind::kUnknownArity);
  EXPECT_EQ(p.error().line, 1);
}

TEST(Parse, CommaListWithOuterBrackets) {
  auto p = parse_program("[[walk] <groceries> (1), [GRAB] <groceries> (1), [close] <fridge> (1)]");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(format_program(p.value()), "[Walk] <groceries> (1)\n[Grab] <groceries> (1)\n[Close] <fridge> (1)");
}

TEST(Format, Examples) {
  EXPECT_EQ(format_program(Program{{ActionStep{"Close", {{"fridge", 1}}}}}), "[Close] <fridge> (1)");
  EXPECT_EQ(format_program(Program{}), "");
  EXPECT_EQ(format_step(ActionStep{"PutIn", {{"groceries", 1}, {"fridge", 2}}}),
            "[PutIn] <groceries> (1) <fridge> (2)");
}

TEST(Format, RoundTripOnGeneratedPrograms) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Program p = random_program(rng);
    auto back = parse_program(format_program(p));
    ASSERT_TRUE(back.ok()) << format_program(p);
    EXPECT_EQ(back.value(), p);
    auto noisy_back = parse_program(noisy(p, rng));
    ASSERT_TRUE(noisy_back.ok()) << noisy(p, rng);
    EXPECT_EQ(noisy_back.value(), p);
  }
}

TEST(Format, CanonicalizationIsIdempotent) {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    const std::string s = noisy(random_program(rng), rng);
    auto once = parse_program(s);
    ASSERT_TRUE(once.ok());
    const std::string f1 = format_program(once.value());
    auto twice = parse_program(f1);
    ASSERT_TRUE(twice.ok());
    EXPECT_EQ(format_program(twice.value()), f1);
  }
}

TEST(Parse, TotalOnArbitraryInput) {
  Rng rng(99);
  const std::string alphabet = "[]<>(),\n \tWalkGrab0123456789-_xyz";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const auto n = rng.below(40);
    for (size_t k = 0; k < n; ++k) s += alphabet[rng.below(alphabet.size())];
    if (rng.below(4) == 0) s += std::string(1, static_cast<char>(rng.below(256)));
    auto r = parse_program(s);
    if (!r.ok()) {
      EXPECT_GE(r.error().line, 1);
      EXPECT_GE(r.error().column, 1);
    }
  }
}

TEST(Validate, Bindings) {
  const auto w = world::gen_layout(1, 3);
  const auto& [first, state] = *w.objects.begin();
  EXPECT_TRUE(validate_against(Program{{ActionStep{"Walk", {first}}}}, w).empty());
  const auto errs = validate_against(Program{{ActionStep{"Walk", {first}}, ActionStep{"Walk", {{first.name, 999}}}}}, w);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0].step, 1u);
  // Name of one object with an id that only another class has.
  std::optional<ObjectRef> mismatch;
  for (const auto& [ref, s] : w.objects) {
    if (ref.id > 1) {
      for (const auto& [other, s2] : w.objects) {
        if (other.name != ref.name && !w.find({other.name, ref.id})) mismatch = ObjectRef{other.name, ref.id};
      }
    }
  }
  if (!mismatch) mismatch = ObjectRef{first.name, static_cast<int>(w.instances_of(first.name).size()) + 1};
  EXPECT_EQ(validate_against(Program{{ActionStep{"Grab", {*mismatch}}}}, w).size(), 1u);
}

TEST(Tokens, StepTokensAndUnknownIds) {
  const ActionStep s{"PutIn", {{"mug", 2}, {"microwave", 12}}};
  EXPECT_EQ(step_tokens(s), (std::vector<std::string>{"[PutIn]", "<mug>", "(2)", "<microwave>", "(?)"}));
  const auto toks = step_tokens(ActionStep{"Walk", {{"tv", 3}}});
  EXPECT_EQ(step_from_tokens(toks), (ActionStep{"Walk", {{"tv", 3}}}));
  EXPECT_FALSE(step_from_tokens(step_tokens(s)).has_value());
  const std::vector<std::string> names = {"tv", "mug"};
  const auto inv = program_token_inventory(names, 8);
  EXPECT_EQ(inv.size(), registered_verbs().size() + 2 + 8 + 1);
}

}  // namespace
}  // namespace visact::dsl
