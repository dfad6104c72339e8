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

#include <set>

#include "visact/common/error.h"
#include "visact/common/rng.h"
#include "visact/pipeline/dataset.h"
#include "visact/text/caption.h"
#include "visact/text/lexicon.h"
#include "visact/text/oracle.h"
#include "visact/text/vocab.h"
#include "visact/world/layouts.h"
#include "visact/world/sim.h"

namespace visact::text {
namespace {

TEST(Vocab, SpecialsAndSortedTokens) {
  const std::vector<std::string> toks = {"the", "cat", "the", "a"};
  const Vocab v = Vocab::build(toks);
  EXPECT_EQ(v.size(), kNumSpecials + 3);
  EXPECT_EQ(v.id("a"), kNumSpecials);
  EXPECT_EQ(v.id("cat"), kNumSpecials + 1);
  EXPECT_EQ(v.id("the"), kNumSpecials + 2);
  EXPECT_EQ(v.id("dog"), kUnk);
  for (int i = 0; i < v.size(); ++i) EXPECT_EQ(v.id(v.token(i)), i);
}

TEST(Vocab, TextRoundTripAndDeterminism) {
  const std::vector<std::string> corpus = {"the agent walks to the fridge", "the agent sits on the sofa"};
  const Vocab a = Vocab::build_from_sentences(corpus);
  const Vocab b = Vocab::build_from_sentences(corpus);
  EXPECT_EQ(a.to_text(), b.to_text());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(Vocab::from_text(a.to_text()), a);
  EXPECT_THROW(Vocab::from_text("not-a-vocab\nx\n"), DataFormatError);
}

TEST(Tokenize, Examples) {
  const std::vector<std::string> toks = {"the", "cat"};
  const Vocab v = Vocab::build(toks);
  EXPECT_EQ(tokenize("the cat", v).ids, (std::vector<int>{kBos, v.id("the"), v.id("cat"), kEos}));
  EXPECT_EQ(tokenize("The  dog", v).ids, (std::vector<int>{kBos, v.id("the"), kUnk, kEos}));
}

TEST(Tokenize, LengthLimit) {
  const std::vector<std::string> toks = {"a"};
  const Vocab v = Vocab::build(toks);
  const std::string long_text = "a a a a a";
  TokenizeOptions opts;
  opts.max_len = 5;
  EXPECT_THROW(tokenize(long_text, v, opts), CaptionTooLong);
  opts.truncate = true;
  const Caption c = tokenize(long_text, v, opts);
  EXPECT_EQ(c.ids.size(), 5u);
  EXPECT_EQ(c.ids.front(), kBos);
  EXPECT_EQ(c.ids.back(), kEos);
}

TEST(Tokenize, RoundTripOnCorpus) {
  std::vector<std::string> corpus;
  for (int layout = 1; layout <= world::kNumLayouts; ++layout) {
    const auto w = world::gen_layout(layout, 4);
    const auto a = world::initial_agent(w, 4);
    for (const auto& [ref, s] : w.objects) {
      auto r = world::step(w, a, dsl::ActionStep{"Walk", {ref}});
      if (r.ok()) corpus.push_back(caption_oracle(r.value().world, r.value().agent, world::View::kAuto, dsl::ActionStep{"Walk", {ref}}));
    }
  }
  const Vocab v = Vocab::build_from_sentences(corpus);
  for (const auto& s : corpus) EXPECT_EQ(detokenize(tokenize(s, v), v), normalize(s));
  EXPECT_EQ(normalize("  The   Agent\tSITS "), "the agent sits");
}

TEST(Detokenize, StopsAtEosAndDropsSpecials) {
  const std::vector<std::string> toks = {"x", "y"};
  const Vocab v = Vocab::build(toks);
  const Caption c{{kBos, v.id("x"), kPad, kUnk, v.id("y"), kEos, v.id("x")}};
  EXPECT_EQ(detokenize(c, v), "x <unk> y");
}

struct FridgeScene {
  world::SceneGraph w;
  world::AgentState a;
};

FridgeScene walked_to_fridge() {
  for (int layout = 1; layout <= world::kNumLayouts; ++layout) {
    const auto w = world::gen_layout(layout, 1);
    const dsl::ObjectRef f{"fridge", 1};
    if (!w.find(f) || w.find(f)->open) continue;
    auto r = world::step(w, world::initial_agent(w, 1), dsl::ActionStep{"Walk", {f}});
    if (r.ok() && w.rooms.at(static_cast<size_t>(r.value().agent.room)).name == "kitchen") {
      return {r.value().world, r.value().agent};
    }
  }
  ADD_FAILURE() << "no kitchen fridge";
  return {};
}

TEST(Oracle, WalkToFridge) {
  const auto s = walked_to_fridge();
  const dsl::ActionStep walk{"Walk", {{"fridge", 1}}};
  OracleOptions none;
  none.salient = 0;
  EXPECT_EQ(caption_oracle(s.w, s.a, world::View::kAuto, walk, none), "the agent walks to the closed fridge in the kitchen");
  const std::string full = caption_oracle(s.w, s.a, world::View::kAuto, walk);
  EXPECT_EQ(full.rfind("the agent walks to the closed fridge", 0), 0u);
  EXPECT_EQ(full.substr(full.size() - 14), "in the kitchen");
  EXPECT_EQ(full, caption_oracle(s.w, s.a, world::View::kAuto, walk));
}

TEST(Oracle, NoLastActionDescribesPosture) {
  const auto w = world::gen_layout(2, 8);
  const auto a = world::initial_agent(w, 8);
  const std::string c = caption_oracle(w, a, world::View::kAuto, std::nullopt);
  EXPECT_EQ(c.rfind("the agent stands", 0), 0u) << c;
  EXPECT_NE(c.find("in the " + w.rooms.at(static_cast<size_t>(a.room)).name), std::string::npos);
}

// Captions of states reached by random executable actions use only words of
// the closed lexicon.
TEST(Oracle, LexiconCoversRandomWalks) {
  const Vocab lexicon = pipeline::build_caption_vocab({});
  Rng rng(31);
  long checked = 0;
  for (int layout = 1; layout <= world::kNumLayouts; ++layout) {
    for (uint64_t seed = 0; seed < 4; ++seed) {
      auto w = world::gen_layout(layout, seed);
      auto a = world::initial_agent(w, seed);
      std::vector<dsl::ObjectRef> refs;
      for (const auto& [ref, s] : w.objects) refs.push_back(ref);
      for (int t = 0; t < 150; ++t) {
        const auto& v = dsl::registered_verbs()[rng.below(dsl::registered_verbs().size())];
        dsl::ActionStep s{std::string(v.name), {}};
        for (int k = 0; k < v.arity; ++k) {
          s.args.push_back(k == 0 && v.arity == 2 && !a.holding.empty() ? a.holding[0] : refs[rng.below(refs.size())]);
        }
        auto r = world::step(w, a, s);
        if (!r.ok()) continue;
        w = r.value().world;
        a = r.value().agent;
        for (auto view : {world::View::kAuto, world::View::kFirstPerson, world::View::kFrontPerson}) {
          const std::string c = caption_oracle(w, a, view, s);
          const Caption ids = tokenize(c, lexicon, TokenizeOptions{64, false});
          for (int id : ids.ids) ASSERT_NE(id, kUnk) << c;
          for (const auto& word : split_words(c)) ASSERT_EQ(word, normalize(word));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(Expand, Templates) {
  EXPECT_EQ(expand_caption("walk bathroom", 0), "the agent walks to the bathroom");
  EXPECT_EQ(expand_caption("run treadmill", 0), "the agent runs on the treadmill");
  EXPECT_THROW(expand_caption("fly bathroom", 0), UnknownVerbTemplate);
  EXPECT_EQ(template_count("fly"), 0u);
  const size_t n = template_count("walk");
  ASSERT_GE(n, 2u);
  std::set<std::string> seen;
  for (uint64_t s = 0; s < 50; ++s) {
    const std::string e = expand_caption("walk bathroom", s);
    EXPECT_EQ(e, expand_caption("walk bathroom", s));
    EXPECT_EQ(e.rfind("the agent ", 0), 0u);
    EXPECT_NE(e.find("bathroom"), std::string::npos);
    seen.insert(e);
  }
  EXPECT_EQ(seen.size(), n);
  EXPECT_NE(expand_caption("sitting chair", 0).find("chair"), std::string::npos);
}

TEST(Lexicon, ClosedWordClasses) {
  EXPECT_TRUE(is_noun("fridge"));
  EXPECT_TRUE(is_noun("kitchen"));
  EXPECT_TRUE(is_adjective("closed"));
  EXPECT_TRUE(is_determiner("the"));
  EXPECT_FALSE(is_noun("walks"));
}

}  // namespace
}  // namespace visact::text
