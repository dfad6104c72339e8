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

#include <cmath>

#include "oracles/metric_oracles.h"
#include "visact/common/error.h"
#include "visact/common/rng.h"
#include "visact/metrics/caption_metrics.h"
#include "visact/metrics/task_metrics.h"
#include "visact/text/caption.h"
#include "visact/text/oracle.h"
#include "visact/text/vocab.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/sim.h"
#include "visact/world/task.h"

namespace visact::metrics {
namespace {

Tokens w(const std::string& s) { return text::split_words(s); }

Corpus one(const std::string& cand, std::vector<std::string> refs) {
  CorpusItem it{w(cand), {}};
  for (const auto& r : refs) it.references.push_back(w(r));
  return {it};
}

Corpus from_oracle(const std::vector<oracle::Item>& items) {
  Corpus c;
  for (const auto& it : items) c.push_back({it.cand, it.refs});
  return c;
}

TEST(Bleu, HandExamples) {
  EXPECT_DOUBLE_EQ(bleu(one("the agent walks to the fridge", {"the agent walks to the fridge"}), 4), 1.0);
  EXPECT_NEAR(bleu(one("the the the", {"the cat"}), 1), 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(bleu(one("a b c", {"x y z"}), 1), 0.0);
  EXPECT_THROW(bleu({}, 1), EmptyCorpus);
  EXPECT_THROW(bleu(one("a", {"a"}), 5), InvalidArgument);
}

TEST(Bleu, BrevityPenaltyPrefersShorterOnTies) {
  // |cand| = 2, refs of length 1 and 3 are equally close: the shorter wins, so no penalty.
  auto c = one("a b", {"a", "a b c"});
  EXPECT_NEAR(bleu(c, 1), 1.0, 1e-12);
  auto d = one("a b", {"a b c d"});
  EXPECT_NEAR(bleu(d, 1), std::exp(1.0 - 4.0 / 2.0), 1e-12);
}

TEST(Bleu, SmoothingOnlyTouchesHigherOrders) {
  auto c = one("a b c", {"a c b"});
  EXPECT_DOUBLE_EQ(bleu(c, 3), 0.0);
  BleuOptions s{true};
  // p1 = 3/3, p2 = (0+1)/(2+1), p3 = (0+1)/(1+1)
  EXPECT_NEAR(bleu(c, 3, s), std::cbrt(1.0 * (1.0 / 3.0) * 0.5), 1e-12);
}

TEST(Bleu, MatchesBruteForceOnRandomCorpora) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto items = oracle::random_corpus(rng, 1 + int(rng.below(6)), 5);
    auto c = from_oracle(items);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(bleu(c, n), oracle::bleu(items, n), 1e-9) << trial << " n=" << n;
  }
}

TEST(Rouge, HandExamples) {
  EXPECT_DOUBLE_EQ(rouge_l(one("the cat", {"the cat"})), 1.0);
  EXPECT_DOUBLE_EQ(rouge_l(one("a b", {"c d"})), 0.0);
  const double p = 1.0, r = 2.0 / 3.0, b2 = 1.44;
  EXPECT_NEAR(rouge_l(one("the cat", {"the cat sat"})), (1 + b2) * p * r / (r + b2 * p), 1e-12);
}

TEST(Rouge, MatchesBruteForceOnRandomCorpora) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto items = oracle::random_corpus(rng, 1 + int(rng.below(6)), 4);
    EXPECT_NEAR(rouge_l(from_oracle(items)), oracle::rouge_l(items), 1e-9) << trial;
  }
}

TEST(Rouge, AppendingMatchingTokenKeepsRecall) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto items = oracle::random_corpus(rng, 1, 4);
    auto& it = items[0];
    const auto& ref = it.refs[0];
    double before = double(oracle::lcs_table(it.cand, ref)) / ref.size();
    it.cand.push_back(ref[rng.below(ref.size())]);
    double after = double(oracle::lcs_table(it.cand, ref)) / ref.size();
    EXPECT_GE(after, before);
    EXPECT_EQ(oracle::lcs_table(it.cand, ref) == 0, rouge_l(from_oracle({{it.cand, {ref}}})) == 0.0);
  }
}

TEST(Meteor, HandExamples) {
  const std::string s = "the agent walks to the fridge";
  const double len = 6;
  EXPECT_NEAR(meteor_lite(one(s, {s})), 1.0 - 0.5 * std::pow(1.0 / len, 3), 1e-12);
  EXPECT_DOUBLE_EQ(meteor_lite(one("a b", {"c d"})), 0.0);
  EXPECT_EQ(meteor_stem("walks"), meteor_stem("walking"));
  // Stem stage alone aligns the pair.
  EXPECT_NEAR(meteor_lite(one("walking", {"walks"})), 1.0 - 0.5, 1e-12);
}

TEST(Meteor, ChunkPenalty) {
  // matches 2 in two chunks: P = R = 1, penalty 0.5 * (2/2)^3
  EXPECT_NEAR(meteor_lite(one("b a", {"a b"})), 0.5, 1e-12);
}

TEST(Cider, UniqueIdentityScoresTen) {
  Corpus c = {{w("a b c d"), {w("a b c d")}}, {w("x y z w"), {w("x y z w")}}};
  EXPECT_NEAR(cider(c), 10.0, 1e-9);
}

TEST(Cider, DisjointAndOrderInvariant) {
  Corpus c = {{w("a b"), {w("c d")}}, {w("e f"), {w("g h")}}};
  EXPECT_DOUBLE_EQ(cider(c), 0.0);
  Corpus d = {{w("a b c"), {w("a b d"), w("a c")}}, {w("b c a"), {w("c a")}}, {w("d d"), {w("a d")}}};
  Corpus e = {d[2], d[0], d[1]};
  EXPECT_NEAR(cider(d), cider(e), 1e-12);
  std::swap(e[1].references[0], e[1].references[1]);
  EXPECT_NEAR(cider(d), cider(e), 1e-12);
  EXPECT_THROW(cider({d[0]}), CorpusTooSmall);
}

TEST(Spice, HandExamples) {
  EXPECT_DOUBLE_EQ(spice_lite(one("the open fridge", {"the open fridge"})), 1.0);
  EXPECT_NEAR(spice_lite(one("open fridge", {"closed fridge"})), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(spice_lite(one("lorem ipsum dolor", {"the open fridge"})), 0.0);
}

TEST(Spice, TuplesOfOracleCaptions) {
  auto t = caption_tuples(w("the agent walks to the closed fridge in the kitchen"));
  ASSERT_TRUE(t.has_value());
  EXPECT_TRUE(t->count({"fridge"}));
  EXPECT_TRUE(t->count({"fridge", "closed"}));
  EXPECT_TRUE(t->count({"kitchen"}));
  EXPECT_FALSE(caption_tuples(w("the closed")).has_value());
}

TEST(Scores, IdentityAndDisjointExtremes) {
  Corpus same = {{w("the agent walks to the closed fridge"), {w("the agent walks to the closed fridge")}},
                 {w("the agent sits on the sofa"), {w("the agent sits on the sofa")}}};
  auto s = score_captions(same);
  EXPECT_DOUBLE_EQ(s.bleu1, 1.0);
  EXPECT_DOUBLE_EQ(s.bleu4, 1.0);
  EXPECT_DOUBLE_EQ(s.rouge_l, 1.0);
  EXPECT_DOUBLE_EQ(s.spice, 1.0);
  EXPECT_GT(s.meteor, 0.9);
  EXPECT_GT(s.cider, 0.0);
  Corpus apart = {{w("p q r"), {w("the agent walks to the fridge")}}, {w("s t u"), {w("the agent sits on the sofa")}}};
  auto z = score_captions(apart);
  EXPECT_EQ(z.bleu1, 0.0);
  EXPECT_EQ(z.rouge_l, 0.0);
  EXPECT_EQ(z.meteor, 0.0);
  EXPECT_EQ(z.cider, 0.0);
  EXPECT_EQ(z.spice, 0.0);
}

TEST(Scores, BoundedOnRandomCorpora) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = from_oracle(oracle::random_corpus(rng, 2 + int(rng.below(4)), 6));
    auto s = score_captions(c);
    for (double v : {s.bleu1, s.bleu2, s.bleu3, s.bleu4, s.rouge_l, s.meteor, s.spice}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_GE(s.cider, 0.0);
    EXPECT_LE(s.cider, 10.0 + 1e-9);
  }
}

TEST(MakeCorpus, CountMismatch) {
  EXPECT_THROW(make_corpus({"a"}, {"a", "b"}), InvalidArgument);
  EXPECT_EQ(make_corpus({"a b"}, {"c"}).size(), 1u);
}

models::Trajectory traj(std::vector<bool> executed, bool success) {
  models::Trajectory t;
  for (bool e : executed) {
    models::StepRecord s;
    s.executed = e;
    t.steps.push_back(std::move(s));
  }
  t.success = success;
  return t;
}

TEST(TaskMetrics, Ratios) {
  std::vector<models::Trajectory> ts = {traj({true, false, true, true}, false)};
  EXPECT_DOUBLE_EQ(execution_rate(ts), 0.75);
  ts = {traj({false, false}, false), traj({false}, false)};
  EXPECT_DOUBLE_EQ(execution_rate(ts), 0.0);
  std::vector<models::Trajectory> e;
  for (int i = 0; i < 10; ++i) e.push_back(traj({true}, i < 3));
  EXPECT_DOUBLE_EQ(episode_success_rate(e), 0.3);
  EXPECT_THROW(execution_rate(std::vector<models::Trajectory>{}), EmptyInput);
  EXPECT_THROW(episode_success_rate(std::vector<models::Trajectory>{}), EmptyInput);
}

TEST(TaskMetrics, ExpertRolloutsExecuteFully) {
  text::Vocab vocab;
  models::OracleCaptioner cap(vocab, world::View::kAuto);
  std::vector<models::Trajectory> ts;
  for (int layout = 1; layout <= world::kNumLayouts; ++layout) {
    auto w0 = world::gen_layout(layout, 5);
    auto agent = world::initial_agent(w0, 5);
    for (const world::Task* task : world::tasks_for(w0)) {
      dsl::Program plan;
      try {
        plan = world::expert_plan(w0, agent, *task);
      } catch (const Unachievable&) {
        continue;
      }
      if (plan.steps.empty()) continue;
      models::ScriptedPolicy pol(plan);
      models::RolloutConfig cfg;
      cfg.max_steps = static_cast<int>(plan.steps.size());
      ts.push_back(models::rollout(pol, cap, w0, agent, *task, cfg));
    }
  }
  ASSERT_GT(ts.size(), 20u);
  EXPECT_DOUBLE_EQ(execution_rate(ts), 1.0);
  EXPECT_DOUBLE_EQ(episode_success_rate(ts), 1.0);
}

}  // namespace
}  // namespace visact::metrics
