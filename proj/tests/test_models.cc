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
#include <filesystem>

#include "visact/common/error.h"
#include "visact/dsl/script.h"
#include "visact/metrics/task_metrics.h"
#include "visact/models/rollout.h"
#include "visact/pipeline/dataset.h"
#include "visact/text/caption.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"
#include "visact/world/serialize.h"

namespace visact::models {
namespace {

namespace fs = std::filesystem;

struct Fixture {
  text::Vocab vocab;
  text::Vocab program_vocab;
  Fixture() {
    pipeline::GenerateConfig g;
    g.layouts = {1, 3};
    g.episodes_per_layout = 3;
    g.seed = 4;
    vocab = pipeline::build_caption_vocab(pipeline::generate_records(g));
    program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  }
};

const Fixture& fx() {
  static Fixture f;
  return f;
}

nn::ModelConfig tiny() {
  nn::ModelConfig m;
  m.d_model = 16;
  m.n_heads = 2;
  m.n_layers = 1;
  m.dropout = 0.0;
  return m;
}

SumModel make_sum(uint64_t seed, bool zero = false) {
  SumConfig c;
  c.model = tiny();
  return SumModel(fx().vocab, c, seed, zero);
}

ApmModel make_apm(uint64_t seed, Coupling couple = Coupling::kText) {
  ApmConfig c;
  c.model = tiny();
  c.couple = couple;
  c.sum_d_model = 16;
  return ApmModel(fx().vocab, fx().program_vocab, c, seed);
}

std::pair<world::SceneGraph, world::AgentState> start(int layout, uint64_t seed) {
  auto w = world::gen_layout(layout, seed);
  return {w, world::initial_agent(w, seed)};
}

double row_mass(const nn::Tensor& lp, int r) {
  double s = 0;
  for (double v : lp.row(r)) s += std::exp(v);
  return s;
}

TEST(Sum, ZeroModelDecodesUnkToCutoff) {
  auto sum = make_sum(1, true);
  auto [w, a] = start(1, 1);
  auto r = world::render(w, a, world::View::kAuto);
  auto c = sum_caption(sum, r, nn::DecodeConfig::greedy());
  ASSERT_EQ(static_cast<int>(c.ids.size()), sum.config().max_caption_len);
  EXPECT_EQ(c.ids.front(), text::kBos);
  EXPECT_EQ(c.ids.back(), text::kEos);
  for (size_t i = 1; i + 1 < c.ids.size(); ++i) EXPECT_EQ(c.ids[i], text::kUnk);
}

TEST(Sum, DeterministicAndShapeChecked) {
  auto sum = make_sum(2);
  auto [w, a] = start(2, 3);
  auto r = world::render(w, a, world::View::kAuto);
  EXPECT_EQ(sum_caption(sum, r, nn::DecodeConfig::greedy()), sum_caption(sum, r, nn::DecodeConfig::greedy()));
  auto fp = world::render(w, a, world::View::kFirstPerson);
  EXPECT_THROW(sum_caption(sum, fp, nn::DecodeConfig::greedy()), ShapeMismatch);

  text::Caption cap = text::tokenize("the agent stands in the kitchen", fx().vocab);
  auto lp = sum.forward_logprobs(r, cap);
  EXPECT_EQ(lp.rows(), static_cast<int>(cap.ids.size()) - 1);
  EXPECT_EQ(lp.cols(), fx().vocab.size());
  for (int i = 0; i < lp.rows(); ++i) EXPECT_NEAR(row_mass(lp, i), 1.0, 1e-9);
  auto st = sum.caption_states(r, cap);
  EXPECT_EQ(st.rows(), static_cast<int>(cap.ids.size()));
  EXPECT_EQ(st.cols(), 16);
}

TEST(Sum, CheckpointRoundTrip) {
  auto sum = make_sum(3);
  auto path = (fs::temp_directory_path() / "visact_test_sum.ckpt").string();
  sum.save(path);
  auto back = SumModel::load(path, fx().vocab);
  EXPECT_EQ(back.params().checksum(), sum.params().checksum());
  EXPECT_EQ(back.config(), sum.config());
  text::Vocab other;
  EXPECT_THROW(SumModel::load(path, other), CheckpointError);
  auto apath = (fs::temp_directory_path() / "visact_test_apm.ckpt").string();
  auto apm = make_apm(3);
  apm.save(apath);
  EXPECT_THROW(SumModel::load(apath, fx().vocab), CheckpointError);
  auto aback = ApmModel::load(apath, fx().vocab, fx().program_vocab);
  EXPECT_EQ(aback.params().checksum(), apm.params().checksum());
  fs::remove(path);
  fs::remove(apath);
}

TEST(Apm, ActionFromIds) {
  auto apm = make_apm(4);
  dsl::ActionStep walk{"Walk", {{"fridge", 1}}};
  auto ids = apm.target_ids(walk);
  ASSERT_EQ(ids.size(), 4u);
  EXPECT_EQ(ids.back(), text::kEos);
  auto act = apm.action_from_ids(ids);
  ASSERT_TRUE(std::holds_alternative<dsl::ActionStep>(act));
  EXPECT_EQ(std::get<dsl::ActionStep>(act), walk);
  // Walk with two objects: wrong arity.
  std::vector<int> bad = {ids[0], ids[1], ids[2], ids[1], ids[2], text::kEos};
  EXPECT_TRUE(std::holds_alternative<MalformedAction>(apm.action_from_ids(bad)));
  EXPECT_FALSE(is_stop(apm.action_from_ids(bad)));
  EXPECT_TRUE(is_stop(apm.action_from_ids(std::vector<int>{text::kEos})));
}

TEST(Apm, LogProbsAndDecision) {
  auto apm = make_apm(5);
  auto cap = text::tokenize("the agent walks to the fridge", fx().vocab);
  dsl::ActionStep prev{"Walk", {{"kitchen", 1}}};
  auto in = apm.make_input("put groceries in the fridge", cap, prev);
  EXPECT_FALSE(in.prev_action.empty());
  auto target = apm.target_ids(dsl::ActionStep{"Open", {{"fridge", 1}}});
  auto lp = apm.forward_logprobs(in, target);
  EXPECT_EQ(lp.rows(), static_cast<int>(target.size()));
  EXPECT_EQ(lp.cols(), fx().program_vocab.size());
  for (int i = 0; i < lp.rows(); ++i) EXPECT_NEAR(row_mass(lp, i), 1.0, 1e-9);
  // The decision's log-prob is the teacher-forced score of its own ids.
  auto d = apm_decide(apm, in, nn::DecodeConfig::greedy(apm.config().max_action_len));
  ASSERT_FALSE(d.ids.empty());
  auto own = apm.forward_logprobs(in, d.ids);
  double s = 0;
  for (size_t t = 0; t < d.ids.size(); ++t) s += own(static_cast<int>(t), d.ids[t]);
  if (d.ids.back() == text::kEos) EXPECT_NEAR(d.logprob, s, 1e-9);
}

TEST(Apm, HiddenCouplingUsesStates) {
  auto sum = make_sum(6);
  auto apm = make_apm(6, Coupling::kHidden);
  auto [w, a] = start(3, 2);
  auto r = world::render(w, a, world::View::kAuto);
  auto cap = text::tokenize("the agent stands in the kitchen", fx().vocab);
  auto st = sum.caption_states(r, cap);
  auto in = apm.make_input("turn on the tv", cap, std::nullopt, st);
  auto target = apm.target_ids(dsl::ActionStep{"Walk", {{"tv", 1}}});
  auto lp1 = apm.forward_logprobs(in, target);
  for (double& v : in.caption_states.values()) v += 0.5;
  auto lp2 = apm.forward_logprobs(in, target);
  EXPECT_NE(lp1, lp2);
  in.caption_states = nn::Tensor(3, 5);
  EXPECT_THROW(apm.forward_logprobs(in, target), ShapeMismatch);
}

struct Malformed : Policy {
  ApmDecision act(const PolicyContext&, ApmInput*) override {
    return ApmDecision{MalformedAction{{"[Walk]", "[Walk]"}}, {}, 0.0};
  }
};

TEST(Rollout, ExpertAndMalformedPolicies) {
  OracleCaptioner cap(fx().vocab, world::View::kAuto);
  int tried = 0;
  for (int layout = 1; layout <= world::kNumLayouts; ++layout) {
    auto [w, a] = start(layout, 9);
    for (const world::Task* task : world::tasks_for(w)) {
      dsl::Program plan;
      try {
        plan = world::expert_plan(w, a, *task);
      } catch (const Unachievable&) {
        continue;
      }
      if (plan.steps.empty()) continue;
      ++tried;
      ScriptedPolicy pol(plan);
      RolloutConfig cfg;
      cfg.max_steps = 20;
      auto t = rollout(pol, cap, w, a, *task, cfg);
      EXPECT_TRUE(t.success);
      EXPECT_EQ(t.steps.size(), plan.steps.size());
      EXPECT_EQ(t.rewards().size(), t.steps.size());
      std::vector<Trajectory> one{t};
      EXPECT_DOUBLE_EQ(metrics::execution_rate(one), 1.0);
      EXPECT_DOUBLE_EQ(t.steps.back().reward, cfg.reward.step_reward + cfg.reward.goal_bonus);

      Malformed bad;
      cfg.max_steps = 5;
      auto f = rollout(bad, cap, w, a, *task, cfg);
      EXPECT_EQ(f.steps.size(), 5u);
      EXPECT_FALSE(f.success);
      EXPECT_DOUBLE_EQ(metrics::execution_rate(std::vector<Trajectory>{f}), 0.0);
      cfg.max_steps = 0;
      EXPECT_THROW(rollout(bad, cap, w, a, *task, cfg), InvalidArgument);
    }
  }
  EXPECT_GT(tried, 20);
}

TEST(Rollout, ModelRolloutReplaysAndReproduces) {
  auto sum = make_sum(7);
  auto apm = make_apm(7);
  for (int layout = 1; layout <= 3; ++layout) {
    auto [w, a] = start(layout, 11);
    auto tasks = world::tasks_for(w);
    ASSERT_FALSE(tasks.empty());
    const auto& task = *tasks.front();
    auto d = nn::DecodeConfig::sample(1.0, 42, apm.config().max_action_len);
    auto t1 = rollout(apm, sum, w, a, task, d, 6);
    auto t2 = rollout(apm, sum, w, a, task, d, 6);
    ASSERT_LE(t1.steps.size(), 6u);
    EXPECT_EQ(to_json(t1), to_json(t2));
    // Replaying the recorded actions reproduces the recorded executability.
    world::SceneGraph rw = w;
    world::AgentState ra = a;
    for (const auto& s : t1.steps) {
      EXPECT_EQ(world::serialize(s.world), world::serialize(rw));
      bool ok = false;
      if (const auto* st = std::get_if<dsl::ActionStep>(&s.action)) {
        auto res = world::step(rw, ra, *st);
        if (res.ok()) {
          ok = true;
          rw = res.value().world;
          ra = res.value().agent;
        }
      }
      EXPECT_EQ(ok, s.executed);
    }
  }
}

}  // namespace
}  // namespace visact::models
