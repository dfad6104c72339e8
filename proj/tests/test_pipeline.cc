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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "visact/common/error.h"
#include "visact/dsl/script.h"
#include "visact/pipeline/dataset.h"
#include "visact/text/caption.h"
#include "visact/text/oracle.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"
#include "visact/world/sim.h"

namespace visact::pipeline {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("visact_test_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

dsl::ActionStep parse_one(const std::string& s) {
  auto p = dsl::parse_program(s);
  EXPECT_TRUE(p.ok()) << s;
  EXPECT_EQ(p.value().steps.size(), 1u);
  return p.value().steps.at(0);
}

GenerateConfig small(uint64_t seed) {
  GenerateConfig c;
  c.layouts = {1, 4};
  c.episodes_per_layout = 3;
  c.views = {world::View::kAuto, world::View::kFirstPerson};
  c.seed = seed;
  return c;
}

TEST(Dataset, ByteDeterministic) {
  GenerateConfig c;
  c.layouts = {1};
  c.episodes_per_layout = 2;
  c.seed = 7;
  auto a = scratch("det_a"), b = scratch("det_b");
  auto ma = generate_dataset(c, a.string());
  auto mb = generate_dataset(c, b.string());
  EXPECT_EQ(ma.content_hash, mb.content_hash);
  auto fa = read_dir(a), fb = read_dir(b);
  EXPECT_EQ(fa, fb);
  EXPECT_TRUE(fa.count("manifest"));
  EXPECT_TRUE(fa.count("vocab.txt"));
  c.seed = 8;
  EXPECT_NE(generate_dataset(c, b.string()).content_hash, ma.content_hash);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Dataset, RecordsReplayAndMatchPlans) {
  auto cfg = small(3);
  auto recs = generate_records(cfg);
  std::map<std::pair<int, int>, std::vector<const EpisodeRecord*>> by_ep;  // (episode, view)
  for (const auto& r : recs) by_ep[{r.episode, static_cast<int>(r.view)}].push_back(&r);
  ASSERT_EQ(by_ep.size(), 2u * 3u * 2u);
  for (const auto& [key, steps] : by_ep) {
    const auto& first = *steps.front();
    auto w = world::gen_layout(first.layout_id, first.world_seed);
    auto agent = world::initial_agent(w, first.seed);
    const world::Task* task = world::find_task(first.task);
    ASSERT_NE(task, nullptr);
    auto plan = world::expert_plan(w, agent, *task);
    ASSERT_EQ(plan.steps.size(), steps.size()) << first.task;
    std::optional<dsl::ActionStep> prev;
    for (size_t t = 0; t < steps.size(); ++t) {
      const auto& r = *steps[t];
      EXPECT_EQ(r.t, static_cast<int>(t));
      EXPECT_EQ(r.raster, world::encode_rle(world::render(w, agent, r.view)));
      EXPECT_EQ(r.caption, text::caption_oracle(w, agent, r.view, prev));
      EXPECT_EQ(r.prev_action, prev ? dsl::format_step(*prev) : "");
      auto act = parse_one(r.action);
      EXPECT_EQ(act, plan.steps[t]);
      auto res = world::step(w, agent, act);
      ASSERT_TRUE(res.ok()) << r.action;
      w = res.value().world;
      agent = res.value().agent;
      prev = act;
    }
    EXPECT_TRUE(world::check_goal(w, agent, *task));
  }
}

TEST(Dataset, SplitsAndRoundTrip) {
  auto cfg = small(5);
  cfg.episodes_per_layout = 10;
  auto dir = scratch("splits");
  auto m = generate_dataset(cfg, dir.string());
  const int total = 20 - m.skipped_episodes;
  std::set<int> tr(m.train_episodes.begin(), m.train_episodes.end());
  std::set<int> va(m.val_episodes.begin(), m.val_episodes.end());
  std::set<int> te(m.test_episodes.begin(), m.test_episodes.end());
  EXPECT_EQ(static_cast<int>(tr.size() + va.size() + te.size()), total);
  for (int e : te) {
    EXPECT_FALSE(tr.count(e));
    EXPECT_FALSE(va.count(e));
  }
  for (int e : va) EXPECT_FALSE(tr.count(e));
  EXPECT_LE(std::abs(static_cast<double>(tr.size()) - 0.8 * total), 1.0);
  EXPECT_LE(std::abs(static_cast<double>(va.size()) - 0.1 * total), 1.0);

  auto ds = open_dataset(dir.string());
  auto all = generate_records(cfg);
  std::vector<EpisodeRecord> loaded;
  long count = 0;
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    for (auto& r : load_split(ds, s)) {
      const auto& ids = s == Split::kTrain ? tr : s == Split::kVal ? va : te;
      EXPECT_TRUE(ids.count(r.episode));
      loaded.push_back(std::move(r));
      ++count;
    }
  }
  long expected = 0;
  for (const auto& [v, n] : m.records_per_view) expected += n;
  EXPECT_EQ(count, expected);
  EXPECT_EQ(count, static_cast<long>(all.size()));
  auto key = [](const EpisodeRecord& r) { return std::make_tuple(r.episode, static_cast<int>(r.view), r.t); };
  std::sort(loaded.begin(), loaded.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  std::sort(all.begin(), all.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  EXPECT_EQ(loaded, all);
  EXPECT_EQ(load_split(ds, Split::kTrain, world::View::kFirstPerson).size() * 2, load_split(ds, Split::kTrain).size());
  fs::remove_all(dir);
}

TEST(Dataset, IntegrityErrors) {
  GenerateConfig c;
  c.layouts = {2};
  c.episodes_per_layout = 2;
  c.seed = 1;
  auto dir = scratch("integrity");
  generate_dataset(c, dir.string());
  fs::path shard;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".ndrec") shard = e.path();
  }
  ASSERT_FALSE(shard.empty());
  {
    std::ofstream out(shard, std::ios::app);
    out << "\n";
  }
  EXPECT_THROW(open_dataset(dir.string()), HashMismatch);
  fs::remove(dir / "manifest");
  EXPECT_THROW(open_dataset(dir.string()), MissingManifest);
  fs::remove_all(dir);
}

TEST(Dataset, RecordJsonRoundTrip) {
  for (const auto& r : generate_records(small(9))) EXPECT_EQ(record_from_json(to_json(r)), r);
}

TEST(Dataset, Batches) {
  auto b = make_batches(10, 4, 1, true);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[2].size(), 2u);
  std::multiset<size_t> seen;
  for (const auto& x : b) seen.insert(x.begin(), x.end());
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_EQ(std::set<size_t>(seen.begin(), seen.end()).size(), 10u);
  EXPECT_EQ(make_batches(10, 4, 1, true), b);
  EXPECT_EQ(make_batches(5, 2, 1, false)[0], (std::vector<size_t>{0, 1}));
}

TEST(Dataset, VocabsCoverRecords) {
  auto recs = generate_records(small(2));
  auto v = build_caption_vocab(recs);
  for (const auto& r : recs) {
    for (const auto& w : text::split_words(r.caption)) EXPECT_TRUE(v.contains(w)) << w;
  }
  auto pv = build_program_vocab(8);
  EXPECT_TRUE(pv.contains("[Walk]"));
  EXPECT_TRUE(pv.contains("(8)"));
}

}  // namespace
}  // namespace visact::pipeline
