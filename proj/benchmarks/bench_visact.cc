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


#include <benchmark/benchmark.h>

#include "visact/common/rng.h"
#include "visact/metrics/caption_metrics.h"
#include "visact/models/apm_model.h"
#include "visact/models/sum_model.h"
#include "visact/nn/graph.h"
#include "visact/pipeline/dataset.h"
#include "visact/text/caption.h"
#include "visact/text/oracle.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"
#include "visact/world/sim.h"
#include "visact/world/task.h"

namespace visact {
namespace {

struct Fixture {
  std::vector<pipeline::EpisodeRecord> records;
  text::Vocab vocab;
  text::Vocab program_vocab;

  Fixture() {
    pipeline::GenerateConfig g;
    g.episodes_per_layout = 2;
    g.seed = 1;
    records = pipeline::generate_records(g);
    vocab = pipeline::build_caption_vocab(records);
    program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  }
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

nn::ModelConfig width(int d) {
  nn::ModelConfig m;
  m.d_model = d;
  m.dropout = 0.0;
  return m;
}

void BM_GenerateRecords(benchmark::State& state) {
  pipeline::GenerateConfig g;
  g.episodes_per_layout = static_cast<int>(state.range(0));
  size_t n = 0;
  for (auto _ : state) {
    auto r = pipeline::generate_records(g);
    n += r.size();
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(static_cast<int64_t>(n));
}
BENCHMARK(BM_GenerateRecords)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExpertEpisode(benchmark::State& state) {
  const auto w0 = world::gen_layout(1, 3);
  const auto a0 = world::initial_agent(w0, 3);
  const world::Task& task = *world::find_task("put_groceries_in_fridge");
  for (auto _ : state) {
    auto plan = world::expert_plan(w0, a0, task);
    auto w = w0;
    auto a = a0;
    for (const auto& s : plan.steps) {
      auto r = world::step(w, a, s);
      w = r.value().world;
      a = r.value().agent;
    }
    benchmark::DoNotOptimize(world::check_goal(w, a, task));
  }
}
BENCHMARK(BM_ExpertEpisode);

void BM_RenderAndCaption(benchmark::State& state) {
  const auto w = world::gen_layout(2, 5);
  const auto a = world::initial_agent(w, 5);
  const auto view = static_cast<world::View>(state.range(0));
  for (auto _ : state) {
    auto r = world::render(w, a, view);
    benchmark::DoNotOptimize(r);
    auto c = text::caption_oracle(w, a, view, std::nullopt);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_RenderAndCaption)->Arg(0)->Arg(1)->Arg(2);

void BM_SumForwardBackward(benchmark::State& state) {
  models::SumConfig c;
  c.model = width(static_cast<int>(state.range(0)));
  models::SumModel sum(fx().vocab, c, 1);
  const auto& rec = fx().records.front();
  const auto raster = world::decode_rle(rec.view, rec.raster);
  const auto cap = text::tokenize(rec.caption, fx().vocab);
  const std::vector<int> prefix(cap.ids.begin(), cap.ids.end() - 1);
  const std::vector<int> target(cap.ids.begin() + 1, cap.ids.end());
  for (auto _ : state) {
    nn::Graph g(&sum.params());
    g.backward(nn::scale(nn::pick_sum(sum.log_probs(g, sum.encode(g, raster), prefix), target), -1.0));
  }
}
BENCHMARK(BM_SumForwardBackward)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SumGreedyCaption(benchmark::State& state) {
  models::SumConfig c;
  c.model = width(64);
  models::SumModel sum(fx().vocab, c, 1);
  const auto& rec = fx().records.front();
  const auto raster = world::decode_rle(rec.view, rec.raster);
  for (auto _ : state) benchmark::DoNotOptimize(models::sum_caption(sum, raster, nn::DecodeConfig::greedy()));
}
BENCHMARK(BM_SumGreedyCaption)->Unit(benchmark::kMillisecond);

void BM_ApmDecode(benchmark::State& state) {
  models::ApmConfig c;
  c.model = width(64);
  models::ApmModel apm(fx().vocab, fx().program_vocab, c, 1);
  const auto& rec = fx().records.front();
  const auto in = apm.make_input(world::find_task(rec.task)->nl_description, text::tokenize(rec.caption, fx().vocab),
                                 std::nullopt);
  const int k = static_cast<int>(state.range(0));
  const auto d = k == 0 ? nn::DecodeConfig::greedy(c.max_action_len) : nn::DecodeConfig::beam_search(k, c.max_action_len);
  for (auto _ : state) benchmark::DoNotOptimize(models::apm_decide(apm, in, d));
}
BENCHMARK(BM_ApmDecode)->Arg(0)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

metrics::Corpus random_corpus(size_t n) {
  Rng rng(3);
  const auto& recs = fx().records;
  metrics::Corpus c;
  for (size_t i = 0; i < n; ++i) {
    const auto& a = recs[rng.below(recs.size())];
    const auto& b = recs[rng.below(recs.size())];
    c.push_back({text::split_words(a.caption), {text::split_words(b.caption), text::split_words(a.caption)}});
  }
  return c;
}

void BM_CaptionScores(benchmark::State& state) {
  const auto c = random_corpus(static_cast<size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(metrics::score_captions(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CaptionScores)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace visact

BENCHMARK_MAIN();
