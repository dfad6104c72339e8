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

// Acceptance runs A1..A9. One PASS/FAIL line per criterion on stdout,
// progress on stderr. Exit status is non-zero when any selected criterion
// fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oracles/metric_oracles.h"
#include "oracles/toy_policy.h"
#include "visact/common/rng.h"
#include "visact/dsl/script.h"
#include "visact/metrics/caption_metrics.h"
#include "visact/metrics/task_metrics.h"
#include "visact/nn/gradcheck.h"
#include "visact/nn/layers.h"
#include "visact/pipeline/dataset.h"
#include "visact/text/caption.h"
#include "visact/text/oracle.h"
#include "visact/train/evaluate.h"
#include "visact/train/finetune.h"
#include "visact/train/loss.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"
#include "visact/world/sim.h"
#include "visact/world/task.h"

namespace visact {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Collects sub-checks; the criterion passes when all of them do.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    if (failures_.empty()) return std::to_string(count_) + " checks";
    std::string s = std::to_string(failures_.size()) + "/" + std::to_string(count_) + " failed: " + failures_[0];
    for (size_t i = 1; i < failures_.size() && i < 4; ++i) s += "; " + failures_[i];
    return s;
  }

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
};

void log(const std::string& s) { std::cerr << "  " << s << "\n"; }

pipeline::GenerateConfig layout_set(int episodes, uint64_t seed) {
  pipeline::GenerateConfig g;
  g.episodes_per_layout = episodes;
  g.seed = seed;
  return g;
}

// ---------------------------------------------------------------- A1

struct Sample {
  world::Raster raster;
  text::Caption caption;
  const world::Task* task = nullptr;
  dsl::ActionStep step;
};

Sample first_step(const text::Vocab& vocab) {
  auto w = world::gen_layout(1, 3);
  auto agent = world::initial_agent(w, 3);
  const world::Task* task = world::find_task("put_groceries_in_fridge");
  const auto plan = world::expert_plan(w, agent, *task);
  Sample s;
  s.raster = world::render(w, agent, world::View::kAuto);
  s.caption = text::tokenize(text::caption_oracle(w, agent, world::View::kAuto, std::nullopt), vocab);
  s.task = task;
  s.step = plan.steps.at(0);
  return s;
}

void perturb_norms(nn::ParameterStore& s, Rng& rng) {
  for (auto& p : s.all()) {
    if (p.name.find(".gain") != std::string::npos || p.name.find(".bias") != std::string::npos) {
      for (auto& v : p.value.values()) v += 0.2 * rng.normal();
    }
  }
}

Outcome run_a1() {
  const auto t0 = Clock::now();
  constexpr double kTol = 1e-4;
  nn::GradcheckOptions opts;
  opts.probes_per_tensor = 20;
  opts.h = 1e-5;
  double worst = 0;
  std::string worst_name;
  int probes = 0;
  Checks c;
  auto check = [&](const std::string& name, nn::ParameterStore& s, const std::function<nn::Var(nn::Graph&)>& loss) {
    Rng rng(97);
    const auto r = nn::gradcheck(s, loss, rng, opts);
    log(name + ": max rel err " + num(r.max_rel_err, 3) + " over " + std::to_string(r.probes) + " probes");
    probes += r.probes;
    if (r.max_rel_err > worst) worst = r.max_rel_err, worst_name = name + " " + r.worst;
    c.expect(r.max_rel_err < kTol && r.probes > 0, name + " rel err " + num(r.max_rel_err, 3));
  };

  {
    nn::ModelConfig mc;
    mc.d_model = 8;
    mc.n_heads = 2;
    mc.ffn_mult = 2;
    mc.dropout = 0.0;
    nn::ParameterStore s;
    Rng rng(6);
    const auto x = s.add("x", 5, 8, nn::Init::kNormal, rng, 1.0);
    const auto mem = s.add("mem", 4, 8, nn::Init::kNormal, rng, 1.0);
    const auto lin = nn::Linear::make(s, "lin", 8, 8, rng);
    const auto ln = nn::LayerNorm::make(s, "ln", 8);
    const auto mha = nn::MultiHeadAttention::make(s, "mha", 8, 2, rng);
    const auto ff = nn::FeedForward::make(s, "ff", 8, 16, rng);
    const auto enc = nn::EncoderLayer::make(s, "enc", mc, rng);
    const auto dec = nn::DecoderLayer::make(s, "dec", mc, rng);
    perturb_norms(s, rng);
    check("Linear", s, [&](nn::Graph& g) { return nn::sum(nn::gelu(lin(g, g.param(x)))); });
    check("LayerNorm", s, [&](nn::Graph& g) {
      nn::Var y = ln(g, g.param(x));
      return nn::sum(nn::mul(y, nn::gelu(y)));
    });
    check("MultiHeadAttention.self", s, [&](nn::Graph& g) {
      nn::Var y = mha(g, g.param(x), g.param(x), true);
      return nn::sum(nn::mul(y, y));
    });
    check("MultiHeadAttention.cross", s, [&](nn::Graph& g) {
      nn::Var y = mha(g, g.param(x), g.param(mem), false);
      return nn::sum(nn::mul(y, y));
    });
    check("FeedForward", s, [&](nn::Graph& g) { return nn::sum(ff(g, g.param(x))); });
    check("EncoderLayer", s, [&](nn::Graph& g) {
      nn::Var y = enc(g, g.param(mem), 0.0);
      return nn::sum(nn::mul(y, y));
    });
    check("DecoderLayer", s, [&](nn::Graph& g) {
      nn::Var y = dec(g, g.param(x), g.param(mem), 0.0);
      return nn::sum(nn::mul(y, y));
    });
  }
  {
    nn::ModelConfig mc;
    mc.d_model = 16;
    mc.n_layers = 2;
    mc.dropout = 0.0;
    mc.max_seq = 10;
    nn::ParameterStore s;
    Rng rng(7);
    const nn::EncoderDecoder ed(s, "m", mc, 9, rng);
    const auto src = s.add("src", 5, 16, nn::Init::kNormal, rng, 1.0);
    perturb_norms(s, rng);
    const std::vector<int> prefix = {1, 4, 7, 5};
    const std::vector<int> target = {4, 7, 5, 2};
    check("EncoderDecoder", s, [&](nn::Graph& g) {
      const nn::Var mem = ed.encode(g, g.param(src));
      return nn::scale(nn::pick_sum(ed.log_probs(g, ed.decode_hidden(g, mem, prefix)), target), -1.0);
    });
  }

  pipeline::GenerateConfig gc;
  gc.layouts = {1};
  gc.episodes_per_layout = 2;
  const auto vocab = pipeline::build_caption_vocab(pipeline::generate_records(gc));
  const auto program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  const Sample smp = first_step(vocab);
  nn::ModelConfig mc;
  mc.d_model = 16;
  mc.n_heads = 2;
  mc.n_layers = 2;
  mc.dropout = 0.0;

  models::SumConfig sc;
  sc.model = mc;
  models::SumModel sum(vocab, sc, 11);
  {
    Rng rng(12);
    perturb_norms(sum.params(), rng);
    const std::vector<int> prefix(smp.caption.ids.begin(), smp.caption.ids.end() - 1);
    const std::vector<int> target(smp.caption.ids.begin() + 1, smp.caption.ids.end());
    check("SumModel", sum.params(), [&](nn::Graph& g) {
      return nn::scale(nn::pick_sum(sum.log_probs(g, sum.encode(g, smp.raster), prefix), target), -1.0);
    });
  }
  for (auto couple : {models::Coupling::kText, models::Coupling::kHidden}) {
    models::ApmConfig ac;
    ac.model = mc;
    ac.couple = couple;
    ac.sum_d_model = mc.d_model;
    models::ApmModel apm(vocab, program_vocab, ac, 13);
    Rng rng(14);
    perturb_norms(apm.params(), rng);
    nn::Tensor states;
    if (couple == models::Coupling::kHidden) states = sum.caption_states(smp.raster, smp.caption);
    const auto in = apm.make_input(smp.task->nl_description, smp.caption, smp.step, states);
    const auto target = apm.target_ids(smp.step);
    std::vector<int> prefix{text::kBos};
    prefix.insert(prefix.end(), target.begin(), target.end() - 1);
    check(couple == models::Coupling::kText ? "ApmModel.text" : "ApmModel.hidden", apm.params(), [&](nn::Graph& g) {
      return nn::scale(nn::pick_sum(apm.log_probs(g, apm.encode(g, in), prefix), target), -1.0);
    });
  }
  const double secs = since(t0);
  c.expect(secs < 120.0, "runtime " + num(secs, 3) + " s >= 120 s");
  return {c.ok(), "max rel err " + num(worst, 3) + " (" + worst_name + "), " + std::to_string(probes) +
                      " probes, " + num(secs, 3) + " s; " + c.summary()};
}

// ---------------------------------------------------------------- A2

Outcome run_a2() {
  const auto t0 = Clock::now();
  pipeline::GenerateConfig gc;
  gc.layouts = {1};
  gc.episodes_per_layout = 80;
  gc.seed = 11;
  auto recs = pipeline::generate_records(gc);
  if (recs.size() > 256) recs.resize(256);
  const auto vocab = pipeline::build_caption_vocab(recs);
  const auto program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  log("dataset: " + std::to_string(recs.size()) + " steps of layout 1");

  models::SumConfig sc;
  sc.model.d_model = 64;
  sc.model.n_layers = 3;
  sc.model.dropout = 0.0;
  models::SumModel sum(vocab, sc, 1);
  const auto sx = train::sum_examples(recs, vocab);
  train::TrainConfig tc;
  tc.epochs = 50;
  tc.batch_size = 2;
  tc.optim.learning_rate = 1e-3;
  tc.seed = 1;
  const auto slog = train::finetune_sum(sum, sx, tc, [](const train::EpochLog& e) {
    if (e.epoch % 10 == 9) log("sum epoch " + std::to_string(e.epoch + 1) + " loss " + num(e.loss));
  });
  const double tf = train::sum_token_accuracy(sum, sx);
  const double exact = train::sum_exact_match(sum, sx);

  models::ApmConfig ac;
  ac.model.dropout = 0.0;
  models::ApmModel apm(vocab, program_vocab, ac, 1);
  const auto ax = train::apm_examples(recs, apm, nullptr, true);
  train::TrainConfig ic = tc;
  ic.batch_size = 8;
  const auto alog = train::finetune_apm_examples(apm, ax, ic);
  const double apm_exact = train::apm_exact_match(apm, ax);
  const double secs = since(t0);

  Checks c;
  c.expect(recs.size() == 256, "dataset has " + std::to_string(recs.size()) + " steps");
  c.expect(tf >= 0.95, "SUM teacher-forced accuracy " + num(tf));
  c.expect(exact >= 0.90, "SUM exact captions " + num(exact));
  c.expect(apm_exact >= 0.90, "APM exact steps " + num(apm_exact));
  c.expect(slog.epochs.size() <= 50 && alog.epochs.size() <= 50, "more than 50 epochs");
  c.expect(secs < 600.0, "runtime " + num(secs, 3) + " s >= 600 s");
  return {c.ok(), "SUM tf acc " + num(tf) + ", SUM exact " + num(exact) + " (" + std::to_string(slog.epochs.size()) +
                      " epochs), APM exact " + num(apm_exact) + " (" + std::to_string(alog.epochs.size()) +
                      " epochs), " + num(secs, 3) + " s; " + c.summary()};
}

// ---------------------------------------------------------------- A3

Outcome run_a3() {
  const auto t0 = Clock::now();
  const auto recs = pipeline::generate_records(layout_set(12, 5));
  const auto vocab = pipeline::build_caption_vocab(recs);
  const auto program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  const std::vector<int> layouts = {1, 2, 3, 4, 5, 6, 7};
  const auto held = train::sample_tasks(layouts, 50, 900);
  models::OracleCaptioner cap(vocab, world::View::kAuto);
  const models::RolloutConfig env;

  double gain_sum = 0;
  std::string per_seed;
  Checks c;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    models::ApmConfig ac;
    ac.model.d_model = 32;
    ac.model.n_layers = 1;
    ac.model.dropout = 0.0;
    models::ApmModel apm(vocab, program_vocab, ac, seed);
    const auto ex = train::apm_examples(recs, apm, nullptr, true);
    train::TrainConfig il;
    il.epochs = 6;
    il.seed = seed;
    train::finetune_apm_examples(apm, ex, il);
    const double before = metrics::execution_rate(train::evaluate_policy(apm, cap, held, env));

    const auto tasks = train::sample_tasks(layouts, 50, 100 + seed);
    train::TrainConfig rl;
    rl.batch_size = 4;
    rl.epochs = 1000;
    rl.max_updates = 200;
    rl.seed = seed;
    rl.oracle_captions = true;
    rl.reward_convergence = 0;
    const auto rlog = train::finetune_apm_rl(apm, cap, tasks, rl, env);
    const auto after_tr = train::evaluate_policy(apm, cap, held, env);
    const double after = metrics::execution_rate(after_tr);
    const long updates = rlog.epochs.empty() ? 0 : rlog.epochs.back().updates;
    log("seed " + std::to_string(seed) + ": execution " + num(before) + " -> " + num(after) + " after " +
        std::to_string(updates) + " updates, success " + num(metrics::episode_success_rate(after_tr)));
    c.expect(updates == 200, "seed " + std::to_string(seed) + " ran " + std::to_string(updates) + " updates");
    gain_sum += after - before;
    per_seed += (per_seed.empty() ? "" : ", ") + num(before, 3) + "->" + num(after, 3);
  }
  const double gain = gain_sum / 3.0;
  const double secs = since(t0);
  c.expect(gain >= 0.10, "mean gain " + num(gain));
  c.expect(secs < 900.0, "runtime " + num(secs, 3) + " s >= 900 s");
  return {c.ok(), "held-task execution " + per_seed + ", mean gain " + num(100 * gain, 3) + " points, " +
                      num(secs, 3) + " s; " + c.summary()};
}

// ---------------------------------------------------------------- A4

Outcome run_a4() {
  const auto t0 = Clock::now();
  const auto recs = pipeline::generate_records(layout_set(12, 5));
  const auto vocab = pipeline::build_caption_vocab(recs);
  const auto program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  nn::ModelConfig mc;
  mc.d_model = 32;
  mc.n_layers = 2;
  mc.dropout = 0.0;

  models::SumConfig sc;
  sc.model = mc;
  models::SumModel sum_zero(vocab, sc, 1), sum_tuned(vocab, sc, 1);
  train::TrainConfig tc;
  tc.epochs = 40;
  tc.seed = 1;
  train::finetune_sum(sum_tuned, train::sum_examples(recs, vocab), tc);

  models::ApmConfig ac;
  ac.model = mc;
  models::ApmModel apm_zero(vocab, program_vocab, ac, 2), apm_tuned(vocab, program_vocab, ac, 2);
  tc.epochs = 20;
  train::finetune_apm_il(apm_tuned, sum_tuned, recs, tc);

  const std::vector<int> layouts = {1, 2, 3, 4, 5, 6, 7};
  const auto held = train::sample_tasks(layouts, 50, 900);
  const models::RolloutConfig env;
  double rate[2][2];
  std::string table;
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) {
      models::ModelCaptioner cap(s ? sum_tuned : sum_zero);
      const auto tr = train::evaluate_policy(a ? apm_tuned : apm_zero, cap, held, env);
      rate[s][a] = metrics::execution_rate(tr);
      const std::string cell = std::string("SUM ") + (s ? "tuned" : "zero") + " x APM " + (a ? "tuned" : "zero");
      log(cell + ": execution " + num(rate[s][a]) + ", success " + num(metrics::episode_success_rate(tr)));
      table += (table.empty() ? "" : ", ") + cell + " " + num(rate[s][a], 3);
    }
  }
  Checks c;
  const double both = rate[1][1], none = rate[0][0];
  c.expect(rate[0][0] < 0.10 && rate[1][0] < 0.10, "untrained APM execution >= 0.10");
  // Substantially: at least 20 absolute points above the untrained policy.
  c.expect(both >= std::max(rate[0][0], rate[1][0]) + 0.20, "tuned APM not substantially above untrained");
  c.expect(both > rate[0][1] && both > rate[1][0], "both-tuned is not best");
  c.expect(none <= rate[0][1] && none <= rate[1][0], "both-zero is not worst");
  return {c.ok(), table + ", " + num(since(t0), 3) + " s; " + c.summary()};
}

// ---------------------------------------------------------------- A5

Outcome run_a5() {
  const auto t0 = Clock::now();
  Checks c;
  oracle::ToyPolicy p(1, 0.7);
  const oracle::ToyReward reward = [](const std::vector<int>& s) {
    double v = 0;
    for (int t : s) v += t == 2 ? 1.0 : 0.0;
    return v - 0.3 * static_cast<double>(s.size());
  };
  const auto exact = oracle::toy_exact_gradient(p, reward);
  const double baseline = reward(p.greedy());

  // One draw is the estimator over k sampled sequences with the greedy
  // baseline; the mean over draws equals the mean over all samples.
  constexpr int kDraws = 10000;
  const int k = train::TrainConfig{}.k;
  const long n = static_cast<long>(kDraws) * k;
  constexpr int kChunk = 500;
  Rng rng(18);
  p.store.zero_grad();
  for (long done = 0; done < n; done += kChunk) {
    nn::Graph g(&p.store);
    std::vector<train::RlSample> batch;
    for (int i = 0; i < kChunk; ++i) {
      const auto q = p.sample(rng);
      batch.push_back({p.logprob(g, q), reward(q)});
    }
    train::reinforce_grad(batch, baseline, static_cast<double>(kChunk) / static_cast<double>(n));
  }
  int coords = 0, within = 0;
  double worst = 0;
  for (size_t i = 0; i < exact.size(); ++i) {
    const auto grad = p.store.all()[i].grad.values();
    for (size_t j = 0; j < exact[i].size(); ++j) {
      const double e = exact[i][j];
      if (std::fabs(e) <= 1e-3) continue;
      const double rel = std::fabs(-grad[j] - e) / std::fabs(e);
      worst = std::max(worst, rel);
      ++coords;
      within += rel < 0.05;
    }
  }
  c.expect(within == coords, std::to_string(coords - within) + "/" + std::to_string(coords) +
                                 " coordinates off by >= 5% (worst " + num(100 * worst, 3) + "%)");

  // Constant reward with b = r: every coefficient is zero.
  p.store.zero_grad();
  {
    nn::Graph g(&p.store);
    std::vector<train::RlSample> batch;
    for (int i = 0; i < 64; ++i) batch.push_back({p.logprob(g, p.sample(rng)), 2.5});
    train::reinforce_grad(batch, 2.5);
  }
  double max_abs = 0;
  for (const auto& prm : p.store.all()) {
    for (double v : prm.grad.values()) max_abs = std::max(max_abs, std::fabs(v));
  }
  c.expect(max_abs == 0.0, "constant-reward gradient " + num(max_abs, 3));
  return {c.ok(), std::to_string(kDraws) + " draws x " + std::to_string(k) + " samples, " + std::to_string(within) +
                      "/" + std::to_string(coords) + " coordinates within 5% (worst " + num(100 * worst, 3) +
                      "%), constant-reward max |g| " + num(max_abs, 3) + ", " + num(since(t0), 3) + " s; " +
                      c.summary()};
}

// ---------------------------------------------------------------- A6

metrics::Tokens words(const std::string& s) { return text::split_words(s); }

metrics::Corpus one(const std::string& cand, const std::vector<std::string>& refs) {
  metrics::CorpusItem it{words(cand), {}};
  for (const auto& r : refs) it.references.push_back(words(r));
  return {it};
}

Outcome run_a6() {
  const auto t0 = Clock::now();
  Checks c;
  auto near = [&](double got, double want, const std::string& what, double tol = 1e-12) {
    c.expect(std::fabs(got - want) <= tol, what + " = " + num(got, 10) + ", want " + num(want, 10));
  };

  Rng rng(11);
  double max_diff = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto items = oracle::random_corpus(rng, 1 + static_cast<int>(rng.below(6)), 5);
    metrics::Corpus corpus;
    for (const auto& it : items) corpus.push_back({it.cand, it.refs});
    for (int n = 1; n <= 4; ++n) max_diff = std::max(max_diff, std::fabs(metrics::bleu(corpus, n) - oracle::bleu(items, n)));
    max_diff = std::max(max_diff, std::fabs(metrics::rouge_l(corpus) - oracle::rouge_l(items)));
  }
  c.expect(max_diff <= 1e-9, "brute-force disagreement " + num(max_diff, 3));

  // Hand examples.
  near(metrics::bleu(one("the agent walks to the fridge", {"the agent walks to the fridge"}), 4), 1.0, "BLEU-4 identity");
  near(metrics::bleu(one("the the the", {"the cat"}), 1), 1.0 / 3.0, "BLEU-1 clipping");
  near(metrics::bleu(one("a b", {"a", "a b c"}), 1), 1.0, "BLEU brevity tie");
  near(metrics::bleu(one("a b", {"a b c d"}), 1), std::exp(1.0 - 2.0), "BLEU brevity penalty");
  near(metrics::bleu(one("a b c", {"a c b"}), 3, {true}), std::cbrt(1.0 / 3.0 * 0.5), "smoothed BLEU-3");
  const double pr = 1.0, rc = 2.0 / 3.0, b2 = 1.44;
  near(metrics::rouge_l(one("the cat", {"the cat sat"})), (1 + b2) * pr * rc / (rc + b2 * pr), "ROUGE-L the cat");
  near(metrics::meteor_lite(one("walking", {"walks"})), 0.5, "METEOR stem match");
  near(metrics::meteor_lite(one("b a", {"a b"})), 0.5, "METEOR chunk penalty");
  near(metrics::spice_lite(one("open fridge", {"closed fridge"})), 0.5, "SPICE state mismatch");
  near(metrics::cider({{words("a b c d"), {words("a b c d")}}, {words("x y z w"), {words("x y z w")}}}), 10.0,
       "CIDEr unique identity", 1e-9);

  // Extremes for all five metrics.
  const std::string s1 = "the agent walks to the closed fridge", s2 = "the agent sits on the sofa";
  const metrics::Corpus same = {{words(s1), {words(s1)}}, {words(s2), {words(s2)}}};
  const metrics::Corpus apart = {{words("p q r"), {words(s1)}}, {words("s t u"), {words(s2)}}};
  const auto hi = metrics::score_captions(same);
  const auto lo = metrics::score_captions(apart);
  for (double v : {hi.bleu1, hi.bleu2, hi.bleu3, hi.bleu4}) near(v, 1.0, "BLEU identity");
  near(hi.rouge_l, 1.0, "ROUGE-L identity");
  near(hi.spice, 1.0, "SPICE identity");
  // METEOR peaks at 1 - 0.5 / len^3 for one aligned chunk.
  const double m1 = 1 - 0.5 * std::pow(1.0 / 7, 3), m2 = 1 - 0.5 * std::pow(1.0 / 6, 3);
  near(hi.meteor, (m1 + m2) / 2, "METEOR identity");
  near(metrics::cider({{words("a b c d"), {words("a b c d")}}, {words("v w x y z"), {words("v w x y z")}}}),
       10.0, "CIDEr identity", 1e-9);
  for (double v : {lo.bleu1, lo.bleu2, lo.bleu3, lo.bleu4, lo.rouge_l, lo.meteor, lo.cider, lo.spice}) {
    near(v, 0.0, "disjoint score");
  }
  return {c.ok(), "max brute-force diff " + num(max_diff, 3) + " on 100 corpora, " + num(since(t0), 3) + " s; " +
                      c.summary()};
}

// ---------------------------------------------------------------- A7

Outcome run_a7() {
  const auto t0 = Clock::now();
  const auto recs = pipeline::generate_records(layout_set(2, 21));
  const auto vocab = pipeline::build_caption_vocab(recs);
  const auto program_vocab = pipeline::build_program_vocab(dsl::kDefaultMaxId);
  const auto tasks = world::builtin_tasks();
  Checks c;
  int greedy_eq = 0, monotone = 0, beam_differs = 0;
  for (uint64_t m = 0; m < 100; ++m) {
    Rng rng(1000 + m);
    models::ApmConfig ac;
    ac.model.d_model = 16;
    ac.model.n_heads = 2;
    ac.model.n_layers = 1;
    ac.model.dropout = 0.0;
    models::ApmModel apm(vocab, program_vocab, ac, m);
    // Sharpen the random model so paths differ in probability.
    for (auto& p : apm.params().all()) {
      for (auto& v : p.value.values()) v *= 3.0;
    }
    const auto& rec = recs[rng.below(recs.size())];
    const auto& task = tasks[rng.below(tasks.size())];
    const auto in = apm.make_input(task.nl_description, text::tokenize(rec.caption, vocab), std::nullopt);
    const int len = ac.max_action_len;
    const auto g = models::apm_decide(apm, in, nn::DecodeConfig::greedy(len));
    const auto b1 = models::apm_decide(apm, in, nn::DecodeConfig::beam_search(1, len));
    greedy_eq += g.ids == b1.ids && std::fabs(g.logprob - b1.logprob) <= 1e-12;
    double prev = -1e300;
    bool mono = true;
    for (int k : {1, 2, 4, 8}) {
      const double lp = models::apm_decide(apm, in, nn::DecodeConfig::beam_search(k, len)).logprob;
      mono = mono && lp >= prev - 1e-12;
      prev = lp;
    }
    monotone += mono;
    beam_differs += prev > g.logprob + 1e-9;
  }
  c.expect(greedy_eq == 100, std::to_string(100 - greedy_eq) + " pairs with Beam(1) != Greedy");
  c.expect(monotone == 100, std::to_string(100 - monotone) + " pairs with non-monotone beam score");
  return {c.ok(), "Beam(1)==Greedy " + std::to_string(greedy_eq) + "/100, monotone " + std::to_string(monotone) +
                      "/100 (beam 8 beats greedy on " + std::to_string(beam_differs) + "), " + num(since(t0), 3) +
                      " s; " + c.summary()};
}

// ---------------------------------------------------------------- A8

dsl::Program random_program(Rng& rng) {
  static const std::vector<std::string> names = {"fridge", "groceries", "tv", "mug", "coffee_table", "sofa", "lamp"};
  dsl::Program p;
  const auto verbs = dsl::registered_verbs();
  const size_t n = rng.below(7);
  for (size_t i = 0; i < n; ++i) {
    const auto& v = verbs[rng.below(verbs.size())];
    dsl::ActionStep s{std::string(v.name), {}};
    for (int k = 0; k < v.arity; ++k) {
      s.args.push_back({names[rng.below(names.size())], static_cast<int>(1 + rng.below(30))});
    }
    p.steps.push_back(std::move(s));
  }
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

Outcome run_a8() {
  const auto t0 = Clock::now();
  Checks c;
  Rng rng(2024);
  int round_trips = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_program(rng);
    const auto back = dsl::parse_program(dsl::format_program(p));
    round_trips += back.ok() && back.value() == p;
  }
  c.expect(round_trips == 1000, std::to_string(1000 - round_trips) + " programs failed the round trip");

  pipeline::GenerateConfig gc = layout_set(10, 31);
  gc.views = {world::View::kAuto, world::View::kFirstPerson, world::View::kFrontPerson};
  const auto recs = pipeline::generate_records(gc);
  std::map<std::pair<int, int>, std::vector<const pipeline::EpisodeRecord*>> episodes;
  for (const auto& r : recs) episodes[{r.episode, static_cast<int>(r.view)}].push_back(&r);
  long replayed = 0;
  for (const auto& [key, steps] : episodes) {
    const auto& first = *steps.front();
    auto w = world::gen_layout(first.layout_id, first.world_seed);
    auto agent = world::initial_agent(w, first.seed);
    const world::Task* task = world::find_task(first.task);
    std::optional<dsl::ActionStep> prev;
    bool ok = task != nullptr;
    for (const auto* r : steps) {
      if (!ok) break;
      const auto parsed = dsl::parse_program(r->action);
      ok = parsed.ok() && parsed.value().steps.size() == 1 &&
           r->raster == world::encode_rle(world::render(w, agent, r->view)) &&
           r->caption == text::caption_oracle(w, agent, r->view, prev);
      if (!ok) break;
      const auto& act = parsed.value().steps[0];
      auto res = world::step(w, agent, act);
      ok = res.ok();
      if (!ok) break;
      w = res.value().world;
      agent = res.value().agent;
      prev = act;
      ++replayed;
    }
    c.expect(ok && world::check_goal(w, agent, *task), "episode " + std::to_string(key.first) + " did not replay");
  }
  c.expect(replayed == static_cast<long>(recs.size()),
           std::to_string(recs.size() - static_cast<size_t>(replayed)) + " records did not replay");

  const fs::path root = fs::temp_directory_path() / "visact_acceptance_a8";
  fs::remove_all(root);
  pipeline::GenerateConfig dc = layout_set(3, 17);
  const auto ma = pipeline::generate_dataset(dc, (root / "a").string());
  const auto mb = pipeline::generate_dataset(dc, (root / "b").string());
  const auto fa = read_dir(root / "a");
  c.expect(ma.content_hash == mb.content_hash && fa == read_dir(root / "b"), "dataset bytes differ between runs");
  dc.seed = 18;
  c.expect(pipeline::generate_dataset(dc, (root / "c").string()).content_hash != ma.content_hash,
           "different seed produced identical data");
  fs::remove_all(root);
  return {c.ok(), "round trip " + std::to_string(round_trips) + "/1000, replayed " + std::to_string(replayed) + "/" +
                      std::to_string(recs.size()) + " records of " + std::to_string(episodes.size()) +
                      " episodes, " + std::to_string(fa.size()) + " files byte-identical, " + num(since(t0), 3) +
                      " s; " + c.summary()};
}

// ---------------------------------------------------------------- A9

Outcome run_a9() {
  const auto t0 = Clock::now();
  Checks c;
  const fs::path root = fs::temp_directory_path() / "visact_acceptance_a9";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = VISACT_CLI_PATH;
  const std::string d = (root / "data").string(), sum = (root / "sum").string(), il = (root / "il").string(),
                    rl = (root / "rl").string(), ev = (root / "eval").string();
  const std::string logf = (root / "log.txt").string();
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"gen-data", "gen-data --layouts 1-7 --episodes 6 --seed 3 --out " + d},
      {"train-sum", "train-sum --data " + d + " --out " + sum + " --epochs 15 --d-model 32 --dropout 0"},
      {"train-apm-il", "train-apm-il --data " + d + " --sum-checkpoint " + sum + "/sum.ckpt --out " + il +
                           " --epochs 15 --d-model 32 --dropout 0"},
      {"train-apm-rl", "train-apm-rl --data " + d + " --sum-checkpoint " + sum + "/sum.ckpt --apm-checkpoint " + il +
                           "/apm.ckpt --out " + rl + " --updates 20 --tasks 20 --batch-size 4"},
      {"eval", "eval --data " + d + " --sum-checkpoint " + sum + "/sum.ckpt --apm-checkpoint " + rl +
                   "/apm.ckpt --out " + ev},
  };
  bool ran = true;
  for (const auto& [name, args] : steps) {
    const auto s0 = Clock::now();
    const int rc = std::system(("\"" + cli + "\" " + args + " >>" + logf + " 2>&1").c_str());
    log(name + ": exit " + std::to_string(rc) + ", " + num(since(s0), 3) + " s");
    c.expect(rc == 0, name + " exited with " + std::to_string(rc));
    if (rc != 0) {
      ran = false;
      break;
    }
  }
  std::string found;
  if (ran) {
    nlohmann::json report;
    std::ifstream in(fs::path(ev) / "report.json");
    c.expect(static_cast<bool>(in), "report.json missing");
    if (in) {
      in >> report;
      const auto& m = report["metrics"];
      for (const char* key : {"BLEU-1", "BLEU-2", "BLEU-3", "BLEU-4", "ROUGE-L", "METEOR", "CIDEr", "SPICE",
                              "execution_rate", "episode_success_rate"}) {
        const bool has = m.contains(key) && m[key].is_number();
        c.expect(has, std::string("report lacks ") + key);
        if (has) found += (found.empty() ? "" : ", ") + std::string(key) + " " + num(m[key].get<double>(), 3);
      }
    }
    c.expect(fs::exists(fs::path(ev) / "report.txt"), "report.txt missing");
  }
  const double secs = since(t0);
  c.expect(secs < 1200.0, "runtime " + num(secs, 3) + " s >= 1200 s");
  if (c.ok()) fs::remove_all(root);
  return {c.ok(), found + "; " + num(secs, 3) + " s; " + c.summary()};
}

}  // namespace
}  // namespace visact

int main(int argc, char** argv) {
  CLI::App app{"visact acceptance runs"};
  std::vector<std::string> only;
  app.add_option("--only", only, "Run only these criteria, e.g. --only A1 --only A5");
  CLI11_PARSE(app, argc, argv);

  using visact::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"A1", visact::run_a1}, {"A2", visact::run_a2}, {"A3", visact::run_a3},
      {"A4", visact::run_a4}, {"A5", visact::run_a5}, {"A6", visact::run_a6},
      {"A7", visact::run_a7}, {"A8", visact::run_a8}, {"A9", visact::run_a9}};
  for (const auto& name : only) {
    bool known = false;
    for (const auto& [id, fn] : all) known = known || id == name;
    if (!known) {
      std::cerr << "unknown criterion " << name << "\n";
      return 2;
    }
  }
  int failed = 0;
  for (const auto& [id, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    std::cerr << id << " running\n";
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
