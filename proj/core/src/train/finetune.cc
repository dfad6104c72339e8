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

#include "visact/train/finetune.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "visact/common/error.h"
#include "visact/common/rng.h"
#include "visact/dsl/script.h"
#include "visact/metrics/task_metrics.h"
#include "visact/nn/graph.h"
#include "visact/train/loss.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"

namespace visact::train {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

dsl::ActionStep parse_step(const std::string& text) {
  auto p = dsl::parse_program(text);
  if (!p.ok() || p.value().steps.size() != 1) throw DataFormatError("record action is not one step: " + text);
  return p.value().steps.front();
}

// Shared supervised loop: `step_loss(i, graph_seed, weight)` builds the loss
// of example i scaled by `weight`, runs backward and returns the unscaled
// loss value.
template <class StepLoss>
TrainLog supervised_loop(nn::ParameterStore& store, size_t n, const TrainConfig& cfg, const ProgressFn& progress,
                         StepLoss step_loss) {
  cfg.validate();
  if (n == 0) throw EmptyDataset("no training examples");
  TrainLog log;
  nn::Optimizer opt(store, cfg.optim);
  std::optional<double> prev;
  long updates = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = Clock::now();
    const auto batches = pipeline::make_batches(n, cfg.batch_size, mix_seed(cfg.seed, static_cast<uint64_t>(epoch)));
    double epoch_loss = 0.0;
    for (const auto& batch : batches) {
      store.zero_grad();
      const double w = 1.0 / static_cast<double>(batch.size());
      double batch_loss = 0.0;
      for (size_t i : batch) {
        batch_loss += step_loss(i, mix_seed(cfg.seed, (static_cast<uint64_t>(epoch) << 32) ^ i), w);
      }
      opt.step();
      ++updates;
      epoch_loss += batch_loss * w;
    }
    EpochLog e;
    e.epoch = epoch;
    e.loss = epoch_loss / static_cast<double>(batches.size());
    e.seconds = seconds_since(t0);
    e.updates = updates;
    log.epochs.push_back(e);
    if (progress) progress(e);
    if (prev && std::abs(*prev - e.loss) < cfg.convergence_delta) {
      log.converged = true;
      break;
    }
    prev = e.loss;
  }
  return log;
}

std::vector<int> shifted_prefix(std::span<const int> target) {
  std::vector<int> prefix{text::kBos};
  prefix.insert(prefix.end(), target.begin(), target.end());
  prefix.pop_back();
  return prefix;
}

}  // namespace

std::vector<SumExample> sum_examples(std::span<const pipeline::EpisodeRecord> records, const text::Vocab& vocab,
                                     std::optional<world::View> view, int max_caption_len) {
  std::vector<SumExample> out;
  text::TokenizeOptions opts;
  opts.max_len = max_caption_len;
  opts.truncate = true;
  for (const auto& r : records) {
    if (view && r.view != *view) continue;
    out.push_back(SumExample{world::decode_rle(r.view, r.raster), text::tokenize(r.caption, vocab, opts)});
  }
  return out;
}

std::vector<ApmExample> apm_examples(std::span<const pipeline::EpisodeRecord> records, const models::ApmModel& apm,
                                     const models::SumModel* sum, bool oracle_captions) {
  const bool hidden = apm.config().couple == models::Coupling::kHidden;
  if (hidden && !sum) throw InvalidArgument("hidden coupling needs a SUM model");
  const bool use_sum = sum && !oracle_captions;
  std::map<std::string, std::pair<text::Caption, nn::Tensor>> cache;
  text::TokenizeOptions opts;
  opts.truncate = true;
  std::vector<ApmExample> out;
  for (const auto& r : records) {
    if (sum && r.view != sum->config().view) continue;
    const world::Task* task = world::find_task(r.task);
    if (!task) throw DataFormatError("unknown task in record: " + r.task);
    auto it = cache.find(r.raster);
    if (it == cache.end()) {
      const world::Raster raster = world::decode_rle(r.view, r.raster);
      text::Caption cap = use_sum ? models::sum_caption(*sum, raster, nn::DecodeConfig::greedy(sum->config().max_caption_len))
                                  : text::tokenize(r.caption, apm.text_vocab(), opts);
      nn::Tensor states = hidden ? sum->caption_states(raster, cap) : nn::Tensor();
      // Oracle captions differ with the previous action on the same raster.
      if (use_sum) {
        it = cache.emplace(r.raster, std::make_pair(std::move(cap), std::move(states))).first;
      } else {
        std::optional<dsl::ActionStep> prev;
        if (!r.prev_action.empty()) prev = parse_step(r.prev_action);
        out.push_back(ApmExample{apm.make_input(task->nl_description, cap, prev, std::move(states)),
                                 apm.target_ids(parse_step(r.action))});
        continue;
      }
    }
    std::optional<dsl::ActionStep> prev;
    if (!r.prev_action.empty()) prev = parse_step(r.prev_action);
    out.push_back(ApmExample{apm.make_input(task->nl_description, it->second.first, prev, it->second.second),
                             apm.target_ids(parse_step(r.action))});
  }
  return out;
}

TrainLog finetune_sum(models::SumModel& sum, std::span<const SumExample> data, const TrainConfig& cfg,
                      const ProgressFn& progress) {
  return supervised_loop(sum.params(), data.size(), cfg, progress, [&](size_t i, uint64_t seed, double w) {
    const SumExample& ex = data[i];
    nn::Graph g(&sum.params(), true, seed);
    const nn::Var memory = sum.encode(g, ex.raster);
    const std::vector<int> prefix(ex.caption.ids.begin(), ex.caption.ids.end() - 1);
    const std::vector<int> target(ex.caption.ids.begin() + 1, ex.caption.ids.end());
    const nn::Var loss = ce_loss(sum.log_probs(g, memory, prefix), target);
    const double value = loss.value()(0, 0);
    g.backward(nn::scale(loss, w));
    return value;
  });
}

TrainLog finetune_apm_examples(models::ApmModel& apm, std::span<const ApmExample> data, const TrainConfig& cfg,
                               const ProgressFn& progress) {
  return supervised_loop(apm.params(), data.size(), cfg, progress, [&](size_t i, uint64_t seed, double w) {
    const ApmExample& ex = data[i];
    nn::Graph g(&apm.params(), true, seed);
    const nn::Var memory = apm.encode(g, ex.input);
    const nn::Var loss = ce_loss(apm.log_probs(g, memory, shifted_prefix(ex.target)), ex.target);
    const double value = loss.value()(0, 0);
    g.backward(nn::scale(loss, w));
    return value;
  });
}

TrainLog finetune_apm_il(models::ApmModel& apm, const models::SumModel& sum,
                         std::span<const pipeline::EpisodeRecord> records, const TrainConfig& cfg,
                         const ProgressFn& progress) {
  cfg.validate();
  const auto data = apm_examples(records, apm, &sum, cfg.oracle_captions);
  return finetune_apm_examples(apm, data, cfg, progress);
}

std::vector<TaskInstance> sample_tasks(std::span<const int> layouts, int count, uint64_t seed,
                                       const std::vector<std::string>& filter) {
  if (layouts.empty()) throw EmptyTaskSet("no layouts to sample tasks from");
  std::vector<TaskInstance> out;
  Rng rng(seed);
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 100 * std::max(count, 1)) throw EmptyTaskSet("no achievable task matches the filter");
    const int layout = layouts[rng.below(layouts.size())];
    const uint64_t s = rng.next_u64();
    TaskInstance inst;
    inst.world = world::gen_layout(layout, s);
    inst.agent = world::initial_agent(inst.world, s);
    std::vector<const world::Task*> cands;
    for (const auto* t : world::tasks_for(inst.world)) {
      if (filter.empty() || std::find(filter.begin(), filter.end(), t->name) != filter.end()) cands.push_back(t);
    }
    if (cands.empty()) continue;
    inst.task = cands[rng.below(cands.size())];
    if (world::check_goal(inst.world, inst.agent, *inst.task)) continue;
    try {
      (void)world::expert_plan(inst.world, inst.agent, *inst.task);
    } catch (const Unachievable&) {
      continue;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<TaskInstance> tasks_from_records(std::span<const pipeline::EpisodeRecord> records) {
  std::vector<TaskInstance> out;
  std::set<int> seen;
  for (const auto& r : records) {
    if (r.t != 0 || !seen.insert(r.episode).second) continue;
    TaskInstance inst;
    inst.world = world::gen_layout(r.layout_id, r.world_seed);
    inst.agent = world::initial_agent(inst.world, r.seed);
    inst.task = world::find_task(r.task);
    if (!inst.task) throw DataFormatError("unknown task in record: " + r.task);
    out.push_back(std::move(inst));
  }
  return out;
}

double candidate_reward(const world::SceneGraph& w, const world::AgentState& a, const world::Task& task,
                        const models::ApmAction& action, const TrainConfig& cfg,
                        const std::optional<dsl::ActionStep>& expert) {
  bool executed = false;
  bool goal = false;
  if (const auto* step = std::get_if<dsl::ActionStep>(&action)) {
    auto res = world::step(w, a, *step);
    if (res.ok()) {
      executed = true;
      goal = world::check_goal(res.value().world, res.value().agent, task);
    }
  }
  double r = world::env_reward(executed, goal, cfg.reward);
  if (cfg.match_expert && expert) {
    if (const auto* step = std::get_if<dsl::ActionStep>(&action); step && *step == *expert) r += cfg.match_bonus;
  }
  return r;
}

namespace {

struct VisitedState {
  const models::StepRecord* rec;
  const world::Task* task;
  double ret;  // discounted return from this step on
};

std::vector<nn::Hypothesis> decode_from(const models::ApmModel& apm, const models::ApmInput& in,
                                        const nn::DecodeConfig& d) {
  nn::Graph g(apm.params());
  const nn::Var memory = apm.encode(g, in);
  std::vector<int> prefix;
  nn::DecodeConfig dc = d;
  dc.max_len = std::min(d.max_len, apm.config().max_action_len);
  auto next = [&](std::span<const int> generated) {
    prefix.assign(1, text::kBos);
    prefix.insert(prefix.end(), generated.begin(), generated.end());
    const nn::Tensor lp = apm.log_probs(g, memory, prefix).value();
    auto last = lp.row(lp.rows() - 1);
    return std::vector<double>(last.begin(), last.end());
  };
  return nn::decode(next, dc, text::kEos);
}

}  // namespace

TrainLog finetune_apm_rl(models::ApmModel& apm, models::Captioner& captioner, std::span<const TaskInstance> tasks,
                         const TrainConfig& cfg, const models::RolloutConfig& env, const ProgressFn& progress) {
  cfg.validate();
  if (tasks.empty()) throw EmptyTaskSet("no tasks for reinforcement fine-tuning");
  for (const auto& t : tasks) {
    if (!t.task) throw EmptyTaskSet("task instance without a task");
  }
  models::RolloutConfig rc = env;
  rc.max_steps = cfg.max_steps;
  rc.reward = cfg.reward;
  TrainLog log;
  nn::Optimizer opt(apm.params(), cfg.optim);
  long updates = 0;
  std::vector<double> reward_curve;
  bool capped = false;
  for (int epoch = 0; epoch < cfg.epochs && !capped; ++epoch) {
    const auto t0 = Clock::now();
    const uint64_t eseed = mix_seed(cfg.seed, 0x71000 + static_cast<uint64_t>(epoch));
    nn::DecodeConfig sample = cfg.rl_decode;
    sample.seed = eseed;
    models::ModelPolicy policy(apm, sample);
    const auto batches = pipeline::make_batches(tasks.size(), cfg.batch_size, eseed);
    std::vector<models::Trajectory> collected;
    double surrogate = 0.0;
    int epoch_updates = 0;
    for (const auto& batch : batches) {
      std::vector<models::Trajectory> trajs;
      for (size_t i : batch) {
        policy.set_episode(static_cast<uint64_t>(epoch) * tasks.size() + i);
        trajs.push_back(models::rollout(policy, captioner, tasks[i].world, tasks[i].agent, *tasks[i].task, rc));
      }
      // Group by task before the update.
      std::stable_sort(trajs.begin(), trajs.end(),
                       [](const models::Trajectory& a, const models::Trajectory& b) { return a.task < b.task; });
      std::vector<VisitedState> states;
      for (const auto& tr : trajs) {
        const world::Task* task = world::find_task(tr.task);
        double g = 0.0;
        std::vector<double> rets(tr.steps.size());
        for (size_t s = tr.steps.size(); s-- > 0;) {
          g = tr.steps[s].reward + cfg.gamma * g;
          rets[s] = g;
        }
        for (size_t s = 0; s < tr.steps.size(); ++s) states.push_back({&tr.steps[s], task, rets[s]});
      }
      if (!states.empty()) {
        apm.params().zero_grad();
        const double weight = 1.0 / static_cast<double>(states.size());
        double batch_mean_return = 0.0;
        for (const auto& st : states) batch_mean_return += st.ret;
        batch_mean_return /= static_cast<double>(states.size());
        for (size_t si = 0; si < states.size(); ++si) {
          const auto& st = states[si];
          const models::StepRecord& rec = *st.rec;
          std::optional<dsl::ActionStep> expert;
          if (cfg.match_expert) {
            try {
              const auto plan = world::expert_plan(rec.world, rec.agent, *st.task);
              if (!plan.steps.empty()) expert = plan.steps.front();
            } catch (const Unachievable&) {
            }
          }
          auto reward_of = [&](std::span<const int> ids) {
            return candidate_reward(rec.world, rec.agent, *st.task, apm.action_from_ids(ids), cfg, expert);
          };
          std::vector<std::vector<int>> cands;
          std::vector<double> rewards;
          double b = 0.0;
          if (cfg.credit == Credit::kReturn) {
            cands.push_back(rec.action_ids);
            rewards.push_back(st.ret);
            if (cfg.baseline != BaselineMode::kNone) b = batch_mean_return;
          } else {
            for (int c = 0; c < cfg.k; ++c) {
              nn::DecodeConfig d = cfg.rl_decode;
              d.seed = mix_seed(eseed, (static_cast<uint64_t>(updates) << 24) ^ (si << 8) ^ static_cast<uint64_t>(c));
              auto h = decode_from(apm, rec.input, d);
              cands.push_back(h.front().tokens);
              rewards.push_back(reward_of(cands.back()));
            }
            if (cfg.baseline == BaselineMode::kGreedySelfCritical) {
              b = reward_of(decode_from(apm, rec.input, nn::DecodeConfig::greedy()).front().tokens);
            } else if (cfg.baseline == BaselineMode::kBeamMean) {
              const auto beams = decode_from(apm, rec.input, nn::DecodeConfig::beam_search(cfg.k));
              for (const auto& h : beams) b += reward_of(h.tokens);
              b /= static_cast<double>(beams.size());
            }
          }
          bool any = false;
          for (double r : rewards) any = any || r != b;
          if (!any) continue;
          nn::Graph g(&apm.params(), false, 0);
          const nn::Var memory = apm.encode(g, rec.input);
          std::vector<RlSample> samples;
          for (size_t c = 0; c < cands.size(); ++c) {
            const auto& toks = cands[c];
            if (toks.empty()) continue;
            std::vector<int> prefix{text::kBos};
            prefix.insert(prefix.end(), toks.begin(), toks.end() - 1);
            samples.push_back({sequence_logprob(apm.log_probs(g, memory, prefix), toks), rewards[c]});
          }
          if (!samples.empty()) surrogate += reinforce_grad(samples, b, weight);
        }
        opt.step();
        ++updates;
        ++epoch_updates;
      }
      for (auto& tr : trajs) collected.push_back(std::move(tr));
      if (cfg.max_updates > 0 && updates >= cfg.max_updates) {
        capped = true;
        break;
      }
    }
    EpochLog e;
    e.epoch = epoch;
    e.loss = epoch_updates > 0 ? surrogate / epoch_updates : 0.0;
    double total = 0.0;
    long n = 0;
    for (const auto& tr : collected) {
      for (const auto& s : tr.steps) {
        total += s.reward;
        ++n;
      }
    }
    e.mean_reward = n > 0 ? total / static_cast<double>(n) : 0.0;
    e.execution_rate = n > 0 ? metrics::execution_rate(collected) : 0.0;
    e.seconds = seconds_since(t0);
    e.updates = updates;
    log.epochs.push_back(e);
    if (progress) progress(e);
    reward_curve.push_back(e.mean_reward);
    const size_t m = reward_curve.size();
    if (cfg.reward_convergence > 0 && m >= 20) {
      double cur = 0.0, prev = 0.0;
      for (size_t i = 0; i < 10; ++i) {
        cur += reward_curve[m - 1 - i];
        prev += reward_curve[m - 11 - i];
      }
      if (std::abs(cur - prev) / 10.0 < cfg.reward_convergence) {
        log.converged = true;
        break;
      }
    }
  }
  return log;
}

TrainLog finetune_apm_rl(models::ApmModel& apm, const models::SumModel& sum, std::span<const TaskInstance> tasks,
                         const TrainConfig& cfg, const ProgressFn& progress) {
  models::RolloutConfig env;
  env.view = sum.config().view;
  env.render = sum.config().render;
  if (cfg.oracle_captions && apm.config().couple == models::Coupling::kText) {
    models::OracleCaptioner cap(apm.text_vocab(), env.view);
    return finetune_apm_rl(apm, cap, tasks, cfg, env, progress);
  }
  models::ModelCaptioner cap(sum, nn::DecodeConfig::greedy(sum.config().max_caption_len),
                             apm.config().couple == models::Coupling::kHidden);
  return finetune_apm_rl(apm, cap, tasks, cfg, env, progress);
}

}  // namespace visact::train
