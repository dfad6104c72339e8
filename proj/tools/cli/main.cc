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


// visact: dataset generation, the three fine-tuning stages, evaluation and
// policy rollouts behind one subcommand-style binary.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "run_config.h"
#include "visact/common/error.h"
#include "visact/metrics/caption_metrics.h"
#include "visact/metrics/task_metrics.h"
#include "visact/models/rollout.h"
#include "visact/text/caption.h"
#include "visact/train/evaluate.h"
#include "visact/train/finetune.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/render.h"

extern char** environ;

namespace visact::cli {
namespace {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kCheckpoint = 4 };

struct UsageError : Error {
  using Error::Error;
};

// A flag writes its value into the config tree at `key`.
struct Override {
  std::string key;
  Json value;
};

using Convert = std::function<Json(const std::string&)>;

std::string type_for(const std::string& flag) {
  static const std::map<std::string, std::string> kTypes = {
      {"--data", "DIR"},          {"--out", "DIR"},          {"--sum-checkpoint", "FILE"},
      {"--apm-checkpoint", "FILE"}, {"--predictions", "FILE"}, {"--references", "FILE"},
      {"--layouts", "LIST"},      {"--views", "LIST"},       {"--view", "NAME"},
      {"--couple", "NAME"},       {"--baseline", "NAME"},    {"--split", "NAME"},
      {"--task", "NAME"},         {"--decode", "NAME"},      {"--lr", "FLOAT"},
      {"--dropout", "FLOAT"},     {"--temperature", "FLOAT"}};
  auto it = kTypes.find(flag);
  return it == kTypes.end() ? "INT" : it->second;
}

class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {}

  void value(const std::string& name, const std::string& key, const std::string& help, Convert conv = parse_value) {
    app_->add_option_function<std::string>(
            name, [this, key, conv](const std::string& v) { pending_.push_back({key, conv(v)}); }, help)
        ->type_name(type_for(name));
  }
  void toggle(const std::string& name, const std::string& key, const std::string& help) {
    app_->add_flag_function(
        name, [this, key](int64_t) { pending_.push_back({key, true}); }, help);
  }
  std::vector<Override>& pending() { return pending_; }

 private:
  CLI::App* app_;
  std::vector<Override> pending_;
};

Json int_list(const std::string& s) { return Json(parse_int_list(s)); }

Json string_list(const std::string& s) {
  Json out = Json::array();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json as_string(const std::string& s) { return Json(s); }

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Flags> flags;
  std::string config_path;
  std::vector<std::string> sets;
};

void common_flags(Command& c) {
  c.app->add_option("--config", c.config_path, "JSON config file (defaults < file < VISACT_* env < flags)")
      ->type_name("FILE");
  c.app->add_option("--set", c.sets, "Override any config key, e.g. --set train.optim.learning_rate=3e-4")
      ->type_name("KEY=VALUE");
  c.flags->value("--seed", "seed", "Seed for data generation, initialisation and training");
  c.flags->value("--threads", "threads", "Worker cap (default 1)");
  c.flags->value("--data", "data", "Dataset directory", as_string);
  c.flags->value("--out", "out", "Output directory", as_string);
}

void train_flags(Command& c, const std::string& model) {
  c.flags->value("--epochs", "train.epochs", "Training epochs");
  c.flags->value("--batch-size", "train.batch_size", "Examples per optimizer step");
  c.flags->value("--lr", "train.optim.learning_rate", "Learning rate");
  c.flags->value("--d-model", model + ".model.d_model", "Model width");
  c.flags->value("--layers", model + ".model.n_layers", "Encoder and decoder layers");
  c.flags->value("--heads", model + ".model.n_heads", "Attention heads");
  c.flags->value("--dropout", model + ".model.dropout", "Dropout rate");
}

RunConfig resolve(Command& c) {
  ConfigBuilder b;
  if (!c.config_path.empty()) b.merge_file(c.config_path);
  for (const auto& name : b.merge_env(environ)) std::cerr << "warning: ignoring unknown " << name << "\n";
  for (const auto& o : c.flags->pending()) b.set(o.key, o.value);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE, got '" + s + "'");
    b.set(s.substr(0, eq), parse_value(s.substr(eq + 1)));
  }
  return b.build();
}

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError(flag + " is required");
}

void start_run_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  std::ofstream(fs::path(cfg.out) / "config.json") << to_json(cfg).dump(2) << "\n";
}

void log_event(const std::string& event, Json fields) {
  Json line{{"event", event}};
  for (auto it = fields.begin(); it != fields.end(); ++it) line[it.key()] = it.value();
  std::cerr << line.dump() << std::endl;
}

train::ProgressFn progress(const std::string& stage) {
  return [stage](const train::EpochLog& e) {
    Json j = train::to_json(e);
    j["stage"] = stage;
    log_event("epoch", j);
  };
}

std::vector<pipeline::EpisodeRecord> split_records(const pipeline::Dataset& ds, const std::string& split,
                                                   world::View view) {
  auto recs = pipeline::load_split(ds, *pipeline::parse_split(split), view);
  if (recs.empty()) {
    throw DataFormatError("split '" + split + "' has no records for view '" + std::string(world::view_name(view)) +
                          "'");
  }
  return recs;
}

int cmd_gen_data(const RunConfig& cfg) {
  require(cfg.out, "--out");
  start_run_dir(cfg);
  const auto m = pipeline::generate_dataset(cfg.dataset, cfg.out, [](const std::string& s) {
    log_event("gen-data", {{"message", s}});
  });
  long total = 0;
  for (const auto& [v, n] : m.records_per_view) total += n;
  std::cout << "records " << total << "\n"
            << "episodes train " << m.train_episodes.size() << " val " << m.val_episodes.size() << " test "
            << m.test_episodes.size() << " skipped " << m.skipped_episodes << "\n"
            << "content_hash " << m.content_hash << "\n";
  return kOk;
}

int cmd_train_sum(const RunConfig& cfg) {
  require(cfg.data, "--data");
  require(cfg.out, "--out");
  const auto ds = pipeline::open_dataset(cfg.data);
  start_run_dir(cfg);
  const auto train_recs = split_records(ds, "train", cfg.sum.view);
  const auto data = train::sum_examples(train_recs, ds.vocab, cfg.sum.view, cfg.sum.max_caption_len);
  models::SumModel sum(ds.vocab, cfg.sum, cfg.seed);
  auto log = train::finetune_sum(sum, data, cfg.train, progress("sum"));
  sum.save((fs::path(cfg.out) / "sum.ckpt").string());
  log.write((fs::path(cfg.out) / "train_log.jsonl").string());
  Json summary{{"train_token_accuracy", train::sum_token_accuracy(sum, data)}};
  auto val = pipeline::load_split(ds, pipeline::Split::kVal, cfg.sum.view);
  if (!val.empty()) {
    const auto vdata = train::sum_examples(val, ds.vocab, cfg.sum.view, cfg.sum.max_caption_len);
    summary["val_token_accuracy"] = train::sum_token_accuracy(sum, vdata);
  }
  log_event("done", summary);
  std::cout << "checkpoint " << (fs::path(cfg.out) / "sum.ckpt").string() << "\n";
  return kOk;
}

models::ApmConfig apm_config_for(const RunConfig& cfg, const models::SumModel& sum) {
  models::ApmConfig a = cfg.apm;
  a.sum_d_model = sum.config().model.d_model;
  return a;
}

int cmd_train_apm_il(const RunConfig& cfg) {
  require(cfg.data, "--data");
  require(cfg.out, "--out");
  require(cfg.sum_checkpoint, "--sum-checkpoint");
  const auto ds = pipeline::open_dataset(cfg.data);
  const auto sum = models::SumModel::load(cfg.sum_checkpoint, ds.vocab);
  start_run_dir(cfg);
  const auto recs = split_records(ds, "train", sum.config().view);
  models::ApmModel apm(ds.vocab, ds.program_vocab, apm_config_for(cfg, sum), cfg.seed);
  const auto data = train::apm_examples(recs, apm, &sum, cfg.train.oracle_captions);
  auto log = train::finetune_apm_examples(apm, data, cfg.train, progress("apm-il"));
  apm.save((fs::path(cfg.out) / "apm.ckpt").string());
  log.write((fs::path(cfg.out) / "train_log.jsonl").string());
  log_event("done", {{"train_exact_match", train::apm_exact_match(apm, data)}});
  std::cout << "checkpoint " << (fs::path(cfg.out) / "apm.ckpt").string() << "\n";
  return kOk;
}

int cmd_train_apm_rl(const RunConfig& cfg) {
  require(cfg.data, "--data");
  require(cfg.out, "--out");
  require(cfg.sum_checkpoint, "--sum-checkpoint");
  require(cfg.apm_checkpoint, "--apm-checkpoint");
  const auto ds = pipeline::open_dataset(cfg.data);
  const auto sum = models::SumModel::load(cfg.sum_checkpoint, ds.vocab);
  auto apm = models::ApmModel::load(cfg.apm_checkpoint, ds.vocab, ds.program_vocab);
  start_run_dir(cfg);
  auto tasks = train::tasks_from_records(split_records(ds, "train", sum.config().view));
  if (cfg.rl_tasks > 0 && static_cast<int>(tasks.size()) > cfg.rl_tasks) tasks.resize(cfg.rl_tasks);
  auto log = train::finetune_apm_rl(apm, sum, tasks, cfg.train, progress("apm-rl"));
  apm.save((fs::path(cfg.out) / "apm.ckpt").string());
  log.write((fs::path(cfg.out) / "train_log.jsonl").string());
  std::cout << "checkpoint " << (fs::path(cfg.out) / "apm.ckpt").string() << "\n";
  return kOk;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFormatError("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

int cmd_eval(const RunConfig& cfg) {
  require(cfg.out, "--out");
  std::vector<std::string> preds, refs;
  std::optional<double> exec_rate, success_rate;
  long episodes = 0;
  const bool caption_only = !cfg.eval.predictions.empty() || !cfg.eval.references.empty();
  if (caption_only) {
    require(cfg.eval.predictions, "--predictions");
    require(cfg.eval.references, "--references");
    preds = read_lines(cfg.eval.predictions);
    refs = read_lines(cfg.eval.references);
    start_run_dir(cfg);
  } else {
    require(cfg.data, "--data");
    require(cfg.sum_checkpoint, "--sum-checkpoint");
    require(cfg.apm_checkpoint, "--apm-checkpoint");
    const auto ds = pipeline::open_dataset(cfg.data);
    const auto sum = models::SumModel::load(cfg.sum_checkpoint, ds.vocab);
    const auto apm = models::ApmModel::load(cfg.apm_checkpoint, ds.vocab, ds.program_vocab);
    start_run_dir(cfg);
    const auto view = sum.config().view;
    const auto recs = split_records(ds, cfg.eval.split, view);
    std::map<std::string, std::string> cache;
    for (const auto& r : recs) {
      auto it = cache.find(r.raster);
      if (it == cache.end()) {
        const auto c = models::sum_caption(sum, world::decode_rle(view, r.raster), cfg.decode);
        it = cache.emplace(r.raster, text::detokenize(c, sum.vocab())).first;
      }
      preds.push_back(it->second);
      refs.push_back(r.caption);
    }
    auto tasks = train::tasks_from_records(recs);
    if (cfg.eval.tasks > 0 && static_cast<int>(tasks.size()) > cfg.eval.tasks) tasks.resize(cfg.eval.tasks);
    models::RolloutConfig env;
    env.view = view;
    env.render = sum.config().render;
    env.max_steps = cfg.eval.max_steps;
    env.reward = cfg.train.reward;
    std::unique_ptr<models::Captioner> captioner;
    if (cfg.eval.oracle_captions && apm.config().couple == models::Coupling::kText) {
      captioner = std::make_unique<models::OracleCaptioner>(apm.text_vocab(), view);
    } else {
      captioner = std::make_unique<models::ModelCaptioner>(sum, nn::DecodeConfig::greedy(sum.config().max_caption_len),
                                                           apm.config().couple == models::Coupling::kHidden);
    }
    const auto trajs = train::evaluate_policy(apm, *captioner, tasks, env, cfg.decode);
    exec_rate = metrics::execution_rate(trajs);
    success_rate = metrics::episode_success_rate(trajs);
    episodes = static_cast<long>(trajs.size());
    std::ofstream tout(fs::path(cfg.out) / "trajectories.jsonl");
    for (const auto& t : trajs) tout << models::to_json(t).dump() << "\n";
  }
  const auto corpus = metrics::make_corpus(preds, refs);
  const auto s = metrics::score_captions(corpus);
  const std::vector<std::pair<std::string, std::optional<double>>> rows = {
      {"BLEU-1", s.bleu1},   {"BLEU-2", s.bleu2},     {"BLEU-3", s.bleu3},
      {"BLEU-4", s.bleu4},   {"ROUGE-L", s.rouge_l},  {"METEOR", s.meteor},
      {"CIDEr", s.cider},    {"SPICE", s.spice},      {"execution_rate", exec_rate},
      {"episode_success_rate", success_rate}};
  std::ostringstream table;
  table << std::left << std::setw(22) << "metric" << "value\n";
  Json report{{"captions", preds.size()}, {"episodes", episodes}};
  Json scores = Json::object();
  for (const auto& [name, v] : rows) {
    table << std::left << std::setw(22) << name << (v ? fmt(*v) : "n/a") << "\n";
    scores[name] = v ? Json(*v) : Json(nullptr);
  }
  report["metrics"] = scores;
  std::cout << table.str();
  std::ofstream(fs::path(cfg.out) / "report.txt") << table.str();
  std::ofstream(fs::path(cfg.out) / "report.json") << report.dump(2) << "\n";
  return kOk;
}

int cmd_rollout(const RunConfig& cfg) {
  require(cfg.data, "--data");
  require(cfg.sum_checkpoint, "--sum-checkpoint");
  require(cfg.apm_checkpoint, "--apm-checkpoint");
  const auto ds = pipeline::open_dataset(cfg.data);
  const auto sum = models::SumModel::load(cfg.sum_checkpoint, ds.vocab);
  const auto apm = models::ApmModel::load(cfg.apm_checkpoint, ds.vocab, ds.program_vocab);
  const auto& ro = cfg.rollout;
  if (ro.layout < 1 || ro.layout > world::kNumLayouts) throw UsageError("--layout must lie in 1..7");
  const auto w = world::gen_layout(ro.layout, ro.world_seed);
  const auto agent = world::initial_agent(w, ro.world_seed);
  const world::Task* task = nullptr;
  if (!ro.task.empty()) {
    task = world::find_task(ro.task);
    if (!task) throw UsageError("unknown task '" + ro.task + "'");
    if (!world::task_valid_for(*task, w)) throw UsageError("task '" + ro.task + "' needs objects layout lacks");
  } else {
    for (const world::Task* t : world::tasks_for(w)) {
      if (!world::check_goal(w, agent, *t)) {
        task = t;
        break;
      }
    }
    if (!task) throw UsageError("layout has no open task");
  }
  models::RolloutConfig env;
  env.view = sum.config().view;
  env.render = sum.config().render;
  env.max_steps = ro.max_steps;
  env.reward = cfg.train.reward;
  std::unique_ptr<models::Captioner> captioner;
  if (cfg.eval.oracle_captions && apm.config().couple == models::Coupling::kText) {
    captioner = std::make_unique<models::OracleCaptioner>(apm.text_vocab(), env.view);
  } else {
    captioner = std::make_unique<models::ModelCaptioner>(sum, nn::DecodeConfig::greedy(sum.config().max_caption_len),
                                                         apm.config().couple == models::Coupling::kHidden);
  }
  models::ModelPolicy policy(apm, cfg.decode);
  const auto traj = models::rollout(policy, *captioner, w, agent, *task, env);
  const Json tj = models::to_json(traj);
  for (const auto& step : tj.at("steps")) std::cout << step.dump() << "\n";
  const std::vector<models::Trajectory> one = {traj};
  Json summary{{"task", traj.task}, {"layout", ro.layout}, {"steps", traj.steps.size()}, {"success", traj.success}};
  summary["execution_rate"] = traj.steps.empty() ? Json(nullptr) : Json(metrics::execution_rate(one));
  summary["episode_success_rate"] = metrics::episode_success_rate(one);
  std::cout << summary.dump() << "\n";
  if (!cfg.out.empty()) {
    start_run_dir(cfg);
    std::ofstream(fs::path(cfg.out) / "trajectory.json") << tj.dump(2) << "\n";
  }
  return kOk;
}

int report(const char* category, int code, const std::exception& e) {
  std::cerr << "error[" << category << "]: " << e.what() << "\n";
  return code;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"visact: simulated household data, caption and action models, fine-tuning and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "visact 0.1.0");

  std::map<std::string, Command> cmds;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    Command& c = cmds[name];
    c.app = app.add_subcommand(name, help);
    c.flags = std::make_unique<Flags>(c.app);
    common_flags(c);
    return c;
  };

  auto& gen = add("gen-data", "Generate an expert dataset (layouts x episodes x views)");
  gen.flags->value("--layouts", "dataset.layouts", "Layout ids, e.g. 1-7 or 1,3,5", int_list);
  gen.flags->value("--episodes", "dataset.episodes_per_layout", "Episodes per layout");
  gen.flags->value("--views", "dataset.views", "Comma list of auto, first_person, front_person", string_list);
  gen.flags->value("--world-seed", "dataset.world_seed", "Share one world per layout across episodes");
  gen.flags->value("--records-per-shard", "dataset.records_per_shard", "Records per shard file");

  auto& ts = add("train-sum", "Fine-tune the caption model with cross-entropy");
  train_flags(ts, "sum");
  ts.flags->value("--view", "sum.view", "Observation view", as_string);

  auto& il = add("train-apm-il", "Fine-tune the action model by imitation");
  train_flags(il, "apm");
  il.flags->value("--sum-checkpoint", "sum_checkpoint", "Caption model checkpoint", as_string);
  il.flags->toggle("--oracle-captions", "train.oracle_captions", "Train on simulator captions instead of SUM output");
  il.flags->value("--couple", "apm.couple", "Caption coupling: text or hidden", as_string);

  auto& rl = add("train-apm-rl", "Fine-tune the action model with REINFORCE");
  train_flags(rl, "apm");
  rl.flags->value("--sum-checkpoint", "sum_checkpoint", "Caption model checkpoint", as_string);
  rl.flags->value("--apm-checkpoint", "apm_checkpoint", "Warm-start action model checkpoint", as_string);
  rl.flags->value("--k", "train.k", "Candidates per visited state");
  rl.flags->value("--baseline", "train.baseline", "greedy, beam_mean or none", as_string);
  rl.flags->value("--updates", "train.max_updates", "Optimizer step cap (0 = none)");
  rl.flags->value("--tasks", "rl_tasks", "Training tasks (0 = all training episodes)");
  rl.flags->value("--max-steps", "train.max_steps", "Episode step cap");
  rl.flags->toggle("--oracle-captions", "train.oracle_captions", "Roll out on simulator captions");

  auto& ev = add("eval", "Score captions and policy on a split");
  ev.flags->value("--sum-checkpoint", "sum_checkpoint", "Caption model checkpoint", as_string);
  ev.flags->value("--apm-checkpoint", "apm_checkpoint", "Action model checkpoint", as_string);
  ev.flags->value("--split", "eval.split", "train, val or test", as_string);
  ev.flags->value("--tasks", "eval.tasks", "Episodes to roll out (0 = all)");
  ev.flags->value("--max-steps", "eval.max_steps", "Episode step cap");
  ev.flags->toggle("--oracle-captions", "eval.oracle_captions", "Policy sees simulator captions");
  ev.flags->value("--predictions", "eval.predictions", "Caption-only mode: predicted captions, one per line", as_string);
  ev.flags->value("--references", "eval.references", "Caption-only mode: reference captions, one per line", as_string);

  auto& ro = add("rollout", "Run a checkpointed policy in a seeded world");
  ro.flags->value("--sum-checkpoint", "sum_checkpoint", "Caption model checkpoint", as_string);
  ro.flags->value("--apm-checkpoint", "apm_checkpoint", "Action model checkpoint", as_string);
  ro.flags->value("--layout", "rollout.layout", "Layout id 1..7");
  ro.flags->value("--task", "rollout.task", "Task name", as_string);
  ro.flags->value("--world-seed", "rollout.world_seed", "World and start-state seed");
  ro.flags->value("--max-steps", "rollout.max_steps", "Episode step cap");
  ro.flags->value("--decode", "decode.mode", "greedy, sample or beam", as_string);
  ro.flags->value("--temperature", "decode.temperature", "Sampling temperature");
  ro.flags->value("--beam", "decode.beam", "Beam width");
  ro.flags->toggle("--oracle-captions", "eval.oracle_captions", "Policy sees simulator captions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto& [name, c] : cmds) {
      if (!c.app->parsed()) continue;
      const RunConfig cfg = resolve(c);
      if (name == "gen-data") return cmd_gen_data(cfg);
      if (name == "train-sum") return cmd_train_sum(cfg);
      if (name == "train-apm-il") return cmd_train_apm_il(cfg);
      if (name == "train-apm-rl") return cmd_train_apm_rl(cfg);
      if (name == "eval") return cmd_eval(cfg);
      if (name == "rollout") return cmd_rollout(cfg);
    }
  } catch (const UsageError& e) {
    return report("usage", kUsage, e);
  } catch (const ConfigError& e) {
    return report("config", kUsage, e);
  } catch (const CheckpointError& e) {
    return report("checkpoint", kCheckpoint, e);
  } catch (const MissingManifest& e) {
    return report("data", kData, e);
  } catch (const HashMismatch& e) {
    return report("data", kData, e);
  } catch (const DataFormatError& e) {
    return report("data", kData, e);
  } catch (const EmptyDataset& e) {
    return report("data", kData, e);
  } catch (const EmptyTaskSet& e) {
    return report("data", kData, e);
  } catch (const EmptyCorpus& e) {
    return report("data", kData, e);
  } catch (const InvalidArgument& e) {
    return report("usage", kUsage, e);
  } catch (const std::exception& e) {
    return report("internal", kFailure, e);
  }
  return kUsage;
}

}  // namespace visact::cli

int main(int argc, char** argv) { return visact::cli::run(argc, argv); }
