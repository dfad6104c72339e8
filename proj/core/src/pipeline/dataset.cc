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

#include "visact/pipeline/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "visact/common/error.h"
#include "visact/common/hash.h"
#include "visact/common/rng.h"
#include "visact/dsl/script.h"
#include "visact/dsl/tokens.h"
#include "visact/text/lexicon.h"
#include "visact/text/oracle.h"
#include "visact/world/layouts.h"
#include "visact/world/planner.h"
#include "visact/world/sim.h"

namespace visact::pipeline {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kRecordsHeader = "visact-records 1";
constexpr std::string_view kManifestHeader = "visact-manifest 1";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataFormatError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw DataFormatError("cannot write " + p.string());
}

std::string shard_name(world::View v, int shard) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", shard);
  return "records-" + std::string(world::view_name(v)) + "-" + buf + ".ndrec";
}

}  // namespace

Json to_json(const EpisodeRecord& r) {
  return Json{{"episode", r.episode},   {"layout_id", r.layout_id}, {"seed", r.seed},
              {"world_seed", r.world_seed},
              {"task", r.task},         {"t", r.t},                 {"view", world::view_name(r.view)},
              {"raster", r.raster},     {"caption", r.caption},     {"action", r.action},
              {"prev_action", r.prev_action}};
}

EpisodeRecord record_from_json(const Json& j) {
  try {
    EpisodeRecord r;
    r.episode = j.at("episode").get<int>();
    r.layout_id = j.at("layout_id").get<int>();
    r.seed = j.at("seed").get<uint64_t>();
    r.world_seed = j.at("world_seed").get<uint64_t>();
    r.task = j.at("task").get<std::string>();
    r.t = j.at("t").get<int>();
    const auto v = world::parse_view(j.at("view").get<std::string>());
    if (!v) throw DataFormatError("record: unknown view");
    r.view = *v;
    r.raster = j.at("raster").get<std::string>();
    r.caption = j.at("caption").get<std::string>();
    r.action = j.at("action").get<std::string>();
    r.prev_action = j.at("prev_action").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string("record: ") + e.what());
  }
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view name) {
  for (Split s : {Split::kTrain, Split::kVal, Split::kTest}) {
    if (split_name(s) == name) return s;
  }
  return std::nullopt;
}

Json DatasetManifest::to_json() const {
  return Json{{"version", version},
              {"seed", seed},
              {"layouts", layouts},
              {"episodes_per_layout", episodes_per_layout},
              {"views", views},
              {"records_per_view", records_per_view},
              {"train_fraction", train_fraction},
              {"val_fraction", val_fraction},
              {"train_episodes", train_episodes},
              {"val_episodes", val_episodes},
              {"test_episodes", test_episodes},
              {"skipped_episodes", skipped_episodes},
              {"file_hashes", file_hashes},
              {"content_hash", content_hash}};
}

DatasetManifest DatasetManifest::from_json(const Json& j) {
  try {
    DatasetManifest m;
    m.version = j.at("version").get<int>();
    m.seed = j.at("seed").get<uint64_t>();
    m.layouts = j.at("layouts").get<std::vector<int>>();
    m.episodes_per_layout = j.at("episodes_per_layout").get<int>();
    m.views = j.at("views").get<std::vector<std::string>>();
    m.records_per_view = j.at("records_per_view").get<std::map<std::string, long>>();
    m.train_fraction = j.at("train_fraction").get<double>();
    m.val_fraction = j.at("val_fraction").get<double>();
    m.train_episodes = j.at("train_episodes").get<std::vector<int>>();
    m.val_episodes = j.at("val_episodes").get<std::vector<int>>();
    m.test_episodes = j.at("test_episodes").get<std::vector<int>>();
    m.skipped_episodes = j.at("skipped_episodes").get<int>();
    m.file_hashes = j.at("file_hashes").get<std::map<std::string, std::string>>();
    m.content_hash = j.at("content_hash").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string("manifest: ") + e.what());
  }
}

std::vector<EpisodeRecord> generate_records(const GenerateConfig& cfg, int* skipped, const LogFn& log) {
  if (cfg.episodes_per_layout < 1) throw InvalidArgument("episodes_per_layout must be at least 1");
  if (cfg.views.empty()) throw InvalidArgument("no views requested");
  std::vector<EpisodeRecord> out;
  int n_skipped = 0;
  int episode = 0;
  for (int layout : cfg.layouts) {
    for (int e = 0; e < cfg.episodes_per_layout; ++e, ++episode) {
      const uint64_t base = mix_seed(cfg.seed, static_cast<uint64_t>(layout) * 1000003ULL + static_cast<uint64_t>(e));
      bool done = false;
      for (int attempt = 0; attempt <= cfg.max_task_retries && !done; ++attempt) {
        const uint64_t ep_seed = mix_seed(base, static_cast<uint64_t>(attempt));
        const world::SceneGraph w0 = world::gen_layout(layout, cfg.world_seed.value_or(ep_seed));
        const world::AgentState a0 = world::initial_agent(w0, ep_seed);
        std::vector<const world::Task*> tasks;
        for (const auto* t : world::tasks_for(w0)) {
          if (cfg.tasks.empty() || std::find(cfg.tasks.begin(), cfg.tasks.end(), t->name) != cfg.tasks.end()) {
            tasks.push_back(t);
          }
        }
        if (tasks.empty()) continue;
        Rng rng(mix_seed(ep_seed, 0x7a5c));
        const world::Task& task = *tasks[rng.below(tasks.size())];
        dsl::Program plan;
        try {
          plan = world::expert_plan(w0, a0, task);
        } catch (const Unachievable& err) {
          if (log) log("episode " + std::to_string(episode) + ": " + err.what() + "; resampling");
          continue;
        }
        if (plan.steps.empty()) continue;  // goal already satisfied
        world::SceneGraph w = w0;
        world::AgentState a = a0;
        std::string prev;
        std::optional<dsl::ActionStep> prev_step;
        for (size_t t = 0; t < plan.steps.size(); ++t) {
          const std::string action = dsl::format_step(plan.steps[t]);
          for (world::View v : cfg.views) {
            EpisodeRecord r;
            r.episode = episode;
            r.layout_id = layout;
            r.seed = ep_seed;
            r.world_seed = w0.seed;
            r.task = task.name;
            r.t = static_cast<int>(t);
            r.view = v;
            r.raster = world::encode_rle(world::render(w, a, v, cfg.render));
            r.caption = text::caption_oracle(w, a, v, prev_step);
            r.action = action;
            r.prev_action = prev;
            out.push_back(std::move(r));
          }
          auto res = world::step(w, a, plan.steps[t]);
          if (!res.ok()) throw Error("expert plan failed to replay: " + action);
          w = std::move(res.value().world);
          a = std::move(res.value().agent);
          prev = action;
          prev_step = plan.steps[t];
        }
        done = true;
      }
      if (!done) {
        ++n_skipped;
        if (log) log("episode " + std::to_string(episode) + ": no achievable task after retries; skipped");
      }
    }
  }
  if (skipped) *skipped = n_skipped;
  return out;
}

text::Vocab build_caption_vocab(const std::vector<EpisodeRecord>& records) {
  std::vector<std::string> sentences;
  for (const auto& r : records) sentences.push_back(r.caption);
  for (const auto& t : world::builtin_tasks()) sentences.push_back(t.nl_description);
  std::string lexicon;
  for (const auto& n : text::nouns()) lexicon += n + " ";
  for (auto a : text::state_adjectives()) lexicon += std::string(a) + " ";
  for (auto d : text::determiners()) lexicon += std::string(d) + " ";
  for (const auto& p : text::relation_phrases()) {
    for (auto w : p.words) lexicon += std::string(w) + " ";
  }
  lexicon += "and on in";
  sentences.push_back(lexicon);
  return text::Vocab::build_from_sentences(sentences);
}

text::Vocab build_program_vocab(int max_id) {
  const auto names = world::ClassRegistry::builtin().names();
  const auto toks = dsl::program_token_inventory(names, max_id);
  return text::Vocab::build(toks);
}

DatasetManifest generate_dataset(const GenerateConfig& cfg, const std::string& dir, const LogFn& log) {
  if (cfg.records_per_shard < 1) throw InvalidArgument("records_per_shard must be positive");
  if (cfg.train_fraction < 0 || cfg.val_fraction < 0 || cfg.train_fraction + cfg.val_fraction > 1.0) {
    throw InvalidArgument("split fractions must be non-negative and sum to at most 1");
  }
  int skipped = 0;
  const auto records = generate_records(cfg, &skipped, log);

  fs::create_directories(dir);
  DatasetManifest m;
  m.seed = cfg.seed;
  m.layouts = cfg.layouts;
  m.episodes_per_layout = cfg.episodes_per_layout;
  m.train_fraction = cfg.train_fraction;
  m.val_fraction = cfg.val_fraction;
  m.skipped_episodes = skipped;

  std::set<int> episodes;
  for (const auto& r : records) episodes.insert(r.episode);
  std::vector<int> ep(episodes.begin(), episodes.end());
  Rng split_rng(mix_seed(cfg.seed, 0x5b117));
  split_rng.shuffle(std::span<int>(ep));
  const auto n = static_cast<double>(ep.size());
  const size_t n_train = static_cast<size_t>(std::lround(cfg.train_fraction * n));
  const size_t n_val = std::min(ep.size() - n_train, static_cast<size_t>(std::lround(cfg.val_fraction * n)));
  m.train_episodes.assign(ep.begin(), ep.begin() + static_cast<long>(n_train));
  m.val_episodes.assign(ep.begin() + static_cast<long>(n_train), ep.begin() + static_cast<long>(n_train + n_val));
  m.test_episodes.assign(ep.begin() + static_cast<long>(n_train + n_val), ep.end());
  std::sort(m.train_episodes.begin(), m.train_episodes.end());
  std::sort(m.val_episodes.begin(), m.val_episodes.end());
  std::sort(m.test_episodes.begin(), m.test_episodes.end());

  // Remove shards of an earlier run so the directory matches the manifest.
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("records-", 0) == 0 && entry.path().extension() == ".ndrec") fs::remove(entry.path());
  }

  auto add_file = [&](const std::string& name, const std::string& bytes) {
    write_file(fs::path(dir) / name, bytes);
    m.file_hashes[name] = sha256_hex(bytes);
  };
  add_file("vocab.txt", build_caption_vocab(records).to_text());
  add_file("program_vocab.txt", build_program_vocab(dsl::kDefaultMaxId).to_text());

  for (world::View v : cfg.views) {
    const std::string vname(world::view_name(v));
    m.views.push_back(vname);
    long count = 0;
    int shard = 0;
    std::string buf;
    int in_shard = 0;
    auto flush = [&] {
      if (in_shard == 0) return;
      add_file(shard_name(v, shard++), std::string(kRecordsHeader) + "\n" + buf);
      buf.clear();
      in_shard = 0;
    };
    for (const auto& r : records) {
      if (r.view != v) continue;
      buf += to_json(r).dump();
      buf += '\n';
      ++count;
      if (++in_shard >= cfg.records_per_shard) flush();
    }
    flush();
    m.records_per_view[vname] = count;
  }

  Sha256 h;
  for (const auto& [name, digest] : m.file_hashes) h.update(name + ":" + digest + "\n");
  m.content_hash = h.hex_digest();
  write_file(fs::path(dir) / "manifest", std::string(kManifestHeader) + "\n" + m.to_json().dump(2) + "\n");
  return m;
}

Dataset open_dataset(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest";
  if (!fs::exists(mpath)) throw MissingManifest("no manifest in " + dir);
  const std::string text = read_file(mpath);
  const auto nl = text.find('\n');
  if (nl == std::string::npos || text.substr(0, nl) != kManifestHeader) {
    throw DataFormatError("manifest in " + dir + " has an unknown header");
  }
  Json j;
  try {
    j = Json::parse(text.substr(nl + 1));
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string("manifest: ") + e.what());
  }
  Dataset ds;
  ds.dir = dir;
  ds.manifest = DatasetManifest::from_json(j);
  Sha256 h;
  for (const auto& [name, digest] : ds.manifest.file_hashes) {
    const fs::path p = fs::path(dir) / name;
    if (!fs::exists(p)) throw HashMismatch("file " + name + " listed in the manifest is missing");
    if (sha256_hex(read_file(p)) != digest) throw HashMismatch("content of " + name + " does not match the manifest");
    h.update(name + ":" + digest + "\n");
  }
  if (h.hex_digest() != ds.manifest.content_hash) throw HashMismatch("manifest content hash does not match its files");
  ds.vocab = text::Vocab::load((fs::path(dir) / "vocab.txt").string());
  ds.program_vocab = text::Vocab::load((fs::path(dir) / "program_vocab.txt").string());
  return ds;
}

std::vector<EpisodeRecord> load_split(const Dataset& ds, Split split, std::optional<world::View> view) {
  const auto& ids = split == Split::kTrain ? ds.manifest.train_episodes
                    : split == Split::kVal ? ds.manifest.val_episodes
                                           : ds.manifest.test_episodes;
  const std::set<int> wanted(ids.begin(), ids.end());
  std::vector<EpisodeRecord> out;
  for (const auto& [name, digest] : ds.manifest.file_hashes) {
    if (name.rfind("records-", 0) != 0) continue;
    if (view && name.rfind("records-" + std::string(world::view_name(*view)) + "-", 0) != 0) continue;
    std::istringstream in(read_file(fs::path(ds.dir) / name));
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader) throw DataFormatError(name + ": unknown records header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw DataFormatError(name + ": " + e.what());
      }
      EpisodeRecord r = record_from_json(j);
      if (wanted.count(r.episode)) out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::vector<size_t>> make_batches(size_t n, int batch_size, uint64_t seed, bool shuffle) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be at least 1");
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  if (shuffle) {
    Rng rng(seed);
    rng.shuffle(std::span<size_t>(order));
  }
  std::vector<std::vector<size_t>> batches;
  for (size_t i = 0; i < n; i += static_cast<size_t>(batch_size)) {
    batches.emplace_back(order.begin() + static_cast<long>(i),
                         order.begin() + static_cast<long>(std::min(n, i + static_cast<size_t>(batch_size))));
  }
  return batches;
}

}  // namespace visact::pipeline
