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


#include "run_config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "visact/common/error.h"
#include "visact/world/layouts.h"
#include "visact/world/render.h"

namespace visact::cli {
namespace {

Json dataset_json(const pipeline::GenerateConfig& g) {
  Json views = Json::array();
  for (auto v : g.views) views.push_back(std::string(world::view_name(v)));
  return Json{{"layouts", g.layouts},
              {"episodes_per_layout", g.episodes_per_layout},
              {"views", views},
              {"train_fraction", g.train_fraction},
              {"val_fraction", g.val_fraction},
              {"records_per_shard", g.records_per_shard},
              {"max_task_retries", g.max_task_retries},
              {"tasks", g.tasks},
              {"world_seed", g.world_seed ? Json(*g.world_seed) : Json(nullptr)}};
}

pipeline::GenerateConfig dataset_from_json(const Json& j) {
  pipeline::GenerateConfig g;
  g.layouts = j.at("layouts").get<std::vector<int>>();
  g.episodes_per_layout = j.at("episodes_per_layout").get<int>();
  g.views.clear();
  for (const auto& v : j.at("views")) {
    auto view = world::parse_view(v.get<std::string>());
    if (!view) throw ConfigError("unknown view '" + v.get<std::string>() + "'");
    g.views.push_back(*view);
  }
  g.train_fraction = j.at("train_fraction").get<double>();
  g.val_fraction = j.at("val_fraction").get<double>();
  g.records_per_shard = j.at("records_per_shard").get<int>();
  g.max_task_retries = j.at("max_task_retries").get<int>();
  g.tasks = j.at("tasks").get<std::vector<std::string>>();
  if (!j.at("world_seed").is_null()) g.world_seed = j.at("world_seed").get<uint64_t>();
  if (g.layouts.empty()) throw ConfigError("dataset.layouts is empty");
  for (int l : g.layouts) {
    if (l < 1 || l > world::kNumLayouts) throw ConfigError("layout " + std::to_string(l) + " outside 1..7");
  }
  if (g.episodes_per_layout < 1) throw ConfigError("dataset.episodes_per_layout must be >= 1");
  if (g.views.empty()) throw ConfigError("dataset.views is empty");
  return g;
}

// Overlay `patch` onto `base`; keys must already exist so typos surface.
void merge_into(Json& base, const Json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string path = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + path + "'");
    Json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object()) {
      merge_into(slot, it.value(), path);
    } else {
      slot = it.value();
    }
  }
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json train;
  visact::train::to_json(train, c.train);
  train.erase("seed");
  Json decode;
  nn::to_json(decode, c.decode);
  decode.erase("seed");
  return Json{{"seed", c.seed},
              {"threads", c.threads},
              {"data", c.data},
              {"out", c.out},
              {"sum_checkpoint", c.sum_checkpoint},
              {"apm_checkpoint", c.apm_checkpoint},
              {"dataset", dataset_json(c.dataset)},
              {"sum", models::to_json(c.sum)},
              {"apm", models::to_json(c.apm)},
              {"train", train},
              {"rl_tasks", c.rl_tasks},
              {"decode", decode},
              {"eval",
               {{"split", c.eval.split},
                {"tasks", c.eval.tasks},
                {"max_steps", c.eval.max_steps},
                {"oracle_captions", c.eval.oracle_captions},
                {"predictions", c.eval.predictions},
                {"references", c.eval.references}}},
              {"rollout",
               {{"layout", c.rollout.layout},
                {"task", c.rollout.task},
                {"world_seed", c.rollout.world_seed},
                {"max_steps", c.rollout.max_steps}}}};
}

Json default_json() { return to_json(RunConfig{}); }

RunConfig run_config_from_json(const Json& j) {
  try {
    RunConfig c;
    c.seed = j.at("seed").get<uint64_t>();
    c.threads = j.at("threads").get<int>();
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    c.data = j.at("data").get<std::string>();
    c.out = j.at("out").get<std::string>();
    c.sum_checkpoint = j.at("sum_checkpoint").get<std::string>();
    c.apm_checkpoint = j.at("apm_checkpoint").get<std::string>();
    c.dataset = dataset_from_json(j.at("dataset"));
    c.dataset.seed = c.seed;
    c.sum = models::sum_config_from_json(j.at("sum"));
    c.dataset.render = c.sum.render;
    c.apm = models::apm_config_from_json(j.at("apm"));
    visact::train::from_json(j.at("train"), c.train);
    c.train.seed = c.seed;
    c.train.validate();
    c.rl_tasks = j.at("rl_tasks").get<int>();
    nn::from_json(j.at("decode"), c.decode);
    c.decode.seed = c.seed;
    c.decode.validate();
    const Json& e = j.at("eval");
    c.eval.split = e.at("split").get<std::string>();
    if (!pipeline::parse_split(c.eval.split)) throw ConfigError("eval.split must be train, val or test");
    c.eval.tasks = e.at("tasks").get<int>();
    c.eval.max_steps = e.at("max_steps").get<int>();
    c.eval.oracle_captions = e.at("oracle_captions").get<bool>();
    c.eval.predictions = e.at("predictions").get<std::string>();
    c.eval.references = e.at("references").get<std::string>();
    const Json& r = j.at("rollout");
    c.rollout.layout = r.at("layout").get<int>();
    c.rollout.task = r.at("task").get<std::string>();
    c.rollout.world_seed = r.at("world_seed").get<uint64_t>();
    c.rollout.max_steps = r.at("max_steps").get<int>();
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw ConfigError(ex.what());
  }
}

Json::json_pointer pointer_for(std::string_view key) {
  std::string p(key);
  if (p.empty() || p[0] != '/') {
    for (char& ch : p) {
      if (ch == '.') ch = '/';
    }
    p.insert(p.begin(), '/');
  }
  return Json::json_pointer(p);
}

Json parse_value(const std::string& text) {
  Json v = Json::parse(text, nullptr, false);
  if (v.is_discarded()) return Json(text);
  return v;
}

ConfigBuilder::ConfigBuilder() : j_(default_json()) {}

void ConfigBuilder::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Json patch = Json::parse(ss.str(), nullptr, false);
  if (patch.is_discarded()) throw ConfigError(path + " is not valid JSON");
  merge_into(j_, patch, "");
}

std::vector<std::string> ConfigBuilder::merge_env(char** envp) {
  std::vector<std::string> ignored;
  if (!envp) return ignored;
  for (char** e = envp; *e; ++e) {
    std::string_view kv(*e);
    if (kv.substr(0, 7) != "VISACT_") continue;
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos) continue;
    std::string key(kv.substr(7, eq - 7));
    for (char& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    std::string path;
    for (size_t i = 0; i < key.size(); ++i) {
      if (key.compare(i, 2, "__") == 0) {
        path += '.';
        ++i;
      } else {
        path += key[i];
      }
    }
    const auto ptr = pointer_for(path);
    if (!j_.contains(ptr)) {
      ignored.push_back(std::string(kv.substr(0, eq)));
      continue;
    }
    set(path, parse_value(std::string(kv.substr(eq + 1))));
  }
  return ignored;
}

void ConfigBuilder::set(std::string_view key, const Json& value) {
  const auto ptr = pointer_for(key);
  if (!j_.contains(ptr)) throw ConfigError("unknown config key '" + std::string(key) + "'");
  Json& slot = j_[ptr];
  // Paths and names stay strings even when they look like numbers.
  if (slot.is_string() && !value.is_string()) {
    slot = value.dump();
  } else {
    slot = value;
  }
}

RunConfig ConfigBuilder::build() const { return run_config_from_json(j_); }

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  auto number = [&](std::string_view s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad number '" + std::string(s) + "'");
    return v;
  };
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view part = text.substr(pos, comma - pos);
    if (part.empty()) throw ConfigError("empty item in list '" + std::string(text) + "'");
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(number(part));
    } else {
      const int lo = number(part.substr(0, dash));
      const int hi = number(part.substr(dash + 1));
      if (hi < lo) throw ConfigError("descending range '" + std::string(part) + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace visact::cli
