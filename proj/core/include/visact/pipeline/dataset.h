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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/text/vocab.h"
#include "visact/world/render.h"

namespace visact::pipeline {

using Json = nlohmann::ordered_json;

// One timestep of an expert episode seen from one view.
struct EpisodeRecord {
  int episode = 0;
  int layout_id = 1;
  uint64_t seed = 0;        // start state and task draw of the episode
  uint64_t world_seed = 0;  // layout generation seed
  std::string task;
  int t = 0;
  world::View view = world::View::kAuto;
  std::string raster;       // run-length text form
  std::string caption;      // oracle caption of the state before the action
  std::string action;       // canonical DSL text of expert step t
  std::string prev_action;  // expert step t-1, empty at t = 0

  bool operator==(const EpisodeRecord&) const = default;
};

Json to_json(const EpisodeRecord& r);
EpisodeRecord record_from_json(const Json& j);

enum class Split { kTrain, kVal, kTest };
std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view name);

struct GenerateConfig {
  std::vector<int> layouts = {1, 2, 3, 4, 5, 6, 7};
  int episodes_per_layout = 10;
  std::vector<world::View> views = {world::View::kAuto};
  uint64_t seed = 0;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  int records_per_shard = 5000;
  int max_task_retries = 8;
  std::vector<std::string> tasks;  // restrict sampling to these task names; empty = all
  // When set, every episode of a layout shares this world; start room and
  // task still vary per episode.
  std::optional<uint64_t> world_seed;
  world::RenderConfig render;
};

struct DatasetManifest {
  int version = 1;
  uint64_t seed = 0;
  std::vector<int> layouts;
  int episodes_per_layout = 0;
  std::vector<std::string> views;
  std::map<std::string, long> records_per_view;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  std::vector<int> train_episodes;
  std::vector<int> val_episodes;
  std::vector<int> test_episodes;
  int skipped_episodes = 0;
  std::map<std::string, std::string> file_hashes;  // file name -> SHA-256
  std::string content_hash;                        // over all file hashes

  Json to_json() const;
  static DatasetManifest from_json(const Json& j);
};

using LogFn = std::function<void(const std::string&)>;

// Expert episodes for every requested layout, written as
//   manifest, vocab.txt, program_vocab.txt, records-<view>-<shard>.ndrec
// Deterministic in the config: two runs produce byte-identical directories.
DatasetManifest generate_dataset(const GenerateConfig& cfg, const std::string& dir, const LogFn& log = nullptr);

// In-memory generation without touching the filesystem.
std::vector<EpisodeRecord> generate_records(const GenerateConfig& cfg, int* skipped = nullptr,
                                            const LogFn& log = nullptr);

// Vocabulary over captions, task descriptions and the closed caption lexicon.
text::Vocab build_caption_vocab(const std::vector<EpisodeRecord>& records);
text::Vocab build_program_vocab(int max_id);

struct Dataset {
  std::string dir;
  DatasetManifest manifest;
  text::Vocab vocab;
  text::Vocab program_vocab;
};

// Reads and verifies the manifest and the hash of every listed file.
// Throws MissingManifest or HashMismatch.
Dataset open_dataset(const std::string& dir);

// Records of one split in file order (view, shard, line), optionally
// restricted to one view.
std::vector<EpisodeRecord> load_split(const Dataset& ds, Split split, std::optional<world::View> view = std::nullopt);

// Deterministic shuffled batches of record indices.
std::vector<std::vector<size_t>> make_batches(size_t n, int batch_size, uint64_t seed, bool shuffle = true);

}  // namespace visact::pipeline
