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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "visact/dsl/action.h"
#include "visact/dsl/tokens.h"
#include "visact/nn/decode.h"
#include "visact/nn/graph.h"
#include "visact/nn/layers.h"
#include "visact/text/caption.h"
#include "visact/text/vocab.h"

namespace visact::models {

enum class Coupling { kText, kHidden };

struct ApmConfig {
  nn::ModelConfig model;
  bool use_task = true;          // prepend the task description to the encoder input
  Coupling couple = Coupling::kText;
  int sum_d_model = 64;          // width of SUM states under hidden coupling
  int max_id = dsl::kDefaultMaxId;
  int max_action_len = 6;        // verb + two (name, id) pairs + EOS

  bool operator==(const ApmConfig&) const = default;
};

nlohmann::ordered_json to_json(const ApmConfig& c);
ApmConfig apm_config_from_json(const nlohmann::ordered_json& j);

// Encoder input of one decision.
struct ApmInput {
  std::vector<int> task;          // text vocab ids of the task description
  std::vector<int> caption;       // text vocab ids, BOS..EOS
  nn::Tensor caption_states;      // SUM decoder states under hidden coupling
  std::vector<int> prev_action;   // program vocab ids, empty at the first step
};

struct MalformedAction {
  std::vector<std::string> tokens;

  bool operator==(const MalformedAction&) const = default;
};

using ApmAction = std::variant<dsl::ActionStep, MalformedAction>;

// An empty, EOS-terminated decode asks the episode to stop.
bool is_stop(const ApmAction& a);

// Action prediction module: encoder over [task, SEP, caption, SEP,
// previous action] with segment embeddings, decoder over program tokens
// emitting one action step followed by EOS.
class ApmModel {
 public:
  ApmModel(text::Vocab text_vocab, text::Vocab program_vocab, ApmConfig cfg, uint64_t seed, bool zero_output = false);

  const text::Vocab& text_vocab() const { return text_vocab_; }
  const text::Vocab& program_vocab() const { return program_vocab_; }
  const ApmConfig& config() const { return cfg_; }
  nn::ParameterStore& params() { return store_; }
  const nn::ParameterStore& params() const { return store_; }

  ApmInput make_input(const std::string& task_description, const text::Caption& caption,
                      const std::optional<dsl::ActionStep>& prev_action, nn::Tensor caption_states = {}) const;
  // Program token ids of `step` followed by EOS.
  std::vector<int> target_ids(const dsl::ActionStep& step) const;
  ApmAction action_from_ids(std::span<const int> generated) const;

  nn::Var encode(nn::Graph& g, const ApmInput& in) const;
  nn::Var log_probs(nn::Graph& g, nn::Var memory, std::span<const int> prefix) const;

  // Teacher-forced log-probabilities for target ids (EOS-terminated).
  nn::Tensor forward_logprobs(const ApmInput& in, std::span<const int> target) const;

  void save(const std::string& path) const;
  static ApmModel load(const std::string& path, const text::Vocab& text_vocab, const text::Vocab& program_vocab);

  // Hash over both vocabularies, stored in checkpoints.
  static std::string vocab_hash(const text::Vocab& text_vocab, const text::Vocab& program_vocab);

 private:
  text::Vocab text_vocab_;
  text::Vocab program_vocab_;
  ApmConfig cfg_;
  nn::ParameterStore store_;
  nn::EncoderDecoder net_;
  nn::ParamId text_embed_ = -1;
  nn::ParamId prog_embed_ = -1;
  nn::ParamId seg_embed_ = -1;
  nn::ParamId pos_embed_ = -1;
  nn::Linear state_proj_;
};

struct ApmDecision {
  ApmAction action;
  std::vector<int> ids;  // generated program ids
  double logprob = 0.0;
};

ApmDecision apm_decide(const ApmModel& m, const ApmInput& in, const nn::DecodeConfig& d);

// Convenience wrapper returning only the action.
ApmAction apm_next_action(const ApmModel& m, const ApmInput& in, const nn::DecodeConfig& d);

// Beam variant: every hypothesis, best first.
std::vector<ApmDecision> apm_beam(const ApmModel& m, const ApmInput& in, int k);

}  // namespace visact::models
