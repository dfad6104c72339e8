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

#include "visact/train/evaluate.h"

#include "visact/common/error.h"

namespace visact::train {
namespace {

int argmax_row(const nn::Tensor& t, int r) {
  int best = 0;
  for (int c = 1; c < t.cols(); ++c) {
    if (t(r, c) > t(r, best)) best = c;
  }
  return best;
}

}  // namespace

double sum_token_accuracy(const models::SumModel& sum, std::span<const SumExample> data) {
  if (data.empty()) throw EmptyInput("no examples");
  long hit = 0, total = 0;
  for (const auto& ex : data) {
    const nn::Tensor lp = sum.forward_logprobs(ex.raster, ex.caption);
    for (size_t i = 1; i < ex.caption.ids.size(); ++i) {
      hit += argmax_row(lp, static_cast<int>(i - 1)) == ex.caption.ids[i];
      ++total;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

double sum_free_running_accuracy(const models::SumModel& sum, std::span<const SumExample> data) {
  if (data.empty()) throw EmptyInput("no examples");
  long hit = 0, total = 0;
  const auto d = nn::DecodeConfig::greedy(sum.config().max_caption_len);
  for (const auto& ex : data) {
    const text::Caption out = models::sum_caption(sum, ex.raster, d);
    for (size_t i = 1; i < ex.caption.ids.size(); ++i) {
      if (i >= out.ids.size() || out.ids[i] != ex.caption.ids[i]) {
        total += static_cast<long>(ex.caption.ids.size() - i);
        break;
      }
      ++hit;
      ++total;
    }
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

double sum_exact_match(const models::SumModel& sum, std::span<const SumExample> data) {
  if (data.empty()) throw EmptyInput("no examples");
  long hit = 0;
  const auto d = nn::DecodeConfig::greedy(sum.config().max_caption_len);
  for (const auto& ex : data) hit += models::sum_caption(sum, ex.raster, d).ids == ex.caption.ids;
  return static_cast<double>(hit) / static_cast<double>(data.size());
}

double apm_exact_match(const models::ApmModel& apm, std::span<const ApmExample> data) {
  if (data.empty()) throw EmptyInput("no examples");
  long hit = 0;
  for (const auto& ex : data) {
    const auto dec = models::apm_decide(apm, ex.input, nn::DecodeConfig::greedy());
    hit += dec.ids == ex.target;
  }
  return static_cast<double>(hit) / static_cast<double>(data.size());
}

std::vector<models::Trajectory> evaluate_policy(const models::ApmModel& apm, models::Captioner& captioner,
                                                std::span<const TaskInstance> tasks, const models::RolloutConfig& env,
                                                const nn::DecodeConfig& decode) {
  models::ModelPolicy policy(apm, decode);
  std::vector<models::Trajectory> out;
  for (size_t i = 0; i < tasks.size(); ++i) {
    policy.set_episode(i);
    out.push_back(models::rollout(policy, captioner, tasks[i].world, tasks[i].agent, *tasks[i].task, env));
  }
  return out;
}

}  // namespace visact::train
