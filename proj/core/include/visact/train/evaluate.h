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

#include <span>
#include <vector>

#include "visact/models/rollout.h"
#include "visact/train/finetune.h"

namespace visact::train {

// Teacher-forced next-token accuracy (argmax, ties to the lowest id) over
// every caption position after BOS.
double sum_token_accuracy(const models::SumModel& sum, std::span<const SumExample> data);

// Free-running accuracy: tokens of the greedy decode that agree with the
// reference before the first disagreement, over reference length.
double sum_free_running_accuracy(const models::SumModel& sum, std::span<const SumExample> data);

// Fraction of captions whose greedy decode equals the reference exactly.
double sum_exact_match(const models::SumModel& sum, std::span<const SumExample> data);

// Fraction of greedy action decodes equal to the expert step.
double apm_exact_match(const models::ApmModel& apm, std::span<const ApmExample> data);

// One greedy rollout per instance.
std::vector<models::Trajectory> evaluate_policy(const models::ApmModel& apm, models::Captioner& captioner,
                                                std::span<const TaskInstance> tasks, const models::RolloutConfig& env,
                                                const nn::DecodeConfig& decode = nn::DecodeConfig::greedy());

}  // namespace visact::train
