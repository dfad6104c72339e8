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

#include "visact/nn/graph.h"
#include "visact/nn/tensor.h"

namespace visact::train {

// Teacher-forced negative log-likelihood of one sequence: -sum_i lp[i, y_i]
// over positions whose target is not PAD. Row i of `logprobs` holds the
// distribution of y_i given y_1..y_{i-1}.
double ce_loss(const nn::Tensor& logprobs, std::span<const int> target);

// Mean over a batch of per-sequence losses.
double ce_loss(std::span<const nn::Tensor> logprobs, std::span<const std::vector<int>> targets);

// Graph form of the per-sequence loss.
nn::Var ce_loss(nn::Var logprobs, std::span<const int> target);

// log P(tokens) under teacher forcing, given per-position log-probabilities.
nn::Var sequence_logprob(nn::Var logprobs, std::span<const int> tokens);

struct RlSample {
  nn::Var logprob;  // scalar log P(w) on a parameter-bound graph
  double reward = 0.0;
};

// Accumulates -(weight/k) * sum_i (r_i - b) * grad log P(w_i) into the
// parameter gradients, k = samples.size(). Samples sharing a graph are
// combined into one backward pass; samples with r_i == b contribute nothing.
// Returns the surrogate loss value -(weight/k) * sum_i (r_i - b) log P(w_i).
double reinforce_grad(std::span<const RlSample> samples, double baseline, double weight = 1.0);

}  // namespace visact::train
