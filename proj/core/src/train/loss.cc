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

#include "visact/train/loss.h"

#include <cmath>
#include <map>

#include "visact/common/error.h"
#include "visact/text/vocab.h"

namespace visact::train {

namespace {

std::vector<int> masked(std::span<const int> target) {
  std::vector<int> out(target.begin(), target.end());
  for (int& t : out) {
    if (t == text::kPad) t = -1;
  }
  return out;
}

}  // namespace

double ce_loss(const nn::Tensor& logprobs, std::span<const int> target) {
  if (logprobs.rows() < static_cast<int>(target.size())) {
    throw ShapeMismatch("ce_loss: " + std::to_string(logprobs.rows()) + " rows for " +
                        std::to_string(target.size()) + " targets");
  }
  double loss = 0.0;
  for (size_t i = 0; i < target.size(); ++i) {
    const int y = target[i];
    if (y == text::kPad) continue;
    if (y < 0 || y >= logprobs.cols()) throw ShapeMismatch("ce_loss: target id out of range");
    loss -= logprobs(static_cast<int>(i), y);
  }
  return loss;
}

double ce_loss(std::span<const nn::Tensor> logprobs, std::span<const std::vector<int>> targets) {
  if (logprobs.size() != targets.size()) throw ShapeMismatch("ce_loss: batch sizes differ");
  if (logprobs.empty()) throw EmptyInput("ce_loss: empty batch");
  double total = 0.0;
  for (size_t b = 0; b < logprobs.size(); ++b) total += ce_loss(logprobs[b], targets[b]);
  return total / static_cast<double>(logprobs.size());
}

nn::Var ce_loss(nn::Var logprobs, std::span<const int> target) {
  if (logprobs.value().rows() < static_cast<int>(target.size())) throw ShapeMismatch("ce_loss: too few rows");
  const auto t = masked(target);
  std::vector<int> full(static_cast<size_t>(logprobs.value().rows()), -1);
  std::copy(t.begin(), t.end(), full.begin());
  return nn::scale(nn::pick_sum(logprobs, full), -1.0);
}

nn::Var sequence_logprob(nn::Var logprobs, std::span<const int> tokens) {
  if (logprobs.value().rows() < static_cast<int>(tokens.size())) throw ShapeMismatch("sequence_logprob: too few rows");
  std::vector<int> full(static_cast<size_t>(logprobs.value().rows()), -1);
  std::copy(tokens.begin(), tokens.end(), full.begin());
  return nn::pick_sum(logprobs, full);
}

double reinforce_grad(std::span<const RlSample> samples, double baseline, double weight) {
  if (samples.empty()) throw InvalidArgument("reinforce_grad needs at least one sample");
  const double k = static_cast<double>(samples.size());
  std::map<nn::Graph*, nn::Var> per_graph;
  double surrogate = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.reward)) throw NonFiniteValue("reinforce_grad: non-finite reward");
    const double adv = s.reward - baseline;
    if (adv == 0.0) continue;
    const double c = -weight * adv / k;
    surrogate += c * s.logprob.value()(0, 0);
    nn::Var term = nn::scale(s.logprob, c);
    auto it = per_graph.find(s.logprob.graph);
    if (it == per_graph.end()) {
      per_graph.emplace(s.logprob.graph, term);
    } else {
      it->second = nn::add(it->second, term);
    }
  }
  for (auto& [g, loss] : per_graph) g->backward(loss);
  return surrogate;
}

}  // namespace visact::train
