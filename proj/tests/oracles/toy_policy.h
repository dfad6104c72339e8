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


// Enumerable toy sequence policy: 4 tokens (token 0 ends the sequence),
// at most 3 steps. Step logits are table[prev] + pos[t], prev = 4 at the
// start.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "visact/common/rng.h"
#include "visact/nn/graph.h"
#include "visact/nn/params.h"

namespace visact::oracle {

inline constexpr int kToyVocab = 4;
inline constexpr int kToyLen = 3;
inline constexpr int kToyStop = 0;

struct ToyPolicy {
  nn::ParameterStore store;
  nn::ParamId table = -1;
  nn::ParamId pos = -1;

  explicit ToyPolicy(uint64_t seed, double scale = 0.7) {
    Rng rng(seed);
    table = store.add("table", kToyVocab + 1, kToyVocab, nn::Init::kNormal, rng, scale);
    pos = store.add("pos", kToyLen, kToyVocab, nn::Init::kNormal, rng, scale);
  }

  // Plain double log-probability, no graph.
  double logprob(const std::vector<int>& seq) const {
    const auto& T = store.at(table).value;
    const auto& P = store.at(pos).value;
    double lp = 0;
    int prev = kToyVocab;
    for (size_t t = 0; t < seq.size(); ++t) {
      double z[kToyVocab], m = -1e300, s = 0;
      for (int j = 0; j < kToyVocab; ++j) {
        z[j] = T(prev, j) + P(static_cast<int>(t), j);
        m = std::max(m, z[j]);
      }
      for (int j = 0; j < kToyVocab; ++j) s += std::exp(z[j] - m);
      lp += z[seq[t]] - m - std::log(s);
      prev = seq[t];
    }
    return lp;
  }

  nn::Var logprob(nn::Graph& g, const std::vector<int>& seq) const {
    std::vector<int> prevs = {kToyVocab};
    std::vector<int> steps;
    for (size_t t = 0; t < seq.size(); ++t) {
      if (t + 1 < seq.size()) prevs.push_back(seq[t]);
      steps.push_back(static_cast<int>(t));
    }
    prevs.resize(seq.size());
    nn::Var z = nn::add(nn::embed(g.param(table), prevs), nn::embed(g.param(pos), steps));
    return nn::pick_sum(nn::log_softmax(z), seq);
  }

  std::vector<int> sample(Rng& rng) const {
    std::vector<int> seq;
    while (static_cast<int>(seq.size()) < kToyLen) {
      double u = rng.uniform(), acc = 0;
      int pick = kToyVocab - 1;
      for (int j = 0; j < kToyVocab; ++j) {
        auto probe = seq;
        probe.push_back(j);
        acc += std::exp(logprob(probe) - (seq.empty() ? 0.0 : logprob(seq)));
        if (u < acc) {
          pick = j;
          break;
        }
      }
      seq.push_back(pick);
      if (pick == kToyStop) break;
    }
    return seq;
  }

  std::vector<int> greedy() const {
    std::vector<int> seq;
    while (static_cast<int>(seq.size()) < kToyLen) {
      int best = 0;
      double bl = -1e300;
      for (int j = 0; j < kToyVocab; ++j) {
        auto probe = seq;
        probe.push_back(j);
        double l = logprob(probe);
        if (l > bl) bl = l, best = j;
      }
      seq.push_back(best);
      if (best == kToyStop) break;
    }
    return seq;
  }
};

// Every terminal sequence: ends with the stop token or reaches the length cap.
inline std::vector<std::vector<int>> toy_sequences() {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>)> rec = [&](std::vector<int> s) {
    if (!s.empty() && (s.back() == kToyStop || static_cast<int>(s.size()) == kToyLen)) {
      out.push_back(s);
      return;
    }
    for (int j = 0; j < kToyVocab; ++j) {
      auto n = s;
      n.push_back(j);
      rec(n);
    }
  };
  rec({});
  return out;
}

using ToyReward = std::function<double(const std::vector<int>&)>;

inline double toy_expected_reward(const ToyPolicy& p, const ToyReward& r) {
  double e = 0;
  for (const auto& s : toy_sequences()) e += std::exp(p.logprob(s)) * r(s);
  return e;
}

// d E[r] / d theta by central differences of the enumerated expectation.
inline std::vector<std::vector<double>> toy_exact_gradient(ToyPolicy& p, const ToyReward& r, double h = 1e-5) {
  std::vector<std::vector<double>> out;
  for (auto& prm : p.store.all()) {
    std::vector<double> g(prm.value.size());
    for (size_t i = 0; i < prm.value.size(); ++i) {
      const double keep = prm.value.data()[i];
      prm.value.data()[i] = keep + h;
      const double up = toy_expected_reward(p, r);
      prm.value.data()[i] = keep - h;
      const double down = toy_expected_reward(p, r);
      prm.value.data()[i] = keep;
      g[i] = (up - down) / (2 * h);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace visact::oracle
