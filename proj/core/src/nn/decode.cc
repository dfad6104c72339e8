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

#include "visact/nn/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "visact/common/error.h"
#include "visact/common/rng.h"

namespace visact::nn {

void DecodeConfig::validate() const {
  if (max_len < 1) throw InvalidArgument("decode max_len must be at least 1");
  if (mode == Mode::kBeam && beam < 1) throw InvalidArgument("beam width must be at least 1");
  if (mode == Mode::kSample && !(temperature > 0.0)) throw InvalidArgument("sampling temperature must be positive");
}

DecodeConfig DecodeConfig::greedy(int max_len) {
  DecodeConfig c;
  c.max_len = max_len;
  return c;
}

DecodeConfig DecodeConfig::sample(double temperature, uint64_t seed, int max_len) {
  DecodeConfig c;
  c.mode = Mode::kSample;
  c.temperature = temperature;
  c.seed = seed;
  c.max_len = max_len;
  return c;
}

DecodeConfig DecodeConfig::beam_search(int k, int max_len) {
  DecodeConfig c;
  c.mode = Mode::kBeam;
  c.beam = k;
  c.max_len = max_len;
  return c;
}

void to_json(nlohmann::ordered_json& j, const DecodeConfig& c) {
  const char* mode = c.mode == DecodeConfig::Mode::kGreedy ? "greedy" : c.mode == DecodeConfig::Mode::kSample ? "sample" : "beam";
  j = nlohmann::ordered_json{{"mode", mode},       {"temperature", c.temperature}, {"beam", c.beam},
                             {"max_len", c.max_len}, {"seed", c.seed}};
}

void from_json(const nlohmann::ordered_json& j, DecodeConfig& c) {
  if (j.contains("mode")) {
    const auto m = j.at("mode").get<std::string>();
    if (m == "greedy") {
      c.mode = DecodeConfig::Mode::kGreedy;
    } else if (m == "sample") {
      c.mode = DecodeConfig::Mode::kSample;
    } else if (m == "beam") {
      c.mode = DecodeConfig::Mode::kBeam;
    } else {
      throw ConfigError("unknown decode mode '" + m + "'");
    }
  }
  c.temperature = j.value("temperature", c.temperature);
  c.beam = j.value("beam", c.beam);
  c.max_len = j.value("max_len", c.max_len);
  c.seed = j.value("seed", c.seed);
}

namespace {

Hypothesis run_greedy(const NextTokenFn& next, const DecodeConfig& cfg, int eos) {
  Hypothesis h;
  while (static_cast<int>(h.tokens.size()) < cfg.max_len) {
    const auto lp = next(h.tokens);
    const auto best = std::max_element(lp.begin(), lp.end());  // first maximum: lowest id on ties
    const int tok = static_cast<int>(best - lp.begin());
    h.tokens.push_back(tok);
    h.logprob += *best;
    if (tok == eos) {
      h.finished = true;
      break;
    }
  }
  return h;
}

Hypothesis run_sample(const NextTokenFn& next, const DecodeConfig& cfg, int eos) {
  Rng rng(cfg.seed);
  Hypothesis h;
  std::vector<double> p;
  while (static_cast<int>(h.tokens.size()) < cfg.max_len) {
    const auto lp = next(h.tokens);
    p.resize(lp.size());
    const double inv_t = 1.0 / cfg.temperature;
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : lp) mx = std::max(mx, v * inv_t);
    double z = 0.0;
    for (size_t i = 0; i < lp.size(); ++i) z += (p[i] = std::exp(lp[i] * inv_t - mx));
    double u = rng.uniform() * z;
    size_t tok = lp.size() - 1;
    for (size_t i = 0; i < lp.size(); ++i) {
      if (u < p[i]) {
        tok = i;
        break;
      }
      u -= p[i];
    }
    while (p[tok] == 0.0 && tok > 0) --tok;  // guard against rounding past the tail
    h.tokens.push_back(static_cast<int>(tok));
    h.logprob += lp[tok];
    if (static_cast<int>(tok) == eos) {
      h.finished = true;
      break;
    }
  }
  return h;
}

std::vector<Hypothesis> run_beam(const NextTokenFn& next, const DecodeConfig& cfg, int eos) {
  const size_t k = static_cast<size_t>(cfg.beam);
  std::vector<Hypothesis> beams(1);
  std::vector<Hypothesis> pool;
  struct Cand {
    double score;
    size_t beam;
    int tok;
  };
  bool settled = false;
  for (int len = 0; len < cfg.max_len && !beams.empty(); ++len) {
    std::vector<Cand> cands;
    for (size_t b = 0; b < beams.size(); ++b) {
      const auto lp = next(beams[b].tokens);
      for (size_t t = 0; t < lp.size(); ++t) cands.push_back({beams[b].logprob + lp[t], b, static_cast<int>(t)});
    }
    // Highest score first; ties resolved by beam order then token id.
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score > b.score; });
    // Each retired hypothesis permanently takes one slot of the beam.
    const size_t width = k - pool.size();
    std::vector<Hypothesis> next_beams;
    size_t taken = 0;
    for (const Cand& c : cands) {
      if (taken >= width) break;
      ++taken;
      Hypothesis h = beams[c.beam];
      h.tokens.push_back(c.tok);
      h.logprob = c.score;
      if (c.tok == eos) {
        h.finished = true;
        pool.push_back(std::move(h));
      } else {
        next_beams.push_back(std::move(h));
      }
    }
    beams = std::move(next_beams);
    if (pool.size() >= k) break;
    // Stop once no live beam can overtake the best finished hypothesis.
    if (!pool.empty() && !beams.empty()) {
      double best_pool = -std::numeric_limits<double>::infinity();
      for (const auto& h : pool) best_pool = std::max(best_pool, h.logprob);
      double best_live = -std::numeric_limits<double>::infinity();
      for (const auto& h : beams) best_live = std::max(best_live, h.logprob);
      if (best_pool >= best_live) {
        settled = true;
        break;
      }
    }
  }
  // Unfinished beams are kept only when the length limit cut them off.
  if (!settled) {
    for (auto& h : beams) pool.push_back(std::move(h));
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Hypothesis& a, const Hypothesis& b) { return a.logprob > b.logprob; });
  return pool;
}

}  // namespace

std::vector<Hypothesis> decode(const NextTokenFn& next, const DecodeConfig& cfg, int eos) {
  cfg.validate();
  switch (cfg.mode) {
    case DecodeConfig::Mode::kGreedy: return {run_greedy(next, cfg, eos)};
    case DecodeConfig::Mode::kSample: return {run_sample(next, cfg, eos)};
    case DecodeConfig::Mode::kBeam: return run_beam(next, cfg, eos);
  }
  return {};
}

}  // namespace visact::nn
