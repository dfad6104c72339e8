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
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace visact::nn {

struct DecodeConfig {
  enum class Mode { kGreedy, kSample, kBeam };
  Mode mode = Mode::kGreedy;
  double temperature = 1.0;
  int beam = 4;
  int max_len = 24;  // generated tokens, EOS included
  uint64_t seed = 0;

  void validate() const;
  bool operator==(const DecodeConfig&) const = default;

  static DecodeConfig greedy(int max_len = 24);
  static DecodeConfig sample(double temperature, uint64_t seed, int max_len = 24);
  static DecodeConfig beam_search(int k, int max_len = 24);
};

void to_json(nlohmann::ordered_json& j, const DecodeConfig& c);
void from_json(const nlohmann::ordered_json& j, DecodeConfig& c);

// Log-distribution of the next token given the tokens generated so far
// (BOS excluded).
using NextTokenFn = std::function<std::vector<double>(std::span<const int> generated)>;

struct Hypothesis {
  std::vector<int> tokens;  // generated tokens, ending with EOS when finished
  double logprob = 0.0;
  bool finished = false;
};

// Greedy and sampling return one hypothesis; beam search returns the
// retired pool together with the live beams, best first.
std::vector<Hypothesis> decode(const NextTokenFn& next, const DecodeConfig& cfg, int eos);

}  // namespace visact::nn
