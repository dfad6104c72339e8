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


// Brute-force reference implementations used by tests and the acceptance run.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace visact::oracle {

using Words = std::vector<std::string>;

struct Item {
  Words cand;
  std::vector<Words> refs;
};

inline bool same_gram(const Words& a, size_t i, const Words& b, size_t j, int n) {
  for (int k = 0; k < n; ++k) {
    if (a[i + k] != b[j + k]) return false;
  }
  return true;
}

inline int count_gram(const Words& hay, const Words& src, size_t at, int n) {
  int c = 0;
  for (size_t j = 0; j + n <= hay.size(); ++j) c += same_gram(hay, j, src, at, n) ? 1 : 0;
  return c;
}

// Clipped counts by rescanning, first occurrence of each n-gram only.
inline double bleu(const std::vector<Item>& corpus, int n) {
  double logp = 0;
  for (int k = 1; k <= n; ++k) {
    double num = 0, den = 0;
    for (const auto& it : corpus) {
      const Words& c = it.cand;
      for (size_t i = 0; i + k <= c.size(); ++i) {
        den += 1;
        bool first = true;
        for (size_t p = 0; p < i; ++p) {
          if (same_gram(c, p, c, i, k)) first = false;
        }
        if (!first) continue;
        int best = 0;
        for (const auto& r : it.refs) best = std::max(best, count_gram(r, c, i, k));
        num += std::min(count_gram(c, c, i, k), best);
      }
    }
    if (num == 0 || den == 0) return 0;
    logp += std::log(num / den);
  }
  double cl = 0, rl = 0;
  for (const auto& it : corpus) {
    cl += it.cand.size();
    size_t best = it.refs[0].size();
    for (const auto& r : it.refs) {
      double d = std::fabs(double(r.size()) - double(it.cand.size()));
      double bd = std::fabs(double(best) - double(it.cand.size()));
      if (d < bd || (d == bd && r.size() < best)) best = r.size();
    }
    rl += best;
  }
  if (cl == 0) return 0;
  double bp = cl < rl ? std::exp(1 - rl / cl) : 1.0;
  return bp * std::exp(logp / n);
}

inline size_t lcs_table(const Words& a, const Words& b) {
  std::vector<std::vector<size_t>> t(a.size() + 1, std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = a.size(); i-- > 0;) {
    for (size_t j = b.size(); j-- > 0;) {
      t[i][j] = a[i] == b[j] ? 1 + t[i + 1][j + 1] : std::max(t[i + 1][j], t[i][j + 1]);
    }
  }
  return t[0][0];
}

inline double rouge_l(const std::vector<Item>& corpus, double beta = 1.2) {
  double sum = 0;
  for (const auto& it : corpus) {
    double best = 0;
    for (const auto& r : it.refs) {
      double l = double(lcs_table(it.cand, r));
      if (l == 0) continue;
      double p = l / it.cand.size(), rc = l / r.size();
      best = std::max(best, (1 + beta * beta) * p * rc / (rc + beta * beta * p));
    }
    sum += best;
  }
  return sum / corpus.size();
}

template <class Rng>
std::vector<Item> random_corpus(Rng& rng, int items, int vocab) {
  std::vector<Item> out;
  auto words = [&](int lo, int hi) {
    Words w;
    int len = lo + int(rng.below(uint64_t(hi - lo + 1)));
    for (int i = 0; i < len; ++i) w.push_back("w" + std::to_string(rng.below(uint64_t(vocab))));
    return w;
  };
  for (int i = 0; i < items; ++i) {
    Item it;
    it.cand = words(1, 12);
    int nr = 1 + int(rng.below(3));
    for (int r = 0; r < nr; ++r) it.refs.push_back(words(1, 12));
    out.push_back(std::move(it));
  }
  return out;
}

}  // namespace visact::oracle
