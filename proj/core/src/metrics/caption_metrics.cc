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

#include "visact/metrics/caption_metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "visact/common/error.h"
#include "visact/text/caption.h"
#include "visact/text/lexicon.h"

namespace visact::metrics {
namespace {

void check_corpus(const Corpus& c) {
  if (c.empty()) throw EmptyCorpus("metric over an empty corpus");
  for (const auto& item : c) {
    if (item.references.empty()) throw InvalidArgument("corpus item without references");
  }
}

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngrams(const Tokens& t, int n) {
  NgramCounts out;
  if (static_cast<int>(t.size()) < n) return out;
  for (size_t i = 0; i + static_cast<size_t>(n) <= t.size(); ++i) {
    ++out[Tokens(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i) + n)];
  }
  return out;
}

size_t lcs(const Tokens& a, const Tokens& b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

Corpus make_corpus(const std::vector<std::string>& candidates, const std::vector<std::string>& references) {
  if (candidates.size() != references.size()) {
    throw InvalidArgument("prediction and reference counts differ (" + std::to_string(candidates.size()) + " vs " +
                          std::to_string(references.size()) + ")");
  }
  Corpus c;
  for (size_t i = 0; i < candidates.size(); ++i) {
    c.push_back(CorpusItem{text::split_words(candidates[i]), {text::split_words(references[i])}});
  }
  return c;
}

double bleu(const Corpus& c, int n, const BleuOptions& opts) {
  check_corpus(c);
  if (n < 1 || n > 4) throw InvalidArgument("BLEU order must lie in 1..4");
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    double matched = 0.0;
    double total = 0.0;
    for (const auto& item : c) {
      const auto cand = ngrams(item.candidate, k);
      std::map<std::vector<std::string>, int> max_ref;
      for (const auto& ref : item.references) {
        for (const auto& [g, cnt] : ngrams(ref, k)) max_ref[g] = std::max(max_ref[g], cnt);
      }
      for (const auto& [g, cnt] : cand) {
        total += cnt;
        auto it = max_ref.find(g);
        if (it != max_ref.end()) matched += std::min(cnt, it->second);
      }
    }
    if (opts.smooth && k >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0 || total == 0.0) return 0.0;
    log_sum += std::log(matched / total);
  }
  double cand_len = 0.0;
  double ref_len = 0.0;
  for (const auto& item : c) {
    const long cl = static_cast<long>(item.candidate.size());
    long best = static_cast<long>(item.references.front().size());
    for (const auto& ref : item.references) {
      const long rl = static_cast<long>(ref.size());
      const long d = std::labs(rl - cl);
      const long bd = std::labs(best - cl);
      if (d < bd || (d == bd && rl < best)) best = rl;
    }
    cand_len += static_cast<double>(cl);
    ref_len += static_cast<double>(best);
  }
  if (cand_len == 0.0) return 0.0;
  const double bp = cand_len < ref_len ? std::exp(1.0 - ref_len / cand_len) : 1.0;
  return bp * std::exp(log_sum / n);
}

double rouge_l(const Corpus& c, double beta) {
  check_corpus(c);
  const double b2 = beta * beta;
  double total = 0.0;
  for (const auto& item : c) {
    double best = 0.0;
    for (const auto& ref : item.references) {
      const double l = static_cast<double>(lcs(item.candidate, ref));
      if (l == 0.0) continue;
      const double p = l / static_cast<double>(item.candidate.size());
      const double r = l / static_cast<double>(ref.size());
      best = std::max(best, (1.0 + b2) * p * r / (r + b2 * p));
    }
    total += best;
  }
  return total / static_cast<double>(c.size());
}

std::string meteor_stem(std::string_view word) {
  static constexpr std::string_view kSuffixes[] = {"ing", "es", "ed", "s"};
  for (auto suf : kSuffixes) {
    if (word.size() >= suf.size() + 3 && word.substr(word.size() - suf.size()) == suf) {
      return std::string(word.substr(0, word.size() - suf.size()));
    }
  }
  return std::string(word);
}

namespace {

double meteor_pair(const Tokens& cand, const Tokens& ref) {
  if (cand.empty() || ref.empty()) return 0.0;
  std::vector<int> align(cand.size(), -1);
  std::vector<bool> used(ref.size(), false);
  auto stage = [&](auto key) {
    for (size_t i = 0; i < cand.size(); ++i) {
      if (align[i] >= 0) continue;
      const auto k = key(cand[i]);
      for (size_t j = 0; j < ref.size(); ++j) {
        if (!used[j] && key(ref[j]) == k) {
          align[i] = static_cast<int>(j);
          used[j] = true;
          break;
        }
      }
    }
  };
  stage([](const std::string& w) { return w; });
  stage([](const std::string& w) { return meteor_stem(w); });

  double matches = 0.0;
  double chunks = 0.0;
  int prev = -2;
  bool in_chunk = false;
  for (size_t i = 0; i < cand.size(); ++i) {
    if (align[i] < 0) {
      in_chunk = false;
      continue;
    }
    matches += 1.0;
    if (!in_chunk || align[i] != prev + 1) chunks += 1.0;
    in_chunk = true;
    prev = align[i];
  }
  if (matches == 0.0) return 0.0;
  const double p = matches / static_cast<double>(cand.size());
  const double r = matches / static_cast<double>(ref.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(chunks / matches, 3.0);
  return fmean * (1.0 - penalty);
}

}  // namespace

double meteor_lite(const Corpus& c) {
  check_corpus(c);
  double total = 0.0;
  for (const auto& item : c) {
    double best = 0.0;
    for (const auto& ref : item.references) best = std::max(best, meteor_pair(item.candidate, ref));
    total += best;
  }
  return total / static_cast<double>(c.size());
}

double cider(const Corpus& c) {
  check_corpus(c);
  if (c.size() < 2) throw CorpusTooSmall("CIDEr needs at least two corpus items");
  const double n_items = static_cast<double>(c.size());
  std::vector<double> per_item(c.size(), 0.0);
  for (int n = 1; n <= 4; ++n) {
    std::map<std::vector<std::string>, int> df;
    for (const auto& item : c) {
      std::set<std::vector<std::string>> seen;
      for (const auto& ref : item.references) {
        for (const auto& [g, cnt] : ngrams(ref, n)) seen.insert(g);
      }
      for (const auto& g : seen) ++df[g];
    }
    auto vec = [&](const Tokens& t) {
      std::map<std::vector<std::string>, double> v;
      const auto counts = ngrams(t, n);
      double total = 0.0;
      for (const auto& [g, cnt] : counts) total += cnt;
      for (const auto& [g, cnt] : counts) {
        auto it = df.find(g);
        const double d = it == df.end() ? 0.0 : it->second;
        v[g] = (cnt / total) * std::log(n_items / std::max(1.0, d));
      }
      return v;
    };
    auto cosine = [](const std::map<std::vector<std::string>, double>& a,
                     const std::map<std::vector<std::string>, double>& b) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (const auto& [g, x] : a) {
        na += x * x;
        auto it = b.find(g);
        if (it != b.end()) dot += x * it->second;
      }
      for (const auto& [g, y] : b) nb += y * y;
      if (na == 0.0 || nb == 0.0) return 0.0;
      return dot / (std::sqrt(na) * std::sqrt(nb));
    };
    for (size_t i = 0; i < c.size(); ++i) {
      const auto cv = vec(c[i].candidate);
      double s = 0.0;
      for (const auto& ref : c[i].references) s += cosine(cv, vec(ref));
      per_item[i] += 10.0 * s / static_cast<double>(c[i].references.size()) / 4.0;
    }
  }
  double total = 0.0;
  for (double v : per_item) total += v;
  return total / n_items;
}

std::optional<std::set<SemanticTuple>> caption_tuples(const Tokens& words) {
  std::set<SemanticTuple> out;
  const auto phrases = text::relation_phrases();
  std::string relation;           // pending relation of the agent
  std::string put_object;         // direct object of a pending put
  bool expect_put_dest = false;   // "on"/"in" seen after a put object
  std::string dest_relation;
  std::vector<std::string> adjectives;
  std::string last_relation;      // for coordination with "and"
  size_t i = 0;
  while (i < words.size()) {
    const std::string& w = words[i];
    if (text::is_determiner(w)) {
      ++i;
      continue;
    }
    if (text::is_adjective(w)) {
      adjectives.push_back(w);
      ++i;
      continue;
    }
    if (text::is_noun(w)) {
      out.insert({w});
      for (const auto& a : adjectives) out.insert({w, a});
      adjectives.clear();
      if (w != "agent") {
        if (expect_put_dest) {
          out.insert({put_object, dest_relation, w});
          expect_put_dest = false;
          put_object.clear();
          last_relation.clear();
        } else if (!relation.empty()) {
          out.insert({"agent", relation, w});
          if (relation == "put") put_object = w;
          last_relation = relation;
          relation.clear();
        }
      }
      ++i;
      continue;
    }
    if (!adjectives.empty()) return std::nullopt;  // adjective without a noun
    if (w == "and") {
      if (last_relation.empty()) return std::nullopt;
      relation = last_relation;
      ++i;
      continue;
    }
    if ((w == "on" || w == "in") && !put_object.empty() && relation.empty() && !expect_put_dest) {
      expect_put_dest = true;
      dest_relation = w;
      ++i;
      continue;
    }
    if (w == "in" && relation.empty()) {
      relation = "in";
      ++i;
      continue;
    }
    // Longest matching relation phrase.
    const text::RelationPhrase* match = nullptr;
    for (const auto& p : phrases) {
      if (i + p.words.size() > words.size()) continue;
      bool ok = true;
      for (size_t k = 0; k < p.words.size() && ok; ++k) ok = words[i + k] == p.words[k];
      if (ok && (!match || p.words.size() > match->words.size())) match = &p;
    }
    if (!match) return std::nullopt;
    if (match->transitive) {
      relation = std::string(match->relation);
    } else {
      out.insert({"agent", std::string(match->relation)});
    }
    if (relation != "put") put_object.clear();
    i += match->words.size();
  }
  if (!adjectives.empty() || !relation.empty() || expect_put_dest) return std::nullopt;
  return out;
}

double spice_lite(const Corpus& c) {
  check_corpus(c);
  double total = 0.0;
  for (const auto& item : c) {
    const auto cand = caption_tuples(item.candidate);
    if (!cand || cand->empty()) continue;
    double best = 0.0;
    for (const auto& ref_words : item.references) {
      const auto ref = caption_tuples(ref_words);
      if (!ref || ref->empty()) continue;
      double common = 0.0;
      for (const auto& t : *cand) common += ref->count(t);
      if (common == 0.0) continue;
      const double p = common / static_cast<double>(cand->size());
      const double r = common / static_cast<double>(ref->size());
      best = std::max(best, 2.0 * p * r / (p + r));
    }
    total += best;
  }
  return total / static_cast<double>(c.size());
}

CaptionScores score_captions(const Corpus& c, const BleuOptions& opts) {
  CaptionScores s;
  s.bleu1 = bleu(c, 1, opts);
  s.bleu2 = bleu(c, 2, opts);
  s.bleu3 = bleu(c, 3, opts);
  s.bleu4 = bleu(c, 4, opts);
  s.rouge_l = rouge_l(c);
  s.meteor = meteor_lite(c);
  s.cider = c.size() >= 2 ? cider(c) : 0.0;
  s.spice = spice_lite(c);
  return s;
}

}  // namespace visact::metrics
