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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace visact::metrics {

using Tokens = std::vector<std::string>;

struct CorpusItem {
  Tokens candidate;
  std::vector<Tokens> references;  // at least one
};

using Corpus = std::vector<CorpusItem>;

// Builds a corpus from aligned caption strings (whitespace tokenised,
// lowercased), one reference per candidate.
Corpus make_corpus(const std::vector<std::string>& candidates, const std::vector<std::string>& references);

struct BleuOptions {
  bool smooth = false;  // add one to numerator and denominator for n >= 2
};

// Corpus-level BLEU with clipped counts and the closest-reference brevity
// penalty (ties go to the shorter reference).
double bleu(const Corpus& c, int n, const BleuOptions& opts = {});

double rouge_l(const Corpus& c, double beta = 1.2);

// Exact then stem unigram alignment, F_mean = 10PR / (R + 9P) and a
// fragmentation penalty of 0.5 (chunks / matches)^3.
double meteor_lite(const Corpus& c);
std::string meteor_stem(std::string_view word);

// Mean over n = 1..4 of TF-IDF cosine agreement scaled by 10; IDF is
// log(N / max(1, df)) over the corpus references.
double cider(const Corpus& c);

// F1 of semantic tuples extracted with the caption grammar. Captions that
// do not parse contribute 0.
double spice_lite(const Corpus& c);

// (object) | (object, attribute) | (subject, relation, object)
using SemanticTuple = std::vector<std::string>;
std::optional<std::set<SemanticTuple>> caption_tuples(const Tokens& caption);

struct CaptionScores {
  double bleu1 = 0, bleu2 = 0, bleu3 = 0, bleu4 = 0;
  double rouge_l = 0, meteor = 0, cider = 0, spice = 0;
};

// All caption columns. CIDEr is reported as 0 for single-item corpora.
CaptionScores score_captions(const Corpus& c, const BleuOptions& opts = {});

}  // namespace visact::metrics
