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

#include "visact/text/caption.h"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "visact/common/error.h"

namespace visact::text {

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) {
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    words.push_back(std::move(w));
  }
  return words;
}

std::string normalize(std::string_view s) {
  std::string out;
  for (const auto& w : split_words(s)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

Caption tokenize(std::string_view s, const Vocab& v, const TokenizeOptions& opts) {
  if (opts.max_len < 2) throw InvalidArgument("tokenize: max_len must leave room for BOS and EOS");
  auto words = split_words(s);
  const size_t budget = static_cast<size_t>(opts.max_len) - 2;
  if (words.size() > budget) {
    if (!opts.truncate) {
      throw CaptionTooLong("caption has " + std::to_string(words.size()) + " words, limit " + std::to_string(budget));
    }
    words.resize(budget);
  }
  Caption c;
  c.ids.reserve(words.size() + 2);
  c.ids.push_back(kBos);
  for (const auto& w : words) c.ids.push_back(v.id(w));
  c.ids.push_back(kEos);
  return c;
}

std::string detokenize(const Caption& c, const Vocab& v) {
  std::string out;
  size_t i = (!c.ids.empty() && c.ids.front() == kBos) ? 1 : 0;
  for (; i < c.ids.size(); ++i) {
    const int id = c.ids[i];
    if (id == kEos) break;
    if (id < kNumSpecials && id != kUnk) continue;
    if (!out.empty()) out += ' ';
    out += v.token(id);
  }
  return out;
}

}  // namespace visact::text
