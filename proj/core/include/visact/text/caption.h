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

#include <string>
#include <string_view>
#include <vector>

#include "visact/text/vocab.h"

namespace visact::text {

inline constexpr int kDefaultMaxCaptionLen = 24;

// Token ids including the leading BOS and trailing EOS.
struct Caption {
  std::vector<int> ids;

  bool operator==(const Caption&) const = default;
};

struct TokenizeOptions {
  int max_len = kDefaultMaxCaptionLen;  // counts BOS and EOS
  bool truncate = false;                // cut and close with EOS instead of throwing
};

// Lowercases and collapses whitespace.
std::string normalize(std::string_view s);
std::vector<std::string> split_words(std::string_view s);

Caption tokenize(std::string_view s, const Vocab& v, const TokenizeOptions& opts = {});

// Words between BOS and the first EOS; other specials are dropped.
std::string detokenize(const Caption& c, const Vocab& v);

}  // namespace visact::text
