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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace visact::text {

inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kSep = 4;
inline constexpr int kMask = 5;
inline constexpr int kNumSpecials = 6;

class Vocab {
 public:
  Vocab();  // specials only

  // Sorted unique tokens of the corpus after the specials block.
  static Vocab build(std::span<const std::string> tokens);
  static Vocab build_from_sentences(std::span<const std::string> sentences);

  int size() const { return static_cast<int>(tokens_.size()); }
  int id(std::string_view token) const;  // kUnk when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;
  std::span<const std::string> tokens() const { return tokens_; }

  // Header line, then one token per line; line i after the header has id i.
  std::string to_text() const;
  static Vocab from_text(std::string_view text);
  void save(const std::string& path) const;
  static Vocab load(const std::string& path);

  // SHA-256 of to_text(), stored in checkpoints.
  std::string hash() const;

  bool operator==(const Vocab& o) const { return tokens_ == o.tokens_; }

 private:
  void index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

std::vector<int> encode_tokens(std::span<const std::string> tokens, const Vocab& v);

}  // namespace visact::text
