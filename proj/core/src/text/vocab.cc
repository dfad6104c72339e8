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

#include "visact/text/vocab.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "visact/common/error.h"
#include "visact/common/hash.h"

namespace visact::text {
namespace {

constexpr std::string_view kHeader = "visact-vocab 1";
constexpr std::array<std::string_view, kNumSpecials> kSpecialNames = {"<pad>", "<bos>", "<eos>",
                                                                      "<unk>", "<sep>", "<mask>"};

}  // namespace

Vocab::Vocab() {
  for (auto s : kSpecialNames) tokens_.emplace_back(s);
  index();
}

Vocab Vocab::build(std::span<const std::string> tokens) {
  std::set<std::string> uniq;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (std::find(kSpecialNames.begin(), kSpecialNames.end(), t) != kSpecialNames.end()) continue;
    uniq.insert(t);
  }
  Vocab v;
  v.tokens_.insert(v.tokens_.end(), uniq.begin(), uniq.end());
  v.index();
  return v;
}

Vocab Vocab::build_from_sentences(std::span<const std::string> sentences) {
  std::vector<std::string> words;
  for (const auto& s : sentences) {
    std::istringstream is(s);
    std::string w;
    while (is >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
      words.push_back(std::move(w));
    }
  }
  return build(words);
}

void Vocab::index() {
  ids_.clear();
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty() || tokens_[i].find_first_of(" \t\r\n") != std::string::npos) {
      throw DataFormatError("vocab: invalid token at id " + std::to_string(i));
    }
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw DataFormatError("vocab: duplicate token '" + tokens_[i] + "'");
    }
  }
}

int Vocab::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocab::contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

const std::string& Vocab::token(int id) const {
  if (id < 0 || id >= size()) throw InvalidArgument("vocab: id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<size_t>(id)];
}

std::string Vocab::to_text() const {
  std::string out(kHeader);
  out += '\n';
  for (const auto& t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

Vocab Vocab::from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line != kHeader) throw DataFormatError("vocab: missing or unknown header");
  Vocab v;
  v.tokens_.clear();
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    v.tokens_.push_back(line);
  }
  if (v.tokens_.size() < kNumSpecials) throw DataFormatError("vocab: truncated specials block");
  for (size_t i = 0; i < kNumSpecials; ++i) {
    if (v.tokens_[i] != kSpecialNames[i]) throw DataFormatError("vocab: specials block out of order");
  }
  v.index();
  return v;
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  out << to_text();
  if (!out) throw DataFormatError("vocab: cannot write " + path);
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError("vocab: cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::string Vocab::hash() const { return sha256_hex(to_text()); }

std::vector<int> encode_tokens(std::span<const std::string> tokens, const Vocab& v) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(v.id(t));
  return ids;
}

}  // namespace visact::text
