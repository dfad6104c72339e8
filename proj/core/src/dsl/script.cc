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

#include "visact/dsl/script.h"

#include <cctype>
#include <limits>
#include <sstream>

namespace visact::dsl {
namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  int line() const { return line_; }
  int column() const { return column_; }

  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (!at_end() && is_blank(peek())) advance();
  }

  // Blanks, newlines and commas.
  void skip_separators() {
    while (!at_end() && (is_blank(peek()) || peek() == '\n' || peek() == ',')) advance();
  }

  void skip_whitespace() {
    while (!at_end() && (is_blank(peek()) || peek() == '\n')) advance();
  }

  // Next non-whitespace character after the current one, without consuming.
  char peek_after_current() const {
    size_t j = pos_ + 1;
    while (j < text_.size() && (is_blank(text_[j]) || text_[j] == '\n')) ++j;
    return j < text_.size() ? text_[j] : '\0';
  }

  std::string take_ident() {
    std::string out;
    while (!at_end() && is_ident_char(peek())) {
      out.push_back(peek());
      advance();
    }
    return out;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct Failure {
  ParseError error;
};

ParseError syntax_error(const Scanner& s, std::string expected) {
  return ParseError{ParseError::Kind::kSyntax, s.line(), s.column(), std::move(expected)};
}

void expect_char(Scanner& s, char c, const char* what) {
  if (s.peek() != c) throw Failure{syntax_error(s, what)};
  s.advance();
}

ActionStep parse_step(Scanner& s, bool outer) {
  const int step_line = s.line();
  const int step_col = s.column();
  expect_char(s, '[', "'[' opening a verb");
  s.skip_blanks();
  std::string verb = s.take_ident();
  if (verb.empty()) throw Failure{syntax_error(s, "verb name")};
  s.skip_blanks();
  expect_char(s, ']', "']' closing the verb");

  ActionStep step;
  step.verb = canonical_verb(verb);
  for (;;) {
    s.skip_blanks();
    if (s.peek() != '<') break;
    if (step.args.size() == 2) throw Failure{syntax_error(s, "',' or newline (at most two arguments)")};
    s.advance();
    s.skip_blanks();
    std::string name = s.take_ident();
    if (name.empty()) throw Failure{syntax_error(s, "object name")};
    s.skip_blanks();
    expect_char(s, '>', "'>' closing the object name");
    s.skip_blanks();
    expect_char(s, '(', "'(' opening the object id");
    s.skip_blanks();
    if (!std::isdigit(static_cast<unsigned char>(s.peek()))) throw Failure{syntax_error(s, "positive integer id")};
    const int id_line = s.line();
    const int id_col = s.column();
    long long id = 0;
    while (std::isdigit(static_cast<unsigned char>(s.peek()))) {
      id = id * 10 + (s.peek() - '0');
      if (id > std::numeric_limits<int>::max()) {
        throw Failure{ParseError{ParseError::Kind::kSyntax, id_line, id_col, "id within int range"}};
      }
      s.advance();
    }
    if (id == 0) throw Failure{ParseError{ParseError::Kind::kSyntax, id_line, id_col, "positive integer id"}};
    s.skip_blanks();
    expect_char(s, ')', "')' closing the object id");
    step.args.push_back(ObjectRef{std::move(name), static_cast<int>(id)});
  }

  const char next = s.peek();
  if (!(s.at_end() || next == '\n' || next == ',' || (outer && next == ']'))) {
    throw Failure{syntax_error(s, "',' or newline")};
  }
  if (auto info = lookup_verb(step.verb); info && static_cast<int>(step.args.size()) != info->arity) {
    throw Failure{ParseError{ParseError::Kind::kUnknownArity, step_line, step_col,
                             std::string(info->name) + " with " + std::to_string(info->arity) + " argument(s)"}};
  }
  return step;
}

}  // namespace

std::string ParseError::to_string() const {
  std::ostringstream os;
  os << (kind == Kind::kUnknownArity ? "arity error" : "parse error") << " at " << line << ':' << column
     << ": expected " << expected;
  return os.str();
}

Result<Program, ParseError> parse_program(std::string_view text) {
  Scanner s(text);
  Program program;
  try {
    s.skip_whitespace();
    bool outer = false;
    if (s.peek() == '[') {
      const char after = s.peek_after_current();
      if (after == '[' || after == ']') {
        outer = true;
        s.advance();
      }
    }
    for (;;) {
      s.skip_separators();
      if (s.at_end()) {
        if (outer) return syntax_error(s, "']' closing the program");
        break;
      }
      if (outer && s.peek() == ']') {
        s.advance();
        s.skip_whitespace();
        if (!s.at_end()) return syntax_error(s, "end of input");
        break;
      }
      program.steps.push_back(parse_step(s, outer));
    }
  } catch (const Failure& f) {
    return f.error;
  }
  return program;
}

std::string format_step(const ActionStep& step) {
  std::string out = "[" + canonical_verb(step.verb) + "]";
  for (const auto& arg : step.args) {
    out += " <" + arg.name + "> (" + std::to_string(arg.id) + ")";
  }
  return out;
}

std::string format_program(const Program& program) {
  std::string out;
  for (size_t i = 0; i < program.steps.size(); ++i) {
    if (i) out.push_back('\n');
    out += format_step(program.steps[i]);
  }
  return out;
}

}  // namespace visact::dsl
