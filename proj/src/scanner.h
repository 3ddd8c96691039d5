// Copyright 2026 The mdclean Authors.
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

// Tokenizer shared by the rule, program and query languages.

#ifndef MDCLEAN_SRC_SCANNER_H_
#define MDCLEAN_SRC_SCANNER_H_

#include <string>
#include <string_view>
#include <vector>

namespace mdclean::internal {

struct Token {
  enum class Kind { kIdent, kString, kPunct, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

class Scanner {
 public:
  // `comment_chars` start a comment running to the end of the line.
  Scanner(std::string_view text, std::string source,
          std::string_view comment_chars);

  const Token &peek(std::size_t ahead = 0) const;
  Token next();
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const;
  bool is_ident(std::string_view word, std::size_t ahead = 0) const;
  // Consumes the punctuation if present.
  bool accept(std::string_view p);
  Token expect(std::string_view p);
  Token expect_ident(std::string_view what);

  [[noreturn]] void fail(const Token &at, const std::string &message) const;
  const std::string &source() const { return source_; }

 private:
  std::string source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Identifier per the scanner: letters, digits, '_' and '\''.
bool is_plain_identifier(std::string_view s);

// Double-quoted form with backslash escapes.
std::string quote(std::string_view s);

}  // namespace mdclean::internal

#endif  // MDCLEAN_SRC_SCANNER_H_
