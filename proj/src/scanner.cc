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

#include "scanner.h"

#include <cctype>

#include "mdclean/error.h"

namespace mdclean::internal {

namespace {

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

constexpr std::string_view kTwoCharPuncts[] = {":-", ":=", "->", "!="};
constexpr std::string_view kOneCharPuncts = "(),;:~.|=";

}  // namespace

Scanner::Scanner(std::string_view text, std::string source,
                 std::string_view comment_chars)
    : source_(std::move(source)) {
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (comment_chars.find(c) != std::string_view::npos) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (IsIdentChar(c) && c != '\'') {
      std::size_t j = i;
      while (j < text.size() && IsIdentChar(text[j])) ++j;
      tok.kind = Token::Kind::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Token::Kind::kString;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\\' && i + 1 < text.size()) {
          advance(1);
          d = text[i];
          if (d == 'n') d = '\n';
          if (d == 't') d = '\t';
        } else if (d == '\n') {
          break;
        }
        tok.text += d;
        advance(1);
      }
      if (!closed) {
        throw ParseError(source_, tok.line, tok.column,
                         "unterminated string literal");
      }
    } else {
      tok.kind = Token::Kind::kPunct;
      bool matched = false;
      for (std::string_view p : kTwoCharPuncts) {
        if (text.substr(i, 2) == p) {
          tok.text = std::string(p);
          advance(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (kOneCharPuncts.find(c) == std::string_view::npos) {
          throw ParseError(source_, line, col,
                           std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(1, c);
        advance(1);
      }
    }
    tokens_.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.line = line;
  end.column = col;
  tokens_.push_back(end);
}

const Token &Scanner::peek(std::size_t ahead) const {
  const std::size_t at = pos_ + ahead;
  return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

Token Scanner::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Scanner::is_punct(std::string_view p, std::size_t ahead) const {
  const Token &t = peek(ahead);
  return t.kind == Token::Kind::kPunct && t.text == p;
}

bool Scanner::is_ident(std::string_view word, std::size_t ahead) const {
  const Token &t = peek(ahead);
  return t.kind == Token::Kind::kIdent && t.text == word;
}

bool Scanner::accept(std::string_view p) {
  if (!is_punct(p)) return false;
  next();
  return true;
}

Token Scanner::expect(std::string_view p) {
  if (!is_punct(p)) {
    const Token &t = peek();
    fail(t, "expected '" + std::string(p) + "' but found " +
                (t.kind == Token::Kind::kEnd ? std::string("end of input")
                                             : "'" + t.text + "'"));
  }
  return next();
}

Token Scanner::expect_ident(std::string_view what) {
  const Token &t = peek();
  if (t.kind != Token::Kind::kIdent) {
    fail(t, "expected " + std::string(what) + " but found " +
                (t.kind == Token::Kind::kEnd ? std::string("end of input")
                                             : "'" + t.text + "'"));
  }
  return next();
}

void Scanner::fail(const Token &at, const std::string &message) const {
  throw ParseError(source_, at.line, at.column, message);
}

bool is_plain_identifier(std::string_view s) {
  if (s.empty() || s.front() == '\'') return false;
  for (char c : s) {
    if (!IsIdentChar(c)) return false;
  }
  return true;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace mdclean::internal
