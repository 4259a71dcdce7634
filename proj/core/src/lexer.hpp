// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "prefq/common.hpp"

namespace prefq::internal {

// Tokens shared by the query, formula, profile and graph grammars. `#` starts
// a comment that runs to the end of the line in all of them.
enum class Tok {
  End,
  Ident,   // [A-Za-z_][A-Za-z0-9_]*
  Int,     // [0-9]+
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Colon,
  Eq,      // =
  Gt,      // >
  Lt,      // <
  Arrow,   // ->
  Pipe,    // |
  Amp,     // &
  Bang,    // !
  Tilde,   // ~
  Dot,     // .
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  Tok kind() const { return kind_; }
  const std::string& text() const { return tok_text_; }
  SourcePos pos() const { return tok_pos_; }

  void advance() {
    skip_space_and_comments();
    tok_pos_ = {line_, col_};
    tok_text_.clear();
    if (at_end()) {
      kind_ = Tok::End;
      return;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                           peek() == '_'))
        tok_text_ += take();
      kind_ = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        tok_text_ += take();
      kind_ = Tok::Int;
      return;
    }
    tok_text_ += take();
    switch (c) {
      case '(': kind_ = Tok::LParen; return;
      case ')': kind_ = Tok::RParen; return;
      case '{': kind_ = Tok::LBrace; return;
      case '}': kind_ = Tok::RBrace; return;
      case ',': kind_ = Tok::Comma; return;
      case ';': kind_ = Tok::Semi; return;
      case ':': kind_ = Tok::Colon; return;
      case '=': kind_ = Tok::Eq; return;
      case '>': kind_ = Tok::Gt; return;
      case '<': kind_ = Tok::Lt; return;
      case '|': kind_ = Tok::Pipe; return;
      case '&': kind_ = Tok::Amp; return;
      case '!': kind_ = Tok::Bang; return;
      case '~': kind_ = Tok::Tilde; return;
      case '.': kind_ = Tok::Dot; return;
      case '-':
        if (!at_end() && peek() == '>') {
          tok_text_ += take();
          kind_ = Tok::Arrow;
          return;
        }
        throw ParseError("unexpected character '-'", tok_pos_);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         tok_pos_);
    }
  }

  bool is_ident(std::string_view word) const {
    return kind_ == Tok::Ident && tok_text_ == word;
  }

  std::string expect_ident(const char* what) {
    if (kind_ != Tok::Ident)
      throw ParseError(std::string("expected ") + what, tok_pos_);
    std::string s = tok_text_;
    advance();
    return s;
  }

  long long expect_int(const char* what) {
    if (kind_ != Tok::Int)
      throw ParseError(std::string("expected ") + what, tok_pos_);
    long long v = 0;
    for (char c : tok_text_) {
      v = v * 10 + (c - '0');
      if (v > 1'000'000'000'000LL)
        throw ParseError("number too large", tok_pos_);
    }
    advance();
    return v;
  }

  void expect(Tok t, const char* what) {
    if (kind_ != t)
      throw ParseError(std::string("expected ") + what, tok_pos_);
    advance();
  }

  bool accept(Tok t) {
    if (kind_ != t) return false;
    advance();
    return true;
  }

  void expect_end() {
    if (kind_ != Tok::End)
      throw ParseError("unexpected trailing input", tok_pos_);
  }

 private:
  bool at_end() const { return i_ >= text_.size(); }
  char peek() const { return text_[i_]; }
  char take() {
    char c = text_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Tok kind_ = Tok::End;
  std::string tok_text_;
  SourcePos tok_pos_{1, 1};
};

}  // namespace prefq::internal
