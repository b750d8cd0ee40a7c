// Copyright 2026 The mlcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lossless tokenizer for MATLAB/Octave source.
//
// Every byte of the input belongs to exactly one token, so concatenating the
// token texts reproduces the input. The one genuinely ambiguous character in
// the language, the single quote, is resolved from the previous
// non-whitespace token: after a value (identifier, number, closing bracket,
// string or another transpose) it is the transpose operator, anywhere else it
// opens a character array.
//
// A second, permissive dialect lexes the Julia-flavoured text the translator
// emits, which is what the round-trip and idempotence checks re-lex.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlcompat/error.hpp"

namespace mlcompat {

enum class TokenKind {
  Identifier,
  Keyword,
  NumberLiteral,
  StringLiteral,
  Operator,
  Transpose,
  Comment,
  Newline,
  Whitespace,
  Punct,
  LineContinuation,
  Unknown,
};

enum class PunctKind {
  None,
  OpenParen,
  CloseParen,
  OpenBracket,
  CloseBracket,
  OpenBrace,
  CloseBrace,
  Comma,
  Semicolon,
};

enum class Dialect {
  Matlab,
  // Translator output; `#` comments, `#= =#` blocks, backslash escapes.
  JuliaOutput,
};

struct SourceSpan {
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;  // exclusive
  std::size_t line = 1;
  std::size_t col = 1;  // in bytes

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct Token {
  TokenKind kind = TokenKind::Unknown;
  PunctKind punct = PunctKind::None;
  std::string text;
  SourceSpan span;

  bool is(TokenKind k) const { return kind == k; }
  bool is_punct(PunctKind p) const { return kind == TokenKind::Punct && punct == p; }
  bool is_trivia() const { return kind == TokenKind::Whitespace; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct LexDiagnostic {
  SourceSpan span;
  std::string message;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<LexDiagnostic> diagnostics;
};

inline constexpr std::array<std::string_view, 10> kKeywords = {
    "function", "end",    "if",     "elseif", "else",
    "for",      "while",  "return", "break",  "continue"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

inline std::string_view kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::NumberLiteral: return "NumberLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Transpose: return "Transpose";
    case TokenKind::Comment: return "Comment";
    case TokenKind::Newline: return "Newline";
    case TokenKind::Whitespace: return "Whitespace";
    case TokenKind::Punct: return "Punct";
    case TokenKind::LineContinuation: return "LineContinuation";
    case TokenKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

inline std::optional<TokenKind> kind_from_name(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(TokenKind::Unknown); ++i) {
    auto k = static_cast<TokenKind>(i);
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

/// Throws InvalidUtf8 with the offset of the first bad sequence.
inline void validate_utf8(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      throw InvalidUtf8(i);
    }
    if (i + len > n) throw InvalidUtf8(i);
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) throw InvalidUtf8(i);
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw InvalidUtf8(i);
    i += len;
  }
}

namespace detail {

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
inline bool is_hex_digit(char c) {
  return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
inline bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v'; }
inline bool is_eol(char c) { return c == '\n' || c == '\r'; }

inline std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  return 4;
}

class Lexer {
 public:
  Lexer(std::string_view src, Dialect dialect) : src_(src), dialect_(dialect) {}

  LexResult run() {
    while (pos_ < src_.size()) step();
    return std::move(out_);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool julia() const { return dialect_ == Dialect::JuliaOutput; }

  std::size_t line_end(std::size_t from) const {
    while (from < src_.size() && !is_eol(src_[from])) ++from;
    return from;
  }

  // Emits [pos_, end) and advances the line/column bookkeeping.
  void emit(TokenKind kind, std::size_t end, PunctKind punct = PunctKind::None) {
    Token t;
    t.kind = kind;
    t.punct = punct;
    t.text = std::string(src_.substr(pos_, end - pos_));
    t.span = {pos_, end, line_, col_};
    for (std::size_t i = pos_; i < end; ++i) {
      const char c = src_[i];
      if (c == '\n' || (c == '\r' && (i + 1 >= end || src_[i + 1] != '\n'))) {
        ++line_;
        col_ = 1;
      } else if (c != '\r') {
        ++col_;
      }
    }
    pos_ = end;
    out_.tokens.push_back(std::move(t));
    if (kind != TokenKind::Whitespace) {
      prev_kind_ = kind;
      prev_punct_ = punct;
    }
  }

  void diagnose(std::size_t start, std::size_t end, std::string message) {
    out_.diagnostics.push_back({{start, end, line_, col_}, std::move(message)});
  }

  bool value_precedes() const {
    if (!prev_kind_) return false;
    switch (*prev_kind_) {
      case TokenKind::Identifier:
      case TokenKind::NumberLiteral:
      case TokenKind::Transpose:
      case TokenKind::StringLiteral:
        return true;
      case TokenKind::Punct:
        return prev_punct_ == PunctKind::CloseParen ||
               prev_punct_ == PunctKind::CloseBracket ||
               prev_punct_ == PunctKind::CloseBrace;
      default:
        return false;
    }
  }

  // True when [pos_, pos_+marker.size()) is the only non-blank content of
  // its line.
  bool alone_on_line(std::size_t at, std::string_view marker) const {
    std::size_t ls = at;
    while (ls > 0 && !is_eol(src_[ls - 1])) --ls;
    for (std::size_t i = ls; i < at; ++i)
      if (!is_blank(src_[i])) return false;
    if (src_.substr(at, marker.size()) != marker) return false;
    const std::size_t le = line_end(at);
    for (std::size_t i = at + marker.size(); i < le; ++i)
      if (!is_blank(src_[i])) return false;
    return true;
  }

  static std::string_view trim_blank(std::string_view s) {
    while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
    return s;
  }

  std::size_t next_line_start(std::size_t le) const {
    if (le < src_.size() && src_[le] == '\r') ++le;
    if (le < src_.size() && src_[le] == '\n') ++le;
    return le;
  }

  // `%{` ... `%}` (or `#{` ... `#}`), markers alone on their lines, nesting.
  void lex_block_comment(char lead) {
    const std::string open{lead, '{'};
    const std::string close{lead, '}'};
    int depth = 0;
    std::size_t ls = pos_;
    while (ls > 0 && !is_eol(src_[ls - 1])) --ls;
    while (ls < src_.size()) {
      const std::size_t le = line_end(ls);
      const auto content = trim_blank(src_.substr(ls, le - ls));
      if (content == open) {
        ++depth;
      } else if (content == close) {
        if (--depth == 0) {
          emit(TokenKind::Comment, src_.find(close, ls) + 2);
          return;
        }
      }
      ls = next_line_start(le);
    }
    const std::size_t start = pos_;
    diagnose(start, src_.size(), "unterminated block comment");
    emit(TokenKind::Comment, src_.size());
  }

  // Julia `#= ... =#`, nesting.
  void lex_julia_block_comment() {
    int depth = 0;
    std::size_t i = pos_;
    while (i < src_.size()) {
      if (src_.compare(i, 2, "#=") == 0) {
        ++depth;
        i += 2;
      } else if (src_.compare(i, 2, "=#") == 0) {
        i += 2;
        if (--depth == 0) {
          emit(TokenKind::Comment, i);
          return;
        }
      } else {
        ++i;
      }
    }
    diagnose(pos_, src_.size(), "unterminated block comment");
    emit(TokenKind::Comment, src_.size());
  }

  void lex_line_comment() { emit(TokenKind::Comment, line_end(pos_)); }

  void unterminated(std::size_t start) {
    const std::size_t le = line_end(start);
    diagnose(start, le, "unterminated string literal");
    emit(TokenKind::Unknown, le);
  }

  // MATLAB char array: '' is an embedded quote.
  void lex_single_quoted() {
    std::size_t i = pos_ + 1;
    while (i < src_.size() && !is_eol(src_[i])) {
      if (src_[i] == '\'') {
        if (i + 1 < src_.size() && src_[i + 1] == '\'') {
          i += 2;
          continue;
        }
        emit(TokenKind::StringLiteral, i + 1);
        return;
      }
      ++i;
    }
    unterminated(pos_);
  }

  // Julia character literal: 'x', '\n', '\''.
  void lex_char_literal() {
    std::size_t i = pos_ + 1;
    if (i < src_.size() && src_[i] == '\\') i += 2;
    else if (i < src_.size() && !is_eol(src_[i]))
      i += utf8_length(static_cast<unsigned char>(src_[i]));
    if (i < src_.size() && src_[i] == '\'') {
      emit(TokenKind::StringLiteral, i + 1);
      return;
    }
    unterminated(pos_);
  }

  // Octave/Julia string: backslash escapes; Octave also doubles "".
  void lex_double_quoted() {
    std::size_t i = pos_ + 1;
    while (i < src_.size() && !is_eol(src_[i])) {
      const char c = src_[i];
      if (c == '\\' && i + 1 < src_.size() && !is_eol(src_[i + 1])) {
        i += 2;
        continue;
      }
      if (c == '"') {
        if (!julia() && i + 1 < src_.size() && src_[i + 1] == '"') {
          i += 2;
          continue;
        }
        emit(TokenKind::StringLiteral, i + 1);
        return;
      }
      ++i;
    }
    unterminated(pos_);
  }

  void lex_number() {
    std::size_t i = pos_;
    const auto at = [&](std::size_t k) { return k < src_.size() ? src_[k] : '\0'; };
    if (at(i) == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X') && is_hex_digit(at(i + 2))) {
      i += 2;
      while (is_hex_digit(at(i)) || (julia() && at(i) == '_')) ++i;
      emit(TokenKind::NumberLiteral, i);
      return;
    }
    while (is_digit(at(i)) || (julia() && at(i) == '_' && is_digit(at(i + 1)))) ++i;
    if (at(i) == '.') {
      const char next = at(i + 1);
      const bool elementwise_op =
          next == '*' || next == '/' || next == '\\' || next == '^' || next == '\'';
      const bool continuation = next == '.';
      if (!elementwise_op && !continuation) {
        ++i;
        while (is_digit(at(i))) ++i;
      }
    }
    const char e = at(i);
    if (e == 'e' || e == 'E' || (!julia() && (e == 'd' || e == 'D'))) {
      std::size_t k = i + 1;
      if (at(k) == '+' || at(k) == '-') ++k;
      if (is_digit(at(k))) {
        i = k;
        while (is_digit(at(i))) ++i;
      }
    }
    if ((at(i) == 'i' || at(i) == 'j') && !is_ident_char(at(i + 1))) {
      ++i;
    } else if (julia() && at(i) == 'i' && at(i + 1) == 'm' && !is_ident_char(at(i + 2))) {
      i += 2;  // Julia imaginary literal
    }
    emit(TokenKind::NumberLiteral, i);
  }

  void lex_identifier() {
    std::size_t i = pos_;
    while (i < src_.size() && is_ident_char(src_[i])) ++i;
    if (julia()) {
      while (i < src_.size() && (is_ident_char(src_[i]) ||
                                 static_cast<unsigned char>(src_[i]) >= 0x80))
        ++i;
      if (i < src_.size() && src_[i] == '!' && (i + 1 >= src_.size() || src_[i + 1] != '='))
        ++i;
    }
    const auto word = src_.substr(pos_, i - pos_);
    emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, i);
  }

  void lex_continuation() {
    emit(TokenKind::LineContinuation, pos_ + 3);
    std::size_t i = pos_;
    while (i < src_.size() && is_blank(src_[i])) ++i;
    if (i > pos_) emit(TokenKind::Whitespace, i);
    const std::size_t le = line_end(pos_);
    if (le > pos_) emit(TokenKind::Comment, le);
  }

  bool try_operator() {
    static constexpr std::array<std::string_view, 11> kMatlabMulti = {
        "==", "~=", "!=", "<=", ">=", "&&", "||", ".*", "./", ".\\", ".^"};
    static constexpr std::array<std::string_view, 22> kJuliaMulti = {
        "...", "===", "!==", ".==", "==", "!=", "<=", ">=", "&&", "||", "->", "=>",
        "::",  ".*",  "./",  ".^",  ".+", ".-", "+=", "-=", "*=", "/="};
    const auto rest = src_.substr(pos_);
    if (julia()) {
      for (auto op : kJuliaMulti)
        if (rest.starts_with(op)) return emit(TokenKind::Operator, pos_ + op.size()), true;
    } else {
      for (auto op : kMatlabMulti)
        if (rest.starts_with(op)) return emit(TokenKind::Operator, pos_ + op.size()), true;
    }
    static constexpr std::string_view kMatlabSingle = "+-*/\\^<>=&|~!:.@";
    static constexpr std::string_view kJuliaSingle = "+-*/\\^<>=&|~!:.@%$?`";
    const auto& singles = julia() ? kJuliaSingle : kMatlabSingle;
    if (singles.find(peek()) != std::string_view::npos) {
      emit(TokenKind::Operator, pos_ + 1);
      return true;
    }
    return false;
  }

  void step() {
    const char c = peek();

    if (c == '\r' || c == '\n') {
      std::size_t end = pos_ + 1;
      if (c == '\r' && peek(1) == '\n') ++end;
      emit(TokenKind::Newline, end);
      return;
    }
    if (is_blank(c)) {
      std::size_t i = pos_;
      while (i < src_.size() && is_blank(src_[i])) ++i;
      emit(TokenKind::Whitespace, i);
      return;
    }

    if (julia()) {
      if (c == '#') {
        if (peek(1) == '=') lex_julia_block_comment();
        else lex_line_comment();
        return;
      }
    } else {
      if (c == '%' || c == '#') {
        if (peek(1) == '{' && alone_on_line(pos_, std::string{c, '{'})) lex_block_comment(c);
        else lex_line_comment();
        return;
      }
      if (c == '.' && peek(1) == '.' && peek(2) == '.') {
        lex_continuation();
        return;
      }
    }

    if (c == '\'') {
      if (value_precedes()) emit(TokenKind::Transpose, pos_ + 1);
      else if (julia()) lex_char_literal();
      else lex_single_quoted();
      return;
    }
    if (c == '.' && peek(1) == '\'' && value_precedes()) {
      emit(TokenKind::Transpose, pos_ + 2);
      return;
    }
    if (c == '"') {
      lex_double_quoted();
      return;
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
      lex_number();
      return;
    }
    if (is_ident_start(c) || (julia() && static_cast<unsigned char>(c) >= 0x80)) {
      lex_identifier();
      return;
    }

    switch (c) {
      case '(': return emit(TokenKind::Punct, pos_ + 1, PunctKind::OpenParen);
      case ')': return emit(TokenKind::Punct, pos_ + 1, PunctKind::CloseParen);
      case '[': return emit(TokenKind::Punct, pos_ + 1, PunctKind::OpenBracket);
      case ']': return emit(TokenKind::Punct, pos_ + 1, PunctKind::CloseBracket);
      case '{': return emit(TokenKind::Punct, pos_ + 1, PunctKind::OpenBrace);
      case '}': return emit(TokenKind::Punct, pos_ + 1, PunctKind::CloseBrace);
      case ',': return emit(TokenKind::Punct, pos_ + 1, PunctKind::Comma);
      case ';': return emit(TokenKind::Punct, pos_ + 1, PunctKind::Semicolon);
      default: break;
    }
    if (try_operator()) return;

    emit(TokenKind::Unknown, pos_ + utf8_length(static_cast<unsigned char>(c)));
  }

  std::string_view src_;
  Dialect dialect_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::optional<TokenKind> prev_kind_;
  PunctKind prev_punct_ = PunctKind::None;
  LexResult out_;
};

}  // namespace detail

/// Tokenizes `source` losslessly. Throws InvalidUtf8 before lexing starts;
/// recoverable problems (unterminated strings or block comments) land in
/// `diagnostics` and lexing resumes on the next line.
inline LexResult tokenize(std::string_view source, Dialect dialect = Dialect::Matlab) {
  validate_utf8(source);
  return detail::Lexer(source, dialect).run();
}

/// Concatenation of all token texts; equals the lexed source.
inline std::string join_tokens(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += t.text;
  return out;
}

}  // namespace mlcompat
