// SPDX-License-Identifier: Apache-2.0
#include "codesum/java/lexer.hpp"

#include <algorithm>
#include <array>

#include "codesum/errors.hpp"

namespace codesum::java {
namespace {

constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",     "case",      "catch",
    "char",     "class",      "const",     "continue",  "default",  "do",        "double",
    "else",     "enum",       "extends",   "final",     "finally",  "float",     "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",  "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",    "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient", "try",      "void",      "volatile",
    "while",    "var"};

// Longest first so a linear scan yields the longest match.
constexpr std::array<std::string_view, 38> kOperators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",   ">=",  "+=",  "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", ">>", "=",
    ">",    "<",   "!",   "~",   "?",   ":",  "+",  "-",  "*",  "/",  "&",  "|"};

constexpr std::string_view kPunctuation = "(){}[];,.@";

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<JToken> lex_java(std::string_view src) {
  std::vector<JToken> tokens;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto at = [&](std::size_t k) -> unsigned char { return k < n ? src[k] : '\0'; };

  while (i < n) {
    const unsigned char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      const auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) throw LexError("unterminated block comment", i);
      i = close + 2;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < n && ident_part(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      TokenKind kind = TokenKind::Identifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::Literal;
      } else if (is_java_keyword(word)) {
        kind = TokenKind::Keyword;
      }
      tokens.push_back({kind, std::move(word), start});
      continue;
    }
    if (is_digit(c) || (c == '.' && is_digit(at(i + 1)))) {
      // Numeric literal: digits, hex/binary prefixes, underscores, fraction,
      // exponent and type suffix are all absorbed.
      const bool hex = c == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X');
      while (i < n && (ident_part(src[i]) || src[i] == '.')) {
        const unsigned char d = src[i];
        const bool exponent = hex ? (d == 'p' || d == 'P') : (d == 'e' || d == 'E');
        i += (exponent && (at(i + 1) == '+' || at(i + 1) == '-')) ? 2 : 1;
      }
      tokens.push_back({TokenKind::Literal, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (c == '"' && at(i + 1) == '"' && at(i + 2) == '"') {
      const auto close = src.find("\"\"\"", i + 3);
      if (close == std::string_view::npos) throw LexError("unterminated text block", start);
      i = close + 3;
      tokens.push_back({TokenKind::Literal, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (c == '"' || c == '\'') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (src[i] == '\\') {
          i += 2;
          continue;
        }
        if (src[i] == '\n') break;
        if (static_cast<unsigned char>(src[i]) == c) {
          ++i;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        throw LexError(c == '"' ? "unterminated string literal" : "unterminated char literal", start);
      }
      tokens.push_back({TokenKind::Literal, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (kPunctuation.find(static_cast<char>(c)) != std::string_view::npos) {
      if (c == '.' && src.substr(i, 3) == "...") {
        tokens.push_back({TokenKind::Operator, "...", start});
        i += 3;
        continue;
      }
      tokens.push_back({TokenKind::Punctuation, std::string(1, static_cast<char>(c)), start});
      ++i;
      continue;
    }
    bool matched = false;
    for (std::string_view op : kOperators) {
      if (src.substr(i, op.size()) == op) {
        tokens.push_back({TokenKind::Operator, std::string(op), start});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (c == '^' || c == '%') {
        tokens.push_back({TokenKind::Operator, std::string(1, static_cast<char>(c)), start});
        ++i;
        continue;
      }
      throw LexError("unexpected character '" + std::string(1, static_cast<char>(c)) + "'", start);
    }
  }
  return tokens;
}

}  // namespace codesum::java
