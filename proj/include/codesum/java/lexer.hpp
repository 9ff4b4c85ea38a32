// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace codesum::java {

enum class TokenKind { Identifier, Keyword, Literal, Operator, Punctuation };

std::string_view to_string(TokenKind kind);

struct JToken {
  TokenKind kind;
  std::string text;
  std::size_t offset;  // byte index into the source

  std::size_t end() const { return offset + text.size(); }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool operator==(const JToken&) const = default;
};

/// Tokenizes Java source. Whitespace and comments are dropped; string, char
/// and text-block literals are single tokens; operators use longest match.
/// Throws LexError on unterminated literals or block comments and on bytes
/// that cannot start any token.
std::vector<JToken> lex_java(std::string_view source);

bool is_java_keyword(std::string_view word);

}  // namespace codesum::java
