// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "codesum/errors.hpp"
#include "codesum/java/lexer.hpp"

using namespace codesum::java;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : lex_java(src)) out.emplace_back(t.kind, t.text);
  return out;
}

}  // namespace

TEST(Lexer, Declaration) {
  const auto toks = kinds("int x = 1;");
  const std::vector<std::pair<TokenKind, std::string>> want = {{TokenKind::Keyword, "int"},
                                                               {TokenKind::Identifier, "x"},
                                                               {TokenKind::Operator, "="},
                                                               {TokenKind::Literal, "1"},
                                                               {TokenKind::Punctuation, ";"}};
  EXPECT_EQ(toks, want);
}

TEST(Lexer, MemberCall) {
  const auto toks = kinds("s.startsWith(prefix)");
  const std::vector<std::pair<TokenKind, std::string>> want = {
      {TokenKind::Identifier, "s"},      {TokenKind::Punctuation, "."},
      {TokenKind::Identifier, "startsWith"}, {TokenKind::Punctuation, "("},
      {TokenKind::Identifier, "prefix"}, {TokenKind::Punctuation, ")"}};
  EXPECT_EQ(toks, want);
}

TEST(Lexer, StringLiteralKeepsSeparators) {
  const auto toks = lex_java("String s = \"a;b\";");
  ASSERT_EQ(toks.size(), 5u);
  EXPECT_EQ(toks[3].kind, TokenKind::Literal);
  EXPECT_EQ(toks[3].text, "\"a;b\"");
}

TEST(Lexer, CommentsDropped) {
  const auto toks = lex_java("a /* b */ c // d\n e");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[2].text, "e");
}

TEST(Lexer, LongestOperatorMatch) {
  const auto toks = lex_java("x >>>= 2");
  ASSERT_EQ(toks.size(), 3u);
  EXPECT_EQ(toks[1].text, ">>>=");
}

TEST(Lexer, NumericLiterals) {
  for (const char* lit : {"0xFFL", "1.5e-3f", "42", "3.0", "'c'"}) {
    const auto toks = lex_java(lit);
    ASSERT_EQ(toks.size(), 1u) << lit;
    EXPECT_EQ(toks[0].kind, TokenKind::Literal) << lit;
  }
}

TEST(Lexer, OffsetsPointIntoSource) {
  const std::string src = "return  value;";
  for (const auto& t : lex_java(src)) EXPECT_EQ(src.substr(t.offset, t.text.size()), t.text);
}

TEST(Lexer, UnterminatedStringReportsOffset) {
  try {
    lex_java("x = \"abc");
    FAIL() << "expected LexError";
  } catch (const codesum::LexError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}
