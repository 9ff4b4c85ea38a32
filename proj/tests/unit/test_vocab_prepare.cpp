// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "codesum/java/parser.hpp"
#include "codesum/java/sbt.hpp"
#include "codesum/text/prepare.hpp"
#include "codesum/text/subtoken.hpp"
#include "codesum/text/vocab.hpp"
#include "support.hpp"

using namespace codesum::text;
using codesum::catalog::ApiEntry;
using codesum::corpus::CorpusRecord;
using codesum::corpus::Split;
using Tokens = std::vector<std::string>;

TEST(Vocab, SpecialsThenFrequency) {
  const auto v = Vocabulary::build({{"a", "b", "a"}}, 10);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v.token(Vocabulary::kPad), "<pad>");
  EXPECT_EQ(v.token(Vocabulary::kBos), "<s>");
  EXPECT_EQ(v.token(Vocabulary::kEos), "</s>");
  EXPECT_EQ(v.token(Vocabulary::kUnk), "<unk>");
  EXPECT_EQ(v.id("a"), 4);
  EXPECT_EQ(v.id("b"), 5);
}

TEST(Vocab, TieBrokenByFirstSeen) {
  const auto v = Vocabulary::build({{"b", "a"}, {"a", "b"}}, 10);
  EXPECT_LT(v.id("b"), v.id("a"));
}

TEST(Vocab, MinFreqAndMaxSize) {
  const auto v = Vocabulary::build({{"a", "b", "a"}}, 10, 2);
  EXPECT_FALSE(v.contains("b"));
  EXPECT_EQ(v.id("b"), Vocabulary::kUnk);
  const auto small = Vocabulary::build({{"a", "a", "a", "b", "b", "c"}}, 6);
  EXPECT_EQ(small.size(), 6u);
  EXPECT_FALSE(small.contains("c"));
}

TEST(Vocab, SaveLoadRoundTrip) {
  codesum::testing::TempDir dir;
  const auto v = Vocabulary::build({{"x", "y", "z", "y"}}, 100);
  v.save(dir.file("v.txt"));
  EXPECT_EQ(Vocabulary::load(dir.file("v.txt")), v);
}

TEST(Vocab, DecodeEncodeRoundTrip) {
  const Tokens toks = {"sets", "the", "last", "modified", "time"};
  const auto v = Vocabulary::build({toks}, 100);
  EXPECT_EQ(v.decode(v.encode(toks)), toks);
  EXPECT_EQ(v.encode({"unseen"}), (std::vector<TokenId>{Vocabulary::kUnk}));
}

namespace {

ApiEntry entry(const std::string& qualified, std::vector<codesum::ParamDecl> params, std::string desc) {
  ApiEntry e;
  e.qualified_name = qualified;
  e.simple_name = qualified.substr(qualified.rfind('.') + 1);
  e.params = std::move(params);
  e.description = std::move(desc);
  return e;
}

codesum::ranker::RankedApiSet selection(std::size_t n) {
  codesum::ranker::RankedApiSet set;
  for (std::size_t i = 0; i < n; ++i) {
    set.ranked.push_back({entry("a.B.f" + std::to_string(i), {{"int", "x"}}, "Does a thing."), 0, i});
  }
  set.n_selected = n;
  return set;
}

}  // namespace

TEST(Prepare, CodeTruncatedTo256) {
  std::string body;
  for (int i = 0; i < 296; ++i) body += "x ";
  CorpusRecord rec{"r1", "void f() { " + body + "}", "sets the last modified time", Split::Train};
  ASSERT_EQ(subtoken_split(rec.code).size(), 298u);
  const auto sbt = codesum::java::sbt_flatten(codesum::java::parse_method_source("void f() {}"));
  const auto tokens = tokenize_example(rec, sbt, selection(0), ChannelCaps{});
  EXPECT_EQ(tokens.code.size(), 256u);

  std::string code300;
  for (int i = 0; i < 300; ++i) code300 += "tok ";
  rec.code = code300;
  const auto src = Vocabulary::build({{"tok"}}, 100);
  const auto tgt = Vocabulary::build({subtoken_split(rec.comment)}, 100);
  const auto ex = encode_example(rec, sbt, selection(0), src, tgt, ChannelCaps{});
  EXPECT_EQ(ex.code_ids.size(), 256u);
}

TEST(Prepare, CommentCappedAndFramed) {
  std::string comment;
  for (int i = 0; i < 80; ++i) comment += "word ";
  const CorpusRecord rec{"r", "void f() {}", comment, Split::Train};
  const auto sbt = codesum::java::sbt_flatten(codesum::java::parse_method_source(rec.code));
  const auto src = Vocabulary::build({{"f"}}, 100);
  const auto tgt = Vocabulary::build({{"word"}}, 100);
  const auto ex = encode_example(rec, sbt, selection(2), src, tgt, ChannelCaps{});
  ASSERT_EQ(ex.target_ids.size(), 66u);
  EXPECT_EQ(ex.target_ids.front(), Vocabulary::kBos);
  EXPECT_EQ(ex.target_ids.back(), Vocabulary::kEos);
  EXPECT_EQ(ex.desc_channels.size(), 2u);
  EXPECT_EQ(ex.def_channels.size(), 2u);
}

TEST(Prepare, CommentIdsDecode) {
  const CorpusRecord rec{"r", "void f() {}", "Sets the last modified time.", Split::Train};
  const auto sbt = codesum::java::sbt_flatten(codesum::java::parse_method_source(rec.code));
  const auto src = Vocabulary::build({{"f"}}, 100);
  const auto tgt = Vocabulary::build({{"sets", "the", "last", "modified", "time"}}, 100);
  const auto ex = encode_example(rec, sbt, selection(0), src, tgt, ChannelCaps{});
  EXPECT_EQ(ex.target_ids.front(), Vocabulary::kBos);
  EXPECT_EQ(ex.target_ids.back(), Vocabulary::kEos);
  EXPECT_EQ(tgt.decode(ex.target_ids), (Tokens{"sets", "the", "last", "modified", "time"}));
  EXPECT_TRUE(ex.desc_channels.empty());
  EXPECT_TRUE(ex.def_channels.empty());
}

TEST(Prepare, ChannelCapsRespected) {
  ChannelCaps caps;
  caps.ast = 10;
  caps.definition = 3;
  caps.description = 2;
  const CorpusRecord rec{"r", "int add(int a, int b) { return a + b; }", "adds", Split::Test};
  const auto sbt = codesum::java::sbt_flatten(codesum::java::parse_method_source(rec.code));
  const auto t = tokenize_example(rec, sbt, selection(3), caps);
  EXPECT_EQ(t.ast.size(), 10u);
  for (const auto& d : t.definitions) EXPECT_LE(d.size(), 3u);
  for (const auto& d : t.descriptions) EXPECT_LE(d.size(), 2u);
}

TEST(Prepare, JsonlRoundTrip) {
  codesum::testing::TempDir dir;
  PreparedExample a;
  a.id = "x";
  a.split = Split::Validation;
  a.code_ids = {4, 5};
  a.ast_ids = {6};
  a.desc_channels = {{7, 8}};
  a.def_channels = {{9}};
  a.target_ids = {1, 4, 2};
  write_prepared({a}, dir.file("p.jsonl"));
  const auto back = read_prepared(dir.file("p.jsonl"));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], a);
}
