// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "codesum/corpus.hpp"
#include "codesum/errors.hpp"
#include "codesum/util/jsonl.hpp"
#include "support.hpp"

using namespace codesum::corpus;

TEST(Corpus, ThreeWellFormedLines) {
  codesum::testing::TempDir dir;
  const std::vector<CorpusRecord> recs = {{"a", "void a() {}", "does a", Split::Train},
                                          {"b", "void b() {}", "does b", Split::Validation},
                                          {"c", "void c() {}", "does c", std::nullopt}};
  write_corpus(recs, dir.file("c.jsonl"));
  const auto load = load_corpus(dir.file("c.jsonl"));
  EXPECT_EQ(load.records, recs);
  EXPECT_TRUE(load.errors.empty());
}

TEST(Corpus, MalformedLineReported) {
  codesum::testing::TempDir dir;
  codesum::util::write_text_file(dir.file("c.jsonl"),
                                 R"({"id":"a","code":"void a() {}","comment":"x"})" "\n"
                                 R"({"id":"b","code":)" "\n"
                                 R"({"id":"c","code":"void c() {}","comment":"y"})" "\n");
  const auto load = load_corpus(dir.file("c.jsonl"));
  EXPECT_EQ(load.records.size(), 2u);
  ASSERT_EQ(load.errors.size(), 1u);
  EXPECT_EQ(load.errors[0].line, 2u);
}

TEST(Corpus, EmptyFile) {
  codesum::testing::TempDir dir;
  write_corpus({}, dir.file("c.jsonl"));
  EXPECT_TRUE(codesum::util::read_text_file(dir.file("c.jsonl")).empty());
  EXPECT_TRUE(load_corpus(dir.file("c.jsonl")).records.empty());
}

TEST(Corpus, MissingFileIsIoError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), codesum::IoError);
}

TEST(CorpusProperty, RandomRoundTrip) {
  codesum::testing::TempDir dir;
  std::mt19937 rng(99);
  auto random_string = [&](std::size_t max_len) {
    std::string s(1 + rng() % max_len, ' ');  // empty fields are rejected on load
    for (auto& c : s) c = static_cast<char>(1 + rng() % 126);  // includes quotes, newlines, controls
    return s;
  };
  std::vector<CorpusRecord> recs;
  for (int i = 0; i < 1000; ++i) {
    CorpusRecord r{"id" + std::to_string(i), random_string(80), random_string(30), std::nullopt};
    const auto s = rng() % 4;
    if (s < 3) r.split = static_cast<Split>(s);
    recs.push_back(std::move(r));
  }
  write_corpus(recs, dir.file("r.jsonl"));
  const auto load = load_corpus(dir.file("r.jsonl"));
  ASSERT_TRUE(load.errors.empty()) << load.errors[0].line << ": " << load.errors[0].message;
  ASSERT_EQ(load.records.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) ASSERT_TRUE(load.records[i] == recs[i]) << i;
}

TEST(Corpus, FilterCapsAndParseability) {
  std::string long_body;
  for (int i = 0; i < 300; ++i) long_body += "x ";
  const std::vector<CorpusRecord> recs = {
      {"ok", "int f(int a) { return a + 1; }", "adds one", Split::Train},
      {"long", "void g() { " + long_body + "}", "long", Split::Train},
      {"bad", "void h( {", "broken", Split::Test},
  };
  const auto res = filter_corpus(recs, FilterOptions{});
  ASSERT_EQ(res.kept.size(), 1u);
  EXPECT_EQ(res.kept[0].id, "ok");
  EXPECT_EQ(res.stats.removed_too_long, 1u);
  EXPECT_EQ(res.stats.removed_unparseable, 1u);
  EXPECT_EQ(res.stats.train, 1u);
  EXPECT_EQ(res.stats.retained(), 1u);
}

TEST(Corpus, SplitAssignmentIsDeterministic) {
  std::vector<CorpusRecord> a;
  for (int i = 0; i < 200; ++i) a.push_back({"m" + std::to_string(i), "void f() {}", "c", std::nullopt});
  auto b = a;
  assign_missing_splits(a, 5);
  assign_missing_splits(b, 5);
  EXPECT_EQ(a, b);
  std::size_t train = 0;
  for (const auto& r : a) {
    ASSERT_TRUE(r.split.has_value());
    train += *r.split == Split::Train;
  }
  EXPECT_GT(train, 100u);
}
