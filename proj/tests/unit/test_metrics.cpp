// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "codesum/errors.hpp"
#include "codesum/metrics.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace codesum::metrics;

TEST(MetricsGolden, Table) {
  std::ifstream in(codesum::testing::source_path("tests/data/metric_golden.json"));
  ASSERT_TRUE(in.good());
  const auto golden = nlohmann::json::parse(in);
  const double tol = golden.at("tolerance").get<double>();
  ASSERT_GE(golden.at("cases").size(), 5u);
  for (const auto& c : golden.at("cases")) {
    const auto name = c.at("name").get<std::string>();
    const auto cand = c.at("candidate").get<Tokens>();
    const auto ref = c.at("reference").get<Tokens>();
    for (int n = 1; n <= 4; ++n) {
      EXPECT_NEAR(bleu({cand}, {ref}, n, BleuLevel::Corpus), c.at("bleu" + std::to_string(n)).get<double>(), tol)
          << name << " bleu" << n;
      EXPECT_NEAR(sentence_bleu(cand, ref, n), c.at("sentence_bleu" + std::to_string(n)).get<double>(), tol)
          << name << " sentence_bleu" << n;
    }
    EXPECT_NEAR(rouge_l(cand, ref), c.at("rouge_l").get<double>(), tol) << name;
    EXPECT_NEAR(meteor(cand, ref), c.at("meteor").get<double>(), tol) << name;
  }
}

TEST(Metrics, HandComputedAnchors) {
  EXPECT_NEAR(bleu({{"the", "the", "the"}}, {{"the", "cat"}}, 1, BleuLevel::Corpus), 100.0 / 3.0, 1e-9);
  EXPECT_NEAR(bleu({{"a", "b"}}, {{"a", "b", "c", "d"}}, 1, BleuLevel::Corpus), 100.0 * std::exp(-1.0), 1e-9);
  const double p = 0.75, r = 1.0, b2 = 1.44;
  EXPECT_NEAR(rouge_l({"a", "b", "c", "d"}, {"a", "c", "d"}), 100.0 * (1 + b2) * p * r / (r + b2 * p), 1e-9);
  EXPECT_NEAR(meteor({"a", "b", "c", "d"}, {"a", "b", "c", "d"}), 100.0 * (1 - 0.5 / 64.0), 1e-9);
}

TEST(Metrics, EmptyInputs) {
  EXPECT_EQ(rouge_l({}, {"a"}), 0.0);
  EXPECT_EQ(meteor({"a"}, {}), 0.0);
  EXPECT_EQ(bleu({{}}, {{"a"}}, 4, BleuLevel::Corpus), 0.0);
  EXPECT_THROW(bleu({{"a"}}, {{"a"}}, 5, BleuLevel::Corpus), codesum::ValidationError);
}

TEST(Metrics, SwapChunks) {
  const auto a = meteor_align({"a", "c", "b", "d"}, {"a", "b", "c", "d"});
  EXPECT_EQ(a.matches, 4u);
  EXPECT_EQ(a.chunks, 4u);
}

namespace {

// Enumerates every injective equal-word alignment.
Alignment oracle_align(const Tokens& c, const Tokens& r) {
  Alignment best;
  bool have = false;
  std::vector<int> link(c.size(), -1);
  std::vector<bool> used(r.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == c.size()) {
      std::size_t m = 0, chunks = 0;
      int prev_c = -2, prev_r = -2;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (link[k] < 0) continue;
        ++m;
        if (!(static_cast<int>(k) == prev_c + 1 && link[k] == prev_r + 1)) ++chunks;
        prev_c = static_cast<int>(k);
        prev_r = link[k];
      }
      if (!have || m > best.matches || (m == best.matches && chunks < best.chunks)) {
        best = {m, chunks};
        have = true;
      }
      return;
    }
    rec(i + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!used[j] && r[j] == c[i]) {
        used[j] = true;
        link[i] = static_cast<int>(j);
        rec(i + 1);
        link[i] = -1;
        used[j] = false;
      }
    }
  };
  rec(0);
  return best;
}

Tokens random_tokens(std::mt19937& rng, std::size_t max_len) {
  Tokens t(1 + rng() % max_len);
  for (auto& x : t) x = std::string(1, static_cast<char>('a' + rng() % 4));
  return t;
}

}  // namespace

TEST(MetricsProperty, MeteorAlignmentMatchesExhaustiveOracle) {
  std::mt19937 rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto c = random_tokens(rng, 6);
    const auto r = random_tokens(rng, 6);
    const auto got = meteor_align(c, r);
    const auto want = oracle_align(c, r);
    ASSERT_EQ(got.matches, want.matches) << i;
    ASSERT_EQ(got.chunks, want.chunks) << i;
  }
}

TEST(MetricsProperty, BoundsIdentityDisjoint) {
  std::mt19937 rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_tokens(rng, 8);
    const auto r = random_tokens(rng, 8);
    for (int n = 1; n <= 4; ++n) {
      const double b = sentence_bleu(c, r, n);
      ASSERT_GE(b, 0.0);
      ASSERT_LE(b, 100.0 + 1e-9);
      ASSERT_NEAR(bleu({c}, {c}, n, BleuLevel::Corpus), 100.0, 1e-9);
    }
    ASSERT_NEAR(rouge_l(c, c), 100.0, 1e-9);
    ASSERT_LE(meteor(c, r), 100.0);
    Tokens disjoint;
    for (const auto& t : c) disjoint.push_back(t + "z");
    ASSERT_EQ(meteor(c, disjoint), 0.0);
    ASSERT_EQ(rouge_l(c, disjoint), 0.0);
    ASSERT_EQ(bleu({c}, {disjoint}, 1, BleuLevel::Corpus), 0.0);
    if (c.size() == r.size()) ASSERT_NEAR(rouge_l(c, r), rouge_l(r, c), 1e-9);
  }
}

TEST(Metrics, EvaluateCorpusAveragesPerSentence) {
  const std::vector<IdTokens> refs = {{"a", {"x", "y", "z"}}, {"b", {"p", "q"}}};
  const std::vector<IdTokens> perfect_and_disjoint = {{"a", {"x", "y", "z"}}, {"b", {"m", "n"}}};
  const auto report = evaluate_corpus(perfect_and_disjoint, refs);
  EXPECT_EQ(report.n_examples, 2u);
  EXPECT_NEAR(report.rouge_l, 50.0, 1e-9);
  EXPECT_NEAR(report.meteor, (100.0 * (1 - 0.5 / 27.0)) / 2.0, 1e-9);
  EXPECT_NEAR(report.bleu1, 60.0, 1e-9);

  const auto perfect = evaluate_corpus(refs, refs);
  for (double v : {perfect.bleu1, perfect.bleu2, perfect.bleu3, perfect.bleu4, perfect.rouge_l}) {
    EXPECT_NEAR(v, 100.0, 1e-9);
  }
}

TEST(Metrics, EvaluateCorpusErrors) {
  EXPECT_THROW(evaluate_corpus({}, {}), codesum::ValidationError);
  EXPECT_THROW(evaluate_corpus({{"a", {"x"}}}, {{"b", {"x"}}}), codesum::ValidationError);
  EXPECT_THROW(evaluate_corpus({{"a", {"x"}}, {"b", {"y"}}}, {{"b", {"y"}}, {"a", {"x"}}}), codesum::ValidationError);
}

TEST(Metrics, ReportJsonRoundTrip) {
  ScoreReport r;
  r.bleu1 = 12.5;
  r.meteor = 3.25;
  r.n_examples = 7;
  const auto back = score_report_from_json(to_json(r));
  EXPECT_EQ(back.bleu1, 12.5);
  EXPECT_EQ(back.meteor, 3.25);
  EXPECT_EQ(back.n_examples, 7u);
}
