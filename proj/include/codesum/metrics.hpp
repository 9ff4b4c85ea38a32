// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace codesum::metrics {

using Tokens = std::vector<std::string>;

enum class BleuLevel { Corpus, Sentence };

/// BLEU-n in percent: clipped n-gram precisions, uniform geometric mean over
/// orders 1..n, brevity penalty exp(1 - r/c) when c <= r.
///
/// Corpus level pools counts over all pairs. An order for which neither the
/// candidates nor the references contain any n-gram is treated as a perfect
/// match, so identical short sentences still score 100.
/// Sentence level adds +1 to numerator and denominator for orders >= 2 and
/// returns the mean over pairs.
double bleu(const std::vector<Tokens>& candidates, const std::vector<Tokens>& references, int n,
            BleuLevel level);

double sentence_bleu(const Tokens& candidate, const Tokens& reference, int n);

/// Length of the longest common subsequence.
std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// ROUGE-L F-measure in percent: (1+b^2)PR / (R + b^2 P).
double rouge_l(const Tokens& candidate, const Tokens& reference, double beta = 1.2);

/// Exact-match unigram alignment for METEOR.
struct Alignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

/// Maximizes matches, then minimizes chunks. Exact search with a node
/// budget; on budget exhaustion the best alignment found so far is
/// returned (seeded with a longest-run-first greedy alignment).
Alignment meteor_align(const Tokens& candidate, const Tokens& reference);

/// METEOR in percent with exact matching only: Fmean = PR/(aP + (1-a)R),
/// a = 0.9; penalty = 0.5 (chunks/matches)^3.
double meteor(const Tokens& candidate, const Tokens& reference, double alpha = 0.9);

struct ScoreReport {
  double bleu1 = 0, bleu2 = 0, bleu3 = 0, bleu4 = 0;  // corpus level
  double sentence_bleu1 = 0, sentence_bleu2 = 0, sentence_bleu3 = 0, sentence_bleu4 = 0;
  double meteor = 0;
  double rouge_l = 0;
  std::size_t n_examples = 0;
};

nlohmann::json to_json(const ScoreReport& report);
ScoreReport score_report_from_json(const nlohmann::json& obj);

/// Id-keyed token sequence (decoded output or reference).
struct IdTokens {
  std::string id;
  Tokens tokens;
};

/// Corpus BLEU plus per-sentence averaged METEOR and ROUGE-L. Both lists
/// must hold the same ids in the same order; otherwise ValidationError with
/// a listing of the differences. Empty input is an error.
ScoreReport evaluate_corpus(const std::vector<IdTokens>& decoded, const std::vector<IdTokens>& references);

}  // namespace codesum::metrics
