// SPDX-License-Identifier: Apache-2.0
#include "codesum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "codesum/errors.hpp"

namespace codesum::metrics {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Tokens& tokens, int order) {
  NgramCounts counts;
  const auto k = static_cast<std::size_t>(order);
  if (tokens.size() < k) return counts;
  for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i + k))];
  }
  return counts;
}

struct OrderCounts {
  std::size_t clipped = 0;
  std::size_t candidate_total = 0;
  std::size_t reference_total = 0;
};

OrderCounts count_order(const Tokens& cand, const Tokens& ref, int order) {
  OrderCounts oc;
  const auto c = ngrams(cand, order);
  const auto r = ngrams(ref, order);
  for (const auto& [gram, n] : c) {
    oc.candidate_total += n;
    if (auto it = r.find(gram); it != r.end()) oc.clipped += std::min(n, it->second);
  }
  for (const auto& [gram, n] : r) oc.reference_total += n;
  return oc;
}

double brevity_penalty(std::size_t c, std::size_t r) {
  if (c == 0) return 0.0;
  if (c > r) return 1.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
}

void check_order(int n) {
  if (n < 1 || n > 4) throw ValidationError("BLEU order must be in 1..4");
}

}  // namespace

double sentence_bleu(const Tokens& candidate, const Tokens& reference, int n) {
  check_order(n);
  if (candidate.empty()) return 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto oc = count_order(candidate, reference, k);
    double p;
    if (k == 1) {
      if (oc.clipped == 0) return 0.0;
      p = static_cast<double>(oc.clipped) / static_cast<double>(oc.candidate_total);
    } else {
      p = static_cast<double>(oc.clipped + 1) / static_cast<double>(oc.candidate_total + 1);
    }
    log_sum += std::log(p);
  }
  return 100.0 * brevity_penalty(candidate.size(), reference.size()) * std::exp(log_sum / n);
}

double bleu(const std::vector<Tokens>& candidates, const std::vector<Tokens>& references, int n,
            BleuLevel level) {
  check_order(n);
  if (candidates.size() != references.size()) {
    throw ValidationError("bleu: candidate and reference counts differ");
  }
  if (candidates.empty()) return 0.0;
  if (level == BleuLevel::Sentence) {
    double sum = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      sum += sentence_bleu(candidates[i], references[i], n);
    }
    return sum / static_cast<double>(candidates.size());
  }
  std::size_t c_len = 0;
  std::size_t r_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    c_len += candidates[i].size();
    r_len += references[i].size();
  }
  if (c_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    OrderCounts total;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto oc = count_order(candidates[i], references[i], k);
      total.clipped += oc.clipped;
      total.candidate_total += oc.candidate_total;
      total.reference_total += oc.reference_total;
    }
    if (total.candidate_total == 0 && total.reference_total == 0) continue;  // vacuous order
    if (total.clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(total.clipped) / static_cast<double>(total.candidate_total));
  }
  return 100.0 * brevity_penalty(c_len, r_len) * std::exp(log_sum / n);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const Tokens& candidate, const Tokens& reference, double beta) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const auto lcs = static_cast<double>(lcs_length(candidate, reference));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  return 100.0 * (1.0 + b2) * p * r / (r + b2 * p);
}

namespace {

// Depth-first search over candidate positions. Each position either links
// to an unused reference position holding the same word or stays
// unmatched; the number of unmatched positions per word is fixed so every
// complete assignment has the maximum match count.
class AlignmentSearch {
 public:
  AlignmentSearch(const Tokens& cand, const Tokens& ref) : cand_(cand), ref_(ref) {
    std::map<std::string, std::size_t> cand_count, ref_count;
    for (const auto& t : cand) ++cand_count[t];
    for (const auto& t : ref) ++ref_count[t];
    for (const auto& [w, c] : cand_count) {
      auto it = ref_count.find(w);
      const std::size_t r = it == ref_count.end() ? 0 : it->second;
      matches_ += std::min(c, r);
      skips_left_[w] = c - std::min(c, r);
    }
    for (std::size_t j = 0; j < ref.size(); ++j) positions_[ref[j]].push_back(j);
    used_.assign(ref.size(), false);
  }

  Alignment run(std::size_t greedy_chunks) {
    best_chunks_ = greedy_chunks;
    if (matches_ > 0) dfs(0, kNone, 0);
    return {matches_, matches_ == 0 ? 0 : best_chunks_};
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  static constexpr std::size_t kBudget = 200000;

  // prev_ref: reference index linked to candidate position i-1 (kNone when unmatched).
  void dfs(std::size_t i, std::size_t prev_ref, std::size_t chunks) {
    if (++visited_ > kBudget || chunks >= best_chunks_) return;
    if (i == cand_.size()) {
      best_chunks_ = chunks;
      return;
    }
    const std::string& w = cand_[i];
    auto pit = positions_.find(w);
    if (pit != positions_.end()) {
      // Try the continuation of the current chunk first.
      if (prev_ref != kNone && prev_ref + 1 < ref_.size() && !used_[prev_ref + 1] &&
          ref_[prev_ref + 1] == w) {
        used_[prev_ref + 1] = true;
        dfs(i + 1, prev_ref + 1, chunks);
        used_[prev_ref + 1] = false;
      }
      for (std::size_t j : pit->second) {
        if (used_[j] || (prev_ref != kNone && j == prev_ref + 1)) continue;
        used_[j] = true;
        dfs(i + 1, j, chunks + 1);
        used_[j] = false;
      }
    }
    auto& skips = skips_left_[w];
    if (skips > 0) {
      --skips;
      dfs(i + 1, kNone, chunks);
      ++skips;
    }
  }

  const Tokens& cand_;
  const Tokens& ref_;
  std::size_t matches_ = 0;
  std::map<std::string, std::size_t> skips_left_;
  std::map<std::string, std::vector<std::size_t>> positions_;
  std::vector<bool> used_;
  std::size_t best_chunks_ = 0;
  std::size_t visited_ = 0;
};

// Repeatedly aligns the longest common run of unused positions.
std::size_t greedy_chunks(const Tokens& cand, const Tokens& ref) {
  std::vector<bool> cu(cand.size(), false), ru(ref.size(), false);
  std::size_t chunks = 0;
  while (true) {
    std::size_t best_len = 0, bi = 0, bj = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      for (std::size_t j = 0; j < ref.size(); ++j) {
        std::size_t len = 0;
        while (i + len < cand.size() && j + len < ref.size() && !cu[i + len] && !ru[j + len] &&
               cand[i + len] == ref[j + len]) {
          ++len;
        }
        if (len > best_len) {
          best_len = len;
          bi = i;
          bj = j;
        }
      }
    }
    if (best_len == 0) break;
    for (std::size_t k = 0; k < best_len; ++k) cu[bi + k] = ru[bj + k] = true;
    ++chunks;
  }
  return chunks;
}

}  // namespace

Alignment meteor_align(const Tokens& candidate, const Tokens& reference) {
  AlignmentSearch search(candidate, reference);
  // The greedy result is an upper bound; +1 lets the search reach it exactly.
  return search.run(greedy_chunks(candidate, reference) + 1);
}

double meteor(const Tokens& candidate, const Tokens& reference, double alpha) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const Alignment a = meteor_align(candidate, reference);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = p * r / (alpha * p + (1.0 - alpha) * r);
  const double frag = static_cast<double>(a.chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return 100.0 * fmean * (1.0 - penalty);
}

nlohmann::json to_json(const ScoreReport& r) {
  return {{"bleu1", r.bleu1},
          {"bleu2", r.bleu2},
          {"bleu3", r.bleu3},
          {"bleu4", r.bleu4},
          {"sentence_bleu1", r.sentence_bleu1},
          {"sentence_bleu2", r.sentence_bleu2},
          {"sentence_bleu3", r.sentence_bleu3},
          {"sentence_bleu4", r.sentence_bleu4},
          {"meteor", r.meteor},
          {"rouge_l", r.rouge_l},
          {"n_examples", r.n_examples},
          {"bleu_level", "corpus"}};
}

ScoreReport score_report_from_json(const nlohmann::json& j) {
  ScoreReport r;
  r.bleu1 = j.at("bleu1");
  r.bleu2 = j.at("bleu2");
  r.bleu3 = j.at("bleu3");
  r.bleu4 = j.at("bleu4");
  r.sentence_bleu1 = j.value("sentence_bleu1", 0.0);
  r.sentence_bleu2 = j.value("sentence_bleu2", 0.0);
  r.sentence_bleu3 = j.value("sentence_bleu3", 0.0);
  r.sentence_bleu4 = j.value("sentence_bleu4", 0.0);
  r.meteor = j.at("meteor");
  r.rouge_l = j.at("rouge_l");
  r.n_examples = j.at("n_examples");
  return r;
}

ScoreReport evaluate_corpus(const std::vector<IdTokens>& decoded, const std::vector<IdTokens>& references) {
  if (decoded.empty() || references.empty()) throw ValidationError("evaluate: empty test set");
  std::vector<std::string> diffs;
  const std::size_t n = std::max(decoded.size(), references.size());
  for (std::size_t i = 0; i < n && diffs.size() < 20; ++i) {
    const std::string a = i < decoded.size() ? decoded[i].id : "<missing>";
    const std::string b = i < references.size() ? references[i].id : "<missing>";
    if (a != b) diffs.push_back("row " + std::to_string(i) + ": decoded '" + a + "' vs reference '" + b + "'");
  }
  if (!diffs.empty()) {
    std::string msg = "evaluate: decoded and reference ids differ";
    for (const auto& d : diffs) msg += "\n  " + d;
    throw ValidationError(msg);
  }
  std::vector<Tokens> cands, refs;
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    cands.push_back(decoded[i].tokens);
    refs.push_back(references[i].tokens);
  }
  ScoreReport r;
  r.n_examples = cands.size();
  r.bleu1 = bleu(cands, refs, 1, BleuLevel::Corpus);
  r.bleu2 = bleu(cands, refs, 2, BleuLevel::Corpus);
  r.bleu3 = bleu(cands, refs, 3, BleuLevel::Corpus);
  r.bleu4 = bleu(cands, refs, 4, BleuLevel::Corpus);
  r.sentence_bleu1 = bleu(cands, refs, 1, BleuLevel::Sentence);
  r.sentence_bleu2 = bleu(cands, refs, 2, BleuLevel::Sentence);
  r.sentence_bleu3 = bleu(cands, refs, 3, BleuLevel::Sentence);
  r.sentence_bleu4 = bleu(cands, refs, 4, BleuLevel::Sentence);
  double m = 0, rl = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    m += meteor(cands[i], refs[i]);
    rl += rouge_l(cands[i], refs[i]);
  }
  r.meteor = m / static_cast<double>(cands.size());
  r.rouge_l = rl / static_cast<double>(cands.size());
  return r;
}

}  // namespace codesum::metrics
