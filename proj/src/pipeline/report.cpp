// SPDX-License-Identifier: Apache-2.0
#include "codesum/pipeline/report.hpp"

#include <cmath>
#include <cstdio>

#include "codesum/errors.hpp"
#include "codesum/text/subtoken.hpp"

namespace codesum::pipeline {

std::size_t length_bin(std::size_t length, std::size_t step) { return length == 0 ? 0 : (length - 1) / step; }

std::map<std::string, RecordLengths> lengths_from_extract(const std::string& extract_path) {
  std::map<std::string, RecordLengths> out;
  for (const auto& m : read_extracted(extract_path)) {
    out[m.record.id] = {corpus::code_token_count(m.record.code), corpus::comment_token_count(m.record.comment)};
  }
  return out;
}

namespace {

std::vector<ScoreBin> length_bins(const std::vector<std::size_t>& lengths, const std::vector<double>& scores,
                                  std::size_t step) {
  std::size_t max_bin = 0;
  for (std::size_t len : lengths) max_bin = std::max(max_bin, length_bin(len, step));
  std::vector<ScoreBin> bins(lengths.empty() ? 0 : max_bin + 1);
  std::vector<double> sums(bins.size(), 0.0);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const std::size_t lo = k == 0 ? 0 : k * step + 1;
    const std::size_t hi = (k + 1) * step;
    bins[k].lo = static_cast<double>(lo);
    bins[k].hi = static_cast<double>(hi);
    bins[k].label = std::to_string(lo) + "-" + std::to_string(hi);
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const std::size_t k = length_bin(lengths[i], step);
    ++bins[k].count;
    sums[k] += scores[i];
  }
  for (std::size_t k = 0; k < bins.size(); ++k) {
    if (bins[k].count) bins[k].mean_bleu1 = sums[k] / static_cast<double>(bins[k].count);
  }
  return bins;
}

nlohmann::json bins_json(const std::vector<ScoreBin>& bins) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : bins) {
    arr.push_back({{"label", b.label},
                   {"lo", b.lo},
                   {"hi", b.hi},
                   {"count", b.count},
                   {"mean_bleu1", b.mean_bleu1 ? nlohmann::json(*b.mean_bleu1) : nlohmann::json(nullptr)}});
  }
  return arr;
}

void bins_text(std::string& out, const char* title, const std::vector<ScoreBin>& bins, bool with_mean) {
  char line[160];
  out += title;
  out += "\n";
  for (const auto& b : bins) {
    if (with_mean && b.mean_bleu1) {
      std::snprintf(line, sizeof line, "  %-12s %6zu  mean BLEU-1 %6.2f\n", b.label.c_str(), b.count, *b.mean_bleu1);
    } else {
      std::snprintf(line, sizeof line, "  %-12s %6zu\n", b.label.c_str(), b.count);
    }
    out += line;
  }
}

}  // namespace

AnalysisBundle analyze(const std::vector<DecodedRecord>& run, const std::map<std::string, RecordLengths>& lengths,
                       std::size_t code_step, std::size_t comment_step, const std::vector<DecodedRecord>* other) {
  if (code_step == 0 || comment_step == 0) throw ValidationError("report bin steps must be >= 1");
  AnalysisBundle b;
  b.n_examples = run.size();
  std::vector<double> scores;
  std::vector<std::size_t> code_len, comment_len;
  for (const auto& d : run) {
    scores.push_back(metrics::sentence_bleu(d.hypothesis, d.reference, 1));
    const auto it = lengths.find(d.id);
    if (it == lengths.end()) throw ValidationError("no length information for record " + d.id);
    code_len.push_back(it->second.code);
    comment_len.push_back(it->second.comment);
  }

  b.histogram = {{"[0,20)", 0, 20, 0, {}}, {"[20,30)", 20, 30, 0, {}}, {"[30,100]", 30, 100, 0, {}}};
  for (double s : scores) {
    const std::size_t k = s < 20.0 ? 0 : (s < 30.0 ? 1 : 2);
    ++b.histogram[k].count;
  }
  b.code_bins = length_bins(code_len, scores, code_step);
  b.comment_bins = length_bins(comment_len, scores, comment_step);

  if (other) {
    if (other->size() != run.size()) {
      throw ValidationError("compared runs differ in size (" + std::to_string(run.size()) + " vs " +
                            std::to_string(other->size()) + ")");
    }
    Comparison c;
    for (std::size_t i = 0; i < run.size(); ++i) {
      if ((*other)[i].id != run[i].id) {
        throw ValidationError("compared runs differ at record " + std::to_string(i) + ": " + run[i].id + " vs " +
                              (*other)[i].id);
      }
      const double s2 = metrics::sentence_bleu((*other)[i].hypothesis, (*other)[i].reference, 1);
      if (std::fabs(scores[i] - s2) <= 1e-9) {
        ++c.ties;
      } else if (scores[i] > s2) {
        ++c.wins;
      } else {
        ++c.losses;
      }
    }
    b.comparison = c;
  }
  return b;
}

nlohmann::json to_json(const AnalysisBundle& b) {
  nlohmann::json j = {{"n_examples", b.n_examples},
                      {"bleu1_histogram", bins_json(b.histogram)},
                      {"code_length_bins", bins_json(b.code_bins)},
                      {"comment_length_bins", bins_json(b.comment_bins)}};
  if (b.comparison) {
    j["comparison"] = {{"wins", b.comparison->wins}, {"ties", b.comparison->ties}, {"losses", b.comparison->losses}};
  } else {
    j["comparison"] = nullptr;
  }
  return j;
}

std::string format_report(const AnalysisBundle& b) {
  std::string out = "records: " + std::to_string(b.n_examples) + "\n";
  bins_text(out, "sentence BLEU-1 histogram", b.histogram, false);
  bins_text(out, "by code length", b.code_bins, true);
  bins_text(out, "by comment length", b.comment_bins, true);
  if (b.comparison) {
    const auto& c = *b.comparison;
    const double n = static_cast<double>(b.n_examples ? b.n_examples : 1);
    char line[160];
    std::snprintf(line, sizeof line, "comparison: wins %zu (%.1f%%), ties %zu (%.1f%%), losses %zu (%.1f%%)\n", c.wins,
                  100.0 * static_cast<double>(c.wins) / n, c.ties, 100.0 * static_cast<double>(c.ties) / n, c.losses,
                  100.0 * static_cast<double>(c.losses) / n);
    out += line;
  }
  return out;
}

}  // namespace codesum::pipeline
