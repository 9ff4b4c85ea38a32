// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codesum/pipeline/stages.hpp"

namespace codesum::pipeline {

struct ScoreBin {
  std::string label;
  double lo = 0, hi = 0;  // bounds as printed in the label
  std::size_t count = 0;
  std::optional<double> mean_bleu1;  // mean sentence BLEU-1 of the bin
};

struct Comparison {
  std::size_t wins = 0;    // first run scores higher
  std::size_t ties = 0;
  std::size_t losses = 0;
};

struct AnalysisBundle {
  std::size_t n_examples = 0;
  std::vector<ScoreBin> histogram;     // sentence BLEU-1 in [0,20), [20,30), [30,100]
  std::vector<ScoreBin> code_bins;     // by code sub-token length, upper-inclusive steps
  std::vector<ScoreBin> comment_bins;  // by reference length, upper-inclusive steps
  std::optional<Comparison> comparison;
};

struct RecordLengths {
  std::size_t code = 0;
  std::size_t comment = 0;
};

/// Lengths keyed by record id, read from an extract sidecar.
std::map<std::string, RecordLengths> lengths_from_extract(const std::string& extract_path);

/// Builds the analysis for `run`; `other` adds a per-record win/tie/loss
/// comparison of sentence BLEU-1 and must cover the same ids in the same
/// order (ValidationError otherwise).
AnalysisBundle analyze(const std::vector<DecodedRecord>& run, const std::map<std::string, RecordLengths>& lengths,
                       std::size_t code_step, std::size_t comment_step,
                       const std::vector<DecodedRecord>* other = nullptr);

/// Bin index of `length` for upper-inclusive bins of width `step`:
/// 0..step, step+1..2*step, ...
std::size_t length_bin(std::size_t length, std::size_t step);

nlohmann::json to_json(const AnalysisBundle& bundle);
std::string format_report(const AnalysisBundle& bundle);

}  // namespace codesum::pipeline
