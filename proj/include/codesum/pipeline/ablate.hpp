// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "codesum/metrics.hpp"
#include "codesum/pipeline/run_config.hpp"
#include "codesum/pipeline/stages.hpp"

namespace codesum::pipeline {

struct AblationRow {
  std::string label;  // "3 APIs", "GRU -APIcontext", ...
  nn::CellType cell = nn::CellType::GRU;
  std::optional<int> n_apis;
  bool api_context = true;
  std::string run_dir;
  std::optional<metrics::ScoreReport> scores;
  std::optional<std::string> error;  // set when the row failed
};

/// Ranking sweep (one row per n in the sweep) and model comparison
/// (cell x API context at the configured n).
struct AblationResult {
  std::vector<AblationRow> ranking;
  std::vector<AblationRow> model;
};

/// Runs every row under <work_dir>/ablate/, sharing extract and rank
/// sidecars with the main run. Rows with identical settings share a run
/// directory. A failing row is recorded and the others continue. Writes
/// ablation.json and ablation.txt into the work directory.
AblationResult run_ablation(const RunConfig& config, const Paths& paths, std::ostream& log);

nlohmann::json to_json(const AblationResult& result);
std::string format_ablation(const AblationResult& result);

}  // namespace codesum::pipeline
