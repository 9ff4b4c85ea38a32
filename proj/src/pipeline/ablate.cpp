// SPDX-License-Identifier: Apache-2.0
#include "codesum/pipeline/ablate.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>

#include "codesum/errors.hpp"
#include "codesum/util/jsonl.hpp"

namespace codesum::pipeline {

namespace {

std::string row_dir_name(nn::CellType cell, const std::optional<int>& n, bool api) {
  std::string cell_name = nn::to_string(cell);
  for (char& c : cell_name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return cell_name + "_n" + format_n_apis(n) + (api ? "_api" : "_noapi");
}

void run_row(const RunConfig& base, const Paths& paths, AblationRow& row, std::ostream& log) {
  RunConfig cfg = base;
  cfg.model.cell = row.cell;
  cfg.model.n_apis = row.n_apis;
  cfg.model.use_api_context = row.api_context;
  const std::string dir = (std::filesystem::path(paths.dir) / "ablate" / row_dir_name(row.cell, row.n_apis, row.api_context)).string();
  Paths rp = Paths::in(dir);
  rp.extract = paths.extract;
  rp.rank = paths.rank;
  row.run_dir = dir;
  log << "ablate: " << row.label << " -> " << dir << "\n";
  try {
    run_prepare(cfg, rp, log);
    run_train(cfg, rp, log);
    run_evaluate(cfg, rp, log);
    row.scores = metrics::score_report_from_json(nlohmann::json::parse(util::read_text_file(rp.scores)));
  } catch (const std::exception& e) {
    row.error = e.what();
    log << "ablate: row " << row.label << " failed: " << e.what() << "\n";
  }
}

nlohmann::json row_json(const AblationRow& r) {
  nlohmann::json j = {{"label", r.label},
                      {"cell", nn::to_string(r.cell)},
                      {"n_apis", format_n_apis(r.n_apis)},
                      {"api_context", r.api_context},
                      {"run_dir", r.run_dir}};
  if (r.scores) {
    const auto& s = *r.scores;
    j["BLEU1"] = s.bleu1;
    j["BLEU2"] = s.bleu2;
    j["BLEU3"] = s.bleu3;
    j["BLEU4"] = s.bleu4;
    j["METEOR"] = s.meteor;
    j["ROUGE-L"] = s.rouge_l;
    j["n_examples"] = s.n_examples;
  }
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

void format_table(std::string& out, const std::string& title, const std::string& first_col,
                  const std::vector<AblationRow>& rows) {
  char line[256];
  out += title + "\n";
  std::snprintf(line, sizeof line, "%-22s %7s %7s %7s %7s %7s %8s\n", first_col.c_str(), "BLEU1", "BLEU2", "BLEU3",
                "BLEU4", "METEOR", "ROUGE-L");
  out += line;
  for (const auto& r : rows) {
    if (r.scores) {
      const auto& s = *r.scores;
      std::snprintf(line, sizeof line, "%-22s %7.2f %7.2f %7.2f %7.2f %7.2f %8.2f\n", r.label.c_str(), s.bleu1,
                    s.bleu2, s.bleu3, s.bleu4, s.meteor, s.rouge_l);
    } else {
      std::snprintf(line, sizeof line, "%-22s failed: %s\n", r.label.c_str(), r.error.value_or("?").c_str());
    }
    out += line;
  }
}

}  // namespace

AblationResult run_ablation(const RunConfig& config, const Paths& paths, std::ostream& log) {
  if (config.sweep.empty()) throw ValidationError("ablate needs a non-empty sweep list");
  config.validate();
  run_extract(config, paths, log);
  run_rank(config, paths, log);

  AblationResult result;
  for (const auto& n : config.sweep) {
    AblationRow row;
    row.label = n ? std::to_string(*n) + " APIs" : "All the APIs";
    row.cell = nn::CellType::GRU;
    row.n_apis = n;
    row.api_context = true;
    result.ranking.push_back(row);
  }
  for (nn::CellType cell : {nn::CellType::GRU, nn::CellType::LSTM}) {
    for (bool api : {false, true}) {
      AblationRow row;
      row.label = nn::to_string(cell) + (api ? " +APIcontext" : " -APIcontext");
      row.cell = cell;
      row.n_apis = config.model.n_apis;
      row.api_context = api;
      result.model.push_back(row);
    }
  }
  for (auto& row : result.ranking) run_row(config, paths, row, log);
  for (auto& row : result.model) run_row(config, paths, row, log);

  util::write_text_file((std::filesystem::path(paths.dir) / "ablation.json").string(),
                        to_json(result).dump(2) + "\n");
  util::write_text_file((std::filesystem::path(paths.dir) / "ablation.txt").string(), format_ablation(result));
  return result;
}

nlohmann::json to_json(const AblationResult& result) {
  nlohmann::json ranking = nlohmann::json::array(), model = nlohmann::json::array();
  for (const auto& r : result.ranking) ranking.push_back(row_json(r));
  for (const auto& r : result.model) model.push_back(row_json(r));
  return {{"columns", {"BLEU1", "BLEU2", "BLEU3", "BLEU4", "METEOR", "ROUGE-L"}},
          {"ranking", ranking},
          {"model", model}};
}

std::string format_ablation(const AblationResult& result) {
  std::string out;
  format_table(out, "Ranking mechanism and number of APIs", "APIs", result.ranking);
  out += "\n";
  format_table(out, "Model comparison", "Model", result.model);
  return out;
}

}  // namespace codesum::pipeline
