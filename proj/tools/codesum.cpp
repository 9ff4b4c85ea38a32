// SPDX-License-Identifier: Apache-2.0
// codesum: command-line driver for the summarization pipeline.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "codesum/catalog.hpp"
#include "codesum/errors.hpp"
#include "codesum/nn/gradcheck.hpp"
#include "codesum/pipeline/ablate.hpp"
#include "codesum/pipeline/report.hpp"
#include "codesum/pipeline/stages.hpp"
#include "codesum/text/subtoken.hpp"
#include "codesum/util/jsonl.hpp"

namespace cs = codesum;
namespace pl = codesum::pipeline;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kIo = 2;

std::vector<cs::metrics::IdTokens> read_id_tokens(const std::string& path, const char* text_key) {
  pl::require_file(path);
  std::vector<cs::metrics::IdTokens> out;
  for (const json& j : cs::util::read_jsonl_strict(path)) {
    cs::metrics::IdTokens t;
    t.id = j.at("id").get<std::string>();
    if (j.contains("tokens")) {
      t.tokens = j.at("tokens").get<cs::metrics::Tokens>();
    } else {
      t.tokens = cs::text::subtoken_split(j.at(text_key).get<std::string>());
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<cs::corpus::CorpusRecord> read_methods(const std::string& path) {
  pl::require_file(path);
  std::vector<cs::corpus::CorpusRecord> out;
  if (std::filesystem::path(path).extension() == ".java") {
    cs::corpus::CorpusRecord r;
    r.id = std::filesystem::path(path).stem().string();
    r.code = cs::util::read_text_file(path);
    out.push_back(std::move(r));
    return out;
  }
  for (const json& j : cs::util::read_jsonl_strict(path)) {
    cs::corpus::CorpusRecord r;
    r.id = j.at("id").get<std::string>();
    r.code = j.at("code").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    cs::util::write_text_file(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source code summarization with API context"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flag_values;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "Override one key, key=value (repeatable)");
  for (const std::string& key : pl::config_keys()) {
    app.add_option("--" + key, flag_values[key], "Config key " + key);
  }

  auto* extract = app.add_subcommand("extract", "Parse, filter and split the corpus");
  auto* catalog = app.add_subcommand("catalog", "Catalog utilities");
  auto* validate = catalog->add_subcommand("validate", "Check catalog schema and index health");
  catalog->require_subcommand(1);
  auto* rank = app.add_subcommand("rank", "Match and rank API calls");
  auto* prepare = app.add_subcommand("prepare", "Build vocabularies and encode examples");
  auto* train = app.add_subcommand("train", "Train the model");
  auto* evaluate = app.add_subcommand("evaluate", "Decode the test split and score it, or score given files");
  std::string decoded_file, references_file;
  evaluate->add_option("--decoded", decoded_file, "JSON-lines of {id, text|tokens} to score");
  evaluate->add_option("--references", references_file, "JSON-lines of {id, comment|tokens}");
  auto* summarize = app.add_subcommand("summarize", "Generate comments for methods");
  std::string input_path, output_path;
  summarize->add_option("--input", input_path, "A .java file or JSON-lines of {id, code}")->required();
  summarize->add_option("--output", output_path, "JSON-lines output (default: stdout)");
  auto* run = app.add_subcommand("run", "extract, rank, prepare, train and evaluate in sequence");
  auto* ablate = app.add_subcommand("ablate", "Ranking sweep and model comparison tables");
  auto* report = app.add_subcommand("report", "BLEU-1 histogram, length breakdown and run comparison");
  std::string report_run, report_compare, report_out;
  report->add_option("--run", report_run, "Run directory (default: work_dir)");
  report->add_option("--compare", report_compare, "Second run directory for win/tie/loss");
  report->add_option("--output-dir", report_out, "Where to write report.json and report.txt (default: run dir)");
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of all gradients on a tiny model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    pl::RunConfig config;
    if (!config_path.empty()) {
      pl::require_file(config_path);
      config = pl::load_run_config(config_path);
    }
    for (const auto& [key, value] : flag_values) {
      if (app.count("--" + key)) config.set(key, value);
    }
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw cs::ValidationError("--set expects key=value, got " + s);
      config.set(s.substr(0, eq), s.substr(eq + 1));
    }
    config.validate();
    const pl::Paths paths = pl::Paths::in(config.work_dir);
    std::ostream& log = std::cerr;

    if (*extract) {
      pl::require_file(config.corpus);
      pl::run_extract(config, paths, log);
    } else if (*validate) {
      pl::require_file(config.catalog);
      const auto load = cs::catalog::load_catalog(config.catalog);
      for (const auto& e : load.errors) log << config.catalog << ":" << e.line << ": " << e.message << "\n";
      const auto health = cs::catalog::validate_catalog(load);
      std::cout << cs::catalog::to_json(health).dump(2) << "\n";
      return health.ok() ? kOk : kValidation;
    } else if (*rank) {
      pl::run_rank(config, paths, log);
    } else if (*prepare) {
      pl::run_prepare(config, paths, log);
    } else if (*train) {
      pl::run_train(config, paths, log);
    } else if (*evaluate) {
      if (!decoded_file.empty() || !references_file.empty()) {
        if (decoded_file.empty() || references_file.empty()) {
          throw cs::ValidationError("--decoded and --references go together");
        }
        const auto report_scores =
            cs::metrics::evaluate_corpus(read_id_tokens(decoded_file, "text"), read_id_tokens(references_file, "comment"));
        std::cout << cs::metrics::to_json(report_scores).dump(2) << "\n";
      } else {
        pl::run_evaluate(config, paths, log);
        std::cout << cs::util::read_text_file(paths.scores);
      }
    } else if (*summarize) {
      const auto results = pl::summarize_methods(config, paths, read_methods(input_path));
      std::string text;
      bool failed = false;
      for (const auto& r : results) {
        json j = {{"id", r.id}, {"comment", r.comment}};
        if (r.error) {
          j["error"] = *r.error;
          failed = true;
        }
        text += j.dump() + "\n";
      }
      write_output(output_path, text);
      return failed ? kValidation : kOk;
    } else if (*run) {
      pl::run_extract(config, paths, log);
      pl::run_rank(config, paths, log);
      pl::run_prepare(config, paths, log);
      pl::run_train(config, paths, log);
      pl::run_evaluate(config, paths, log);
      std::cout << cs::util::read_text_file(paths.scores);
    } else if (*ablate) {
      const auto result = pl::run_ablation(config, paths, log);
      std::cout << pl::format_ablation(result);
    } else if (*report) {
      const pl::Paths rp = pl::Paths::in(report_run.empty() ? config.work_dir : report_run);
      const auto decoded = pl::read_decoded(rp.decoded);
      const auto lengths = pl::lengths_from_extract(rp.extract);
      std::vector<pl::DecodedRecord> other;
      if (!report_compare.empty()) other = pl::read_decoded(pl::Paths::in(report_compare).decoded);
      const auto bundle =
          pl::analyze(decoded, lengths, config.code_bin, config.comment_bin, report_compare.empty() ? nullptr : &other);
      const std::string out_dir = report_out.empty() ? rp.dir : report_out;
      std::filesystem::create_directories(out_dir);
      cs::util::write_text_file((std::filesystem::path(out_dir) / "report.json").string(),
                                pl::to_json(bundle).dump(2) + "\n");
      const std::string text = pl::format_report(bundle);
      cs::util::write_text_file((std::filesystem::path(out_dir) / "report.txt").string(), text);
      std::cout << text;
    } else if (*gradcheck) {
      const auto r = cs::nn::gradcheck(cs::nn::gradcheck_config(config.model.cell));
      std::cout << cs::nn::to_json(r).dump(2) << "\n";
      return r.passed ? kOk : kValidation;
    }
    return kOk;
  } catch (const cs::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
}
