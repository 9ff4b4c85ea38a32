// SPDX-License-Identifier: Apache-2.0
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Pass criterion numbers as arguments
// to run a subset.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "codesum/catalog.hpp"
#include "codesum/corpus.hpp"
#include "codesum/java/extract.hpp"
#include "codesum/java/parser.hpp"
#include "codesum/java/sbt.hpp"
#include "codesum/metrics.hpp"
#include "codesum/nn/gradcheck.hpp"
#include "codesum/nn/train.hpp"
#include "codesum/pipeline/run_config.hpp"
#include "codesum/pipeline/stages.hpp"
#include "codesum/ranker.hpp"
#include "codesum/text/prepare.hpp"
#include "codesum/text/subtoken.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace codesum;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string src(const std::string& rel) { return std::string(CODESUM_SOURCE_DIR) + "/" + rel; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

class Scratch {
 public:
  Scratch() : root_(fs::temp_directory_path() / ("codesum_acceptance_" + std::to_string(::getpid()))) {
    fs::create_directories(root_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }

 private:
  fs::path root_;
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args, const std::string& log_path) {
  const std::string cmd = std::string(CODESUM_CLI_PATH) + " " + args + " >" + log_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_paths(const std::string& conf, const std::string& work) {
  auto c = pipeline::load_run_config(src(conf));
  return "--config " + src(conf) + " --corpus " + src(c.corpus) + " --catalog " + src(c.catalog) +
         " --work_dir " + work;
}

// ---- 1 ----------------------------------------------------------------------

Outcome gradient_verification() {
  Outcome o{true, ""};
  for (auto cell : {nn::CellType::GRU, nn::CellType::LSTM}) {
    const auto report = nn::gradcheck(nn::gradcheck_config(cell));
    const bool ok = report.passed && report.max_rel_error < 1e-3 && !report.tensors.empty();
    o.pass = o.pass && ok;
    o.detail += nn::to_string(cell) + " max rel " + fmt("%.2e", report.max_rel_error) + " over " +
                std::to_string(report.tensors.size()) + " tensors; ";
  }
  return o;
}

// ---- 2 ----------------------------------------------------------------------

std::string oracle_head(const std::string& type) {
  std::string out;
  int depth = 0;
  for (char c : type) {
    if (c == '<') ++depth;
    if (depth == 0 && !std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (c == '>') --depth;
  }
  return out;
}

// Sorted merge over both type lists; every unpaired element is one difference.
std::size_t oracle_diff(const std::vector<ParamDecl>& p, const std::vector<ParamDecl>& m) {
  std::vector<std::string> a, b;
  for (const auto& x : p) a.push_back(oracle_head(x.type));
  for (const auto& x : m) b.push_back(oracle_head(x.type));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0, diff = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      ++diff, ++i;
    } else if (i == a.size() || b[j] < a[i]) {
      ++diff, ++j;
    } else {
      ++i, ++j;
    }
  }
  return diff;
}

Outcome ranking_oracle() {
  static const std::vector<std::string> alphabet = {"int",      "long",         "String",        "boolean",
                                                    "TimeUnit", "List<String>", "List<Integer>", "Map<K, V>",
                                                    "char[]",   "Object"};
  std::mt19937_64 rng(1234);
  auto params = [&] {
    std::vector<ParamDecl> out(rng() % 7);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {alphabet[rng() % alphabet.size()], "p" + std::to_string(k)};
    return out;
  };
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = params();
    const auto m = params();
    if (ranker::param_diff(p, m) != oracle_diff(p, m)) ++mismatches;
  }

  const auto load = catalog::load_catalog(src("data/catalog.jsonl"));
  const auto tree = java::parse_method_source(
      "public boolean await(long timeout, TimeUnit unit) throws InterruptedException {\n"
      "  if (latch.getCount() == 0) { return true; }\n"
      "  boolean done = latch.await(timeout, unit);\n"
      "  if (!done) { subscription.dispose(); }\n"
      "  return done;\n"
      "}");
  const auto set = ranker::rank_method(java::extract_signature(tree), java::extract_api_calls(tree), load.catalog);
  std::string got;
  for (const auto& r : set.ranked) got += r.entry.simple_name + ":" + std::to_string(r.score) + " ";
  const bool fixture = set.ranked.size() == 3 && set.ranked[0].entry.simple_name == "await" &&
                       set.ranked[0].score == 0 && set.ranked[1].entry.simple_name == "getCount" &&
                       set.ranked[1].score == -2 && set.ranked[2].entry.simple_name == "dispose" &&
                       set.ranked[2].score == -2;
  return {mismatches == 0 && fixture,
          std::to_string(1000 - mismatches) + "/1000 oracle matches; fixture " + got};
}

// ---- 3 ----------------------------------------------------------------------

Outcome metric_golden_table() {
  std::ifstream in(src("tests/data/metric_golden.json"));
  if (!in) return {false, "golden table missing"};
  const auto golden = nlohmann::json::parse(in);
  const double tol = 1e-6;
  std::size_t checks = 0, failures = 0, cases = 0;
  bool identity = false, disjoint = false;
  auto check = [&](double got, double want) {
    ++checks;
    if (std::fabs(got - want) > tol) ++failures;
  };
  for (const auto& c : golden.at("cases")) {
    ++cases;
    const auto cand = c.at("candidate").get<metrics::Tokens>();
    const auto ref = c.at("reference").get<metrics::Tokens>();
    for (int n = 1; n <= 4; ++n) {
      check(metrics::bleu({cand}, {ref}, n, metrics::BleuLevel::Corpus), c.at("bleu" + std::to_string(n)));
    }
    check(metrics::rouge_l(cand, ref, 1.2), c.at("rouge_l"));
    check(metrics::meteor(cand, ref, 0.9), c.at("meteor"));
    if (cand == ref) {
      identity = std::fabs(metrics::bleu({cand}, {ref}, 4, metrics::BleuLevel::Corpus) - 100.0) < tol &&
                 std::fabs(metrics::rouge_l(cand, ref) - 100.0) < tol;
    }
    std::set<std::string> overlap(cand.begin(), cand.end());
    if (std::none_of(ref.begin(), ref.end(), [&](const auto& t) { return overlap.count(t) > 0; })) {
      disjoint = metrics::bleu({cand}, {ref}, 1, metrics::BleuLevel::Corpus) == 0.0 &&
                 metrics::rouge_l(cand, ref) == 0.0 && metrics::meteor(cand, ref) == 0.0;
    }
  }
  return {failures == 0 && cases >= 5 && identity && disjoint,
          std::to_string(checks - failures) + "/" + std::to_string(checks) + " values over " +
              std::to_string(cases) + " cases within 1e-6" + (identity ? "; identity 100" : "; identity FAILED") +
              (disjoint ? "; disjoint 0" : "; disjoint FAILED")};
}

// ---- 4 ----------------------------------------------------------------------

java::SyntaxTree random_tree(std::mt19937_64& rng, int depth) {
  const auto& kinds = java::all_node_kinds();
  static const std::vector<std::string> labels = {"f", "x_y", "List<String>", "a + b", "(", ")", "\"s\"", "0"};
  const std::string k(kinds[rng() % kinds.size()]);
  const int n = depth <= 0 ? 0 : static_cast<int>(rng() % 4);
  if (n == 0) {
    return rng() % 2 ? java::SyntaxTree::leaf(k, labels[rng() % labels.size()]) : java::SyntaxTree::node(k);
  }
  std::vector<java::SyntaxTree> kids;
  for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
  return java::SyntaxTree::node(k, std::move(kids));
}

Outcome sbt_round_trip() {
  std::mt19937_64 rng(77);
  std::size_t ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto tree = random_tree(rng, 1 + i % 6);
    const auto flat = java::sbt_flatten(tree);
    long depth = 0;
    bool balanced = true;
    for (const auto& t : flat) {
      depth += t == "(" ? 1 : (t == ")" ? -1 : 0);
      balanced = balanced && depth >= 0;
    }
    balanced = balanced && depth == 0;
    bool same = false;
    try {
      same = java::sbt_parse(flat) == tree;
    } catch (const Error&) {
    }
    if (same && balanced && flat.size() == 4 * tree.node_count()) ++ok;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 trees round-trip, balanced, 4x node count"};
}

// ---- 5 ----------------------------------------------------------------------

Outcome overfit(const Scratch& scratch) {
  auto c = pipeline::load_run_config(src("configs/overfit.conf"));
  c.corpus = src(c.corpus);
  c.catalog = src(c.catalog);
  c.work_dir = scratch.dir("overfit");
  const auto paths = pipeline::Paths::in(c.work_dir);
  std::ostringstream log;
  pipeline::run_extract(c, paths, log);
  pipeline::run_rank(c, paths, log);
  pipeline::run_prepare(c, paths, log);
  const auto examples = text::read_prepared(paths.prepared);

  nn::Model model(c.model);
  model.init_params(c.model.seed, c.model.init_range);
  nn::TrainOptions opts;
  opts.on_epoch = [](const nn::EpochRecord& r) { return r.val_loss < 0.03; };
  const auto history = nn::train(model, examples, examples, opts);
  const double loss = model.mean_loss(examples);
  std::size_t exact = 0;
  for (const auto& ex : examples) {
    const std::vector<text::TokenId> want(ex.target_ids.begin() + 1, ex.target_ids.end() - 1);
    if (model.greedy_decode(ex, c.max_decode_len).ids == want) ++exact;
  }
  return {examples.size() == 32 && loss < 0.1 && exact >= 30,
          std::to_string(examples.size()) + " pairs, " + std::to_string(history.epochs.size()) +
              " epochs, train loss " + fmt("%.4f", loss) + ", exact " + std::to_string(exact) + "/32"};
}

// ---- 6 ----------------------------------------------------------------------

Outcome api_context_direction(const Scratch& scratch) {
  double bleu[2] = {0, 0};
  std::size_t methods = 0;
  for (int api = 0; api < 2; ++api) {
    const std::string work = scratch.dir(api ? "synthetic_api" : "synthetic_noapi");
    const int rc = run_cli(cli_paths("configs/synthetic.conf", work) +
                               " --use_api_context " + (api ? "true" : "false") + " run",
                           scratch.dir(api ? "synthetic_api.log" : "synthetic_noapi.log"));
    if (rc != 0) return {false, "run exited with " + std::to_string(rc)};
    bleu[api] = nlohmann::json::parse(read_bytes(work + "/scores.json")).at("bleu1").get<double>();
    const auto stats = nlohmann::json::parse(read_bytes(work + "/corpus_stats.json"));
    methods = stats.at("train").get<std::size_t>() + stats.at("validation").get<std::size_t>() +
              stats.at("test").get<std::size_t>();
  }
  const double gap = bleu[1] - bleu[0];
  return {methods >= 500 && gap >= 10.0,
          std::to_string(methods) + " methods; BLEU-1 full " + fmt("%.2f", bleu[1]) + " vs -APIcontext " +
              fmt("%.2f", bleu[0]) + " (gap " + fmt("%.2f", gap) + ")"};
}

// ---- 7 ----------------------------------------------------------------------

Outcome ablation_shape(const Scratch& scratch) {
  const std::string work = scratch.dir("ablate");
  const int rc = run_cli(cli_paths("configs/desk.conf", work) + " --max_epochs 6 ablate", scratch.dir("ablate.log"));
  if (rc != 0) return {false, "ablate exited with " + std::to_string(rc)};
  const auto table = nlohmann::json::parse(read_bytes(work + "/ablation.json"));
  const std::vector<std::string> columns = {"BLEU1", "BLEU2", "BLEU3", "BLEU4", "METEOR", "ROUGE-L"};
  if (table.at("columns").get<std::vector<std::string>>() != columns) return {false, "unexpected column list"};
  auto populated = [&](const nlohmann::json& row) {
    if (!row.at("error").is_null()) return false;
    for (const auto& col : columns) {
      if (!row.contains(col) || !row[col].is_number()) return false;
      const double v = row[col].get<double>();
      if (!(v >= 0.0 && v <= 100.0)) return false;
    }
    return true;
  };
  std::vector<std::string> ns;
  bool ok = true;
  for (const auto& row : table.at("ranking")) {
    ns.push_back(row.at("n_apis").get<std::string>());
    ok = ok && populated(row);
  }
  std::set<std::pair<std::string, bool>> cells;
  for (const auto& row : table.at("model")) {
    cells.insert({row.at("cell").get<std::string>(), row.at("api_context").get<bool>()});
    ok = ok && populated(row);
  }
  const bool shape = ns == std::vector<std::string>{"2", "3", "4", "all"} && cells.size() == 4 &&
                     table.at("model").size() == 4 && fs::exists(work + "/ablation.txt");
  return {ok && shape, "ranking rows n=" + std::to_string(ns.size()) + ", model rows " +
                           std::to_string(table.at("model").size()) + ", six metric columns " +
                           (ok ? "populated" : "MISSING")};
}

// ---- 8 ----------------------------------------------------------------------

Outcome determinism(const Scratch& scratch) {
  std::string files[2][2];
  for (int k = 0; k < 2; ++k) {
    const std::string work = scratch.dir("determinism_" + std::to_string(k));
    const int rc = run_cli(cli_paths("configs/desk.conf", work) + " --max_epochs 4 run",
                           scratch.dir("determinism_" + std::to_string(k) + ".log"));
    if (rc != 0) return {false, "run exited with " + std::to_string(rc)};
    files[k][0] = read_bytes(work + "/scores.json");
    files[k][1] = read_bytes(work + "/decoded.jsonl");
  }
  const bool ok = !files[0][0].empty() && !files[0][1].empty() && files[0][0] == files[1][0] &&
                  files[0][1] == files[1][1];
  return {ok, std::string("scores.json ") + (files[0][0] == files[1][0] ? "identical" : "DIFFERENT") +
                  ", decoded.jsonl " + (files[0][1] == files[1][1] ? "identical" : "DIFFERENT") + " (" +
                  std::to_string(files[0][1].size()) + " bytes)"};
}

// ---- 9 ----------------------------------------------------------------------

Outcome preprocessing() {
  using Tokens = std::vector<std::string>;
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };
  expect(text::subtoken_split("createNewFile") == Tokens{"create", "new", "file"}, "camelCase");
  expect(text::subtoken_split("last_modified") == Tokens{"last", "modified"}, "snake_case");
  expect(text::subtoken_split("HTTPServer2x") == Tokens{"http", "server", "2", "x"}, "acronym+digit");
  expect(text::subtoken_split("Writes a portion, of a String.") == Tokens{"writes", "a", "portion", "of", "a", "string"},
         "lowercase+punctuation");
  expect(text::subtoken_split("file.createNewFile();") == Tokens{"file", "create", "new", "file"}, "code punctuation");

  std::string body;
  for (int i = 0; i < 300; ++i) body += "tok ";
  std::string comment;
  for (int i = 0; i < 80; ++i) comment += "word ";
  const corpus::CorpusRecord rec{"r", body, comment, corpus::Split::Train};
  const auto sbt = java::sbt_flatten(java::parse_method_source("void f() {}"));
  const auto vs = text::Vocabulary::build({{"tok"}}, 100);
  const auto vt = text::Vocabulary::build({{"word"}}, 100);
  const auto ex = text::encode_example(rec, sbt, {}, vs, vt, text::ChannelCaps{});
  expect(ex.code_ids.size() == 256, "300-token code truncated to 256");
  expect(ex.target_ids.size() == 66 && ex.target_ids.front() == text::Vocabulary::kBos &&
             ex.target_ids.back() == text::Vocabulary::kEos,
         "comment capped at 64 plus BOS/EOS");

  const std::vector<corpus::CorpusRecord> records = {
      {"long", "void g() { " + body + "}", "too long", corpus::Split::Train},
      {"long_comment", "void h() {}", comment, corpus::Split::Train},
      {"ok", "void k() { x(); }", "calls x", corpus::Split::Train}};
  const auto filtered = corpus::filter_corpus(records, corpus::FilterOptions{});
  expect(filtered.kept.size() == 1 && filtered.kept[0].id == "ok" && filtered.stats.removed_too_long == 2,
         "filter removes records over 256 code / 64 comment tokens");
  std::string detail = failed.empty() ? "all fixtures hold" : "failed:";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  Scratch scratch;

  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient verification", 60, gradient_verification},
      {2, "ranking oracle equivalence", 0, ranking_oracle},
      {3, "metric golden table", 0, metric_golden_table},
      {4, "SBT round trip", 0, sbt_round_trip},
      {5, "overfit 32 pairs", 600, [&] { return overfit(scratch); }},
      {6, "API context direction", 1800, [&] { return api_context_direction(scratch); }},
      {7, "ablation harness shape", 0, [&] { return ablation_shape(scratch); }},
      {8, "determinism", 0, [&] { return determinism(scratch); }},
      {9, "preprocessing conformance", 0, preprocessing},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.limit_s) + " s limit";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  [%d] %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
