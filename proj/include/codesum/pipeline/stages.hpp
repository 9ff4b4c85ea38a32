// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "codesum/catalog.hpp"
#include "codesum/corpus.hpp"
#include "codesum/java/extract.hpp"
#include "codesum/metrics.hpp"
#include "codesum/pipeline/run_config.hpp"
#include "codesum/ranker.hpp"

namespace codesum::pipeline {

/// Sidecar file locations of one run directory.
struct Paths {
  std::string dir;
  std::string extract;       // extract.jsonl
  std::string corpus_stats;  // corpus_stats.json
  std::string rank;          // rank.jsonl
  std::string vocab_src;     // vocab.src.txt
  std::string vocab_tgt;     // vocab.tgt.txt
  std::string prepared;      // prepared.jsonl
  std::string model;         // model.bin
  std::string history;       // history.json
  std::string decoded;       // decoded.jsonl
  std::string scores;        // scores.json

  static Paths in(const std::string& dir);
  std::string stamp(const std::string& stage) const;
};

/// One parsed corpus method.
struct ExtractedMethod {
  corpus::CorpusRecord record;  // split always set
  std::vector<std::string> sbt;
  java::MethodSignature signature;
  std::vector<java::ApiCallSite> calls;
};

nlohmann::json to_json(const ExtractedMethod& m);
ExtractedMethod extracted_from_json(const nlohmann::json& obj);
std::vector<ExtractedMethod> read_extracted(const std::string& path);

/// Ranking of one method. `tiers` runs parallel to `set.ranked`.
struct RankedRecord {
  std::string id;
  ranker::RankedApiSet set;
  std::vector<catalog::MatchTier> tiers;
};

nlohmann::json to_json(const RankedRecord& r);
RankedRecord ranked_from_json(const nlohmann::json& obj);
std::vector<RankedRecord> read_ranked(const std::string& path);

/// Decoded output of the evaluate stage.
struct DecodedRecord {
  std::string id;
  metrics::Tokens hypothesis;
  metrics::Tokens reference;
};

nlohmann::json to_json(const DecodedRecord& d);
DecodedRecord decoded_from_json(const nlohmann::json& obj);
std::vector<DecodedRecord> read_decoded(const std::string& path);

struct StageOutcome {
  bool up_to_date = false;
  std::string summary;
};

/// Parses, filters and splits the corpus.
/// Reads config.corpus; writes extract.jsonl and corpus_stats.json.
StageOutcome run_extract(const RunConfig& config, const Paths& paths, std::ostream& log);
/// Matches call sites against config.catalog and ranks them.
/// Reads extract.jsonl; writes rank.jsonl.
StageOutcome run_rank(const RunConfig& config, const Paths& paths, std::ostream& log);
/// Selects the top n APIs, builds vocabularies on the train split and
/// encodes every split. Reads extract.jsonl and rank.jsonl.
StageOutcome run_prepare(const RunConfig& config, const Paths& paths, std::ostream& log);
/// Reads prepared.jsonl and the vocabularies; writes model.bin, history.json.
StageOutcome run_train(const RunConfig& config, const Paths& paths, std::ostream& log);
/// Greedy-decodes the test split and scores it against the references.
/// Writes decoded.jsonl and scores.json.
StageOutcome run_evaluate(const RunConfig& config, const Paths& paths, std::ostream& log);

struct MethodSummary {
  std::string id;
  std::string comment;
  std::optional<std::string> error;
};

/// Comments for arbitrary methods with the trained model in `paths`.
std::vector<MethodSummary> summarize_methods(const RunConfig& config, const Paths& paths,
                                             const std::vector<corpus::CorpusRecord>& methods);

/// Throws IoError naming `path` when it does not exist.
void require_file(const std::string& path);

}  // namespace codesum::pipeline
