// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "codesum/util/jsonl.hpp"

namespace codesum::corpus {

enum class Split { Train, Validation, Test };

std::string_view to_string(Split split);
/// Accepts "train", "validation"/"valid", "test".
std::optional<Split> parse_split(std::string_view text);

/// One Java method with its reference summary.
struct CorpusRecord {
  std::string id;
  std::string code;
  std::string comment;
  std::optional<Split> split;  // absent in unsplit corpora

  bool operator==(const CorpusRecord&) const = default;
};

struct CorpusStats {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  std::size_t unassigned = 0;
  std::size_t filtered_out = 0;
  std::size_t removed_too_long = 0;
  std::size_t removed_unparseable = 0;

  std::size_t retained() const { return train + validation + test + unassigned; }
};

nlohmann::json to_json(const CorpusStats& stats);

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<util::LineError> errors;
};

/// Reads a JSON-lines corpus (id, code, comment, optional split). Malformed
/// lines, empty code/comment and repeated ids are reported and skipped.
/// Throws IoError when the file cannot be read.
LoadResult load_corpus(const std::string& path);

void write_corpus(const std::vector<CorpusRecord>& records, const std::string& path);

CorpusRecord record_from_json(const nlohmann::json& obj);
nlohmann::json record_to_json(const CorpusRecord& record);

struct FilterOptions {
  std::size_t max_code_tokens = 256;
  std::size_t max_comment_tokens = 64;
  bool require_parseable = true;
};

struct FilterResult {
  std::vector<CorpusRecord> kept;
  CorpusStats stats;
};

/// Removes records over the sub-token caps first, then (optionally) those the
/// Java method parser rejects. Order is preserved.
FilterResult filter_corpus(const std::vector<CorpusRecord>& records, const FilterOptions& options);

/// Sub-token counts used by the caps.
std::size_t code_token_count(std::string_view code);
std::size_t comment_token_count(std::string_view comment);

/// Deterministic 90/5/5 split by FNV-1a hash of (seed, id). Records that
/// already carry a split keep it.
void assign_missing_splits(std::vector<CorpusRecord>& records, std::uint64_t seed);
Split split_for_id(std::string_view id, std::uint64_t seed);

}  // namespace codesum::corpus
