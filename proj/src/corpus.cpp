// SPDX-License-Identifier: Apache-2.0
#include "codesum/corpus.hpp"

#include <unordered_set>

#include "codesum/errors.hpp"
#include "codesum/java/parser.hpp"
#include "codesum/text/subtoken.hpp"
#include "codesum/util/hash.hpp"

namespace codesum::corpus {
namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "validation" || text == "valid") return Split::Validation;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

nlohmann::json to_json(const CorpusStats& s) {
  return {{"train", s.train},
          {"validation", s.validation},
          {"test", s.test},
          {"unassigned", s.unassigned},
          {"retained", s.retained()},
          {"filtered_out", s.filtered_out},
          {"removed_too_long", s.removed_too_long},
          {"removed_unparseable", s.removed_unparseable}};
}

CorpusRecord record_from_json(const nlohmann::json& obj) {
  auto require_string = [&](const char* key) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      throw ValidationError(std::string("missing or non-string '") + key + "'");
    }
    return obj[key].get<std::string>();
  };
  CorpusRecord r;
  r.id = require_string("id");
  r.code = require_string("code");
  r.comment = require_string("comment");
  if (r.id.empty()) throw ValidationError("empty id");
  if (blank(r.code)) throw ValidationError("empty code");
  if (blank(r.comment)) throw ValidationError("empty comment");
  if (obj.contains("split") && !obj["split"].is_null()) {
    if (!obj["split"].is_string()) throw ValidationError("non-string 'split'");
    r.split = parse_split(obj["split"].get<std::string>());
    if (!r.split) throw ValidationError("unknown split '" + obj["split"].get<std::string>() + "'");
  }
  return r;
}

nlohmann::json record_to_json(const CorpusRecord& r) {
  nlohmann::json obj = {{"id", r.id}, {"code", r.code}, {"comment", r.comment}};
  if (r.split) obj["split"] = std::string(to_string(*r.split));
  return obj;
}

LoadResult load_corpus(const std::string& path) {
  LoadResult result;
  std::unordered_set<std::string> ids;
  result.errors = util::read_jsonl(path, [&](const nlohmann::json& obj) {
    CorpusRecord r = record_from_json(obj);
    if (!ids.insert(r.id).second) throw ValidationError("duplicate id '" + r.id + "'");
    result.records.push_back(std::move(r));
  });
  return result;
}

void write_corpus(const std::vector<CorpusRecord>& records, const std::string& path) {
  std::vector<nlohmann::json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(record_to_json(r));
  util::write_jsonl(path, lines);
}

std::size_t code_token_count(std::string_view code) { return text::subtoken_split(code).size(); }

std::size_t comment_token_count(std::string_view comment) {
  return text::subtoken_split(comment).size();
}

FilterResult filter_corpus(const std::vector<CorpusRecord>& records, const FilterOptions& options) {
  FilterResult out;
  for (const auto& r : records) {
    if (code_token_count(r.code) > options.max_code_tokens ||
        comment_token_count(r.comment) > options.max_comment_tokens) {
      ++out.stats.removed_too_long;
      continue;
    }
    if (options.require_parseable) {
      try {
        (void)java::parse_method_source(r.code);
      } catch (const SourceError&) {
        ++out.stats.removed_unparseable;
        continue;
      }
    }
    if (!r.split) {
      ++out.stats.unassigned;
    } else {
      switch (*r.split) {
        case Split::Train: ++out.stats.train; break;
        case Split::Validation: ++out.stats.validation; break;
        case Split::Test: ++out.stats.test; break;
      }
    }
    out.kept.push_back(r);
  }
  out.stats.filtered_out = out.stats.removed_too_long + out.stats.removed_unparseable;
  return out;
}

Split split_for_id(std::string_view id, std::uint64_t seed) {
  const auto bucket = util::Fnv1a().update(seed).update(id).digest() % 100;
  if (bucket < 90) return Split::Train;
  if (bucket < 95) return Split::Validation;
  return Split::Test;
}

void assign_missing_splits(std::vector<CorpusRecord>& records, std::uint64_t seed) {
  for (auto& r : records) {
    if (!r.split) r.split = split_for_id(r.id, seed);
  }
}

}  // namespace codesum::corpus
