// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codesum/java/extract.hpp"
#include "codesum/param.hpp"
#include "codesum/util/jsonl.hpp"

namespace codesum::catalog {

/// One documented API from the offline catalog.
struct ApiEntry {
  std::string qualified_name;  // e.g. java.io.Writer.write
  std::string simple_name;     // last dot segment
  std::vector<ParamDecl> params;
  std::string description;  // first sentence of the doc text

  std::size_t arity() const { return params.size(); }
  bool operator==(const ApiEntry&) const = default;
};

/// How a call site was resolved against the catalog.
enum class MatchTier { Exact, NameOnly };

std::string_view to_string(MatchTier tier);

struct Match {
  const ApiEntry* entry = nullptr;
  MatchTier tier = MatchTier::Exact;
};

/// Immutable, indexed catalog. Lookups return entries in file order.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ApiEntry> entries);

  const std::vector<ApiEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<const ApiEntry*> by_name_arity(const std::string& simple_name, std::size_t arity) const;
  std::vector<const ApiEntry*> by_name(const std::string& simple_name) const;
  const ApiEntry* by_qualified_name(const std::string& qualified_name) const;

 private:
  std::vector<ApiEntry> entries_;
  std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>> name_arity_;
  std::map<std::string, std::vector<std::size_t>> name_;
  std::map<std::string, std::size_t> qualified_;  // first occurrence
};

struct CatalogLoad {
  Catalog catalog;
  std::vector<util::LineError> errors;
};

/// Reads a catalog JSON-lines file (qualified_name, params[{type,name}], description).
/// Malformed lines are skipped and reported. Throws IoError if unreadable.
CatalogLoad load_catalog(const std::string& path);

/// Validates and converts one catalog object; throws ValidationError.
ApiEntry entry_from_json(const nlohmann::json& obj);
nlohmann::json entry_to_json(const ApiEntry& entry);

/// First sentence of doc text: up to and including the first '.' followed by
/// whitespace or end of text.
std::string first_sentence(std::string_view doc);

/// Resolution: (simple_name, arity) exact, else name-only (first in file
/// order), else nullopt.
std::optional<Match> match_call(const java::ApiCallSite& call, const Catalog& catalog);

/// API definition tokens: split(name) then split(type) + split(name) per parameter.
std::vector<std::string> render_definition(const ApiEntry& entry);

inline constexpr std::size_t kDescriptionCap = 32;

/// Normalized description tokens capped at 32; a single "<unk>" when nothing survives.
std::vector<std::string> render_description(const ApiEntry& entry);

struct CatalogHealth {
  std::size_t entries = 0;
  std::size_t malformed_lines = 0;
  std::size_t distinct_names = 0;
  std::size_t ambiguous_name_arity = 0;  // (name, arity) keys with more than one entry
  std::size_t duplicate_qualified = 0;   // identical qualified name + arity
  std::vector<std::string> problems;
  bool ok() const { return malformed_lines == 0 && problems.empty(); }
};

CatalogHealth validate_catalog(const CatalogLoad& load);
nlohmann::json to_json(const CatalogHealth& health);

}  // namespace codesum::catalog
