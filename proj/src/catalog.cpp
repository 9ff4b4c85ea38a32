// SPDX-License-Identifier: Apache-2.0
#include "codesum/catalog.hpp"

#include <set>

#include "codesum/errors.hpp"
#include "codesum/text/subtoken.hpp"
#include "codesum/text/vocab.hpp"

namespace codesum::catalog {

std::string_view to_string(MatchTier tier) {
  return tier == MatchTier::Exact ? "exact" : "name_only";
}

Catalog::Catalog(std::vector<ApiEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    name_arity_[{e.simple_name, e.arity()}].push_back(i);
    name_[e.simple_name].push_back(i);
    qualified_.try_emplace(e.qualified_name, i);
  }
}

std::vector<const ApiEntry*> Catalog::by_name_arity(const std::string& simple_name,
                                                    std::size_t arity) const {
  std::vector<const ApiEntry*> out;
  if (auto it = name_arity_.find({simple_name, arity}); it != name_arity_.end()) {
    for (auto i : it->second) out.push_back(&entries_[i]);
  }
  return out;
}

std::vector<const ApiEntry*> Catalog::by_name(const std::string& simple_name) const {
  std::vector<const ApiEntry*> out;
  if (auto it = name_.find(simple_name); it != name_.end()) {
    for (auto i : it->second) out.push_back(&entries_[i]);
  }
  return out;
}

const ApiEntry* Catalog::by_qualified_name(const std::string& qualified_name) const {
  auto it = qualified_.find(qualified_name);
  return it == qualified_.end() ? nullptr : &entries_[it->second];
}

std::string first_sentence(std::string_view doc) {
  std::size_t begin = doc.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  for (std::size_t i = begin; i < doc.size(); ++i) {
    if (doc[i] == '.' && (i + 1 == doc.size() || doc[i + 1] == ' ' || doc[i + 1] == '\n' ||
                          doc[i + 1] == '\t' || doc[i + 1] == '\r')) {
      return std::string(doc.substr(begin, i + 1 - begin));
    }
  }
  std::size_t end = doc.find_last_not_of(" \t\r\n");
  return std::string(doc.substr(begin, end + 1 - begin));
}

ApiEntry entry_from_json(const nlohmann::json& obj) {
  auto require_string = [&](const char* key) -> std::string {
    if (!obj.contains(key) || !obj[key].is_string()) {
      throw ValidationError(std::string("missing or non-string '") + key + "'");
    }
    return obj[key].get<std::string>();
  };
  ApiEntry e;
  e.qualified_name = require_string("qualified_name");
  if (e.qualified_name.empty() || e.qualified_name.back() == '.') {
    throw ValidationError("empty simple name in qualified_name");
  }
  const auto dot = e.qualified_name.rfind('.');
  e.simple_name = dot == std::string::npos ? e.qualified_name : e.qualified_name.substr(dot + 1);
  if (!obj.contains("params") || !obj["params"].is_array()) {
    throw ValidationError("missing or non-array 'params'");
  }
  for (const auto& p : obj["params"]) {
    if (!p.is_object() || !p.contains("type") || !p["type"].is_string() || !p.contains("name") ||
        !p["name"].is_string()) {
      throw ValidationError("param must be an object with string 'type' and 'name'");
    }
    ParamDecl decl{p["type"].get<std::string>(), p["name"].get<std::string>()};
    if (decl.type.empty()) throw ValidationError("empty parameter type");
    e.params.push_back(std::move(decl));
  }
  e.description = first_sentence(require_string("description"));
  if (e.description.empty()) throw ValidationError("empty description");
  return e;
}

nlohmann::json entry_to_json(const ApiEntry& entry) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : entry.params) params.push_back({{"type", p.type}, {"name", p.name}});
  return {{"qualified_name", entry.qualified_name},
          {"params", std::move(params)},
          {"description", entry.description}};
}

CatalogLoad load_catalog(const std::string& path) {
  std::vector<ApiEntry> entries;
  auto errors = util::read_jsonl(path, [&](const nlohmann::json& obj) {
    entries.push_back(entry_from_json(obj));
  });
  return {Catalog(std::move(entries)), std::move(errors)};
}

std::optional<Match> match_call(const java::ApiCallSite& call, const Catalog& catalog) {
  if (auto exact = catalog.by_name_arity(call.simple_name, call.arg_count); !exact.empty()) {
    return Match{exact.front(), MatchTier::Exact};
  }
  if (auto loose = catalog.by_name(call.simple_name); !loose.empty()) {
    return Match{loose.front(), MatchTier::NameOnly};
  }
  return std::nullopt;
}

std::vector<std::string> render_definition(const ApiEntry& entry) {
  auto out = text::subtoken_split(entry.simple_name);
  for (const auto& p : entry.params) {
    for (auto& t : text::subtoken_split(p.type)) out.push_back(std::move(t));
    for (auto& t : text::subtoken_split(p.name)) out.push_back(std::move(t));
  }
  if (out.empty()) out.emplace_back(text::Vocabulary::kUnkToken);
  return out;
}

std::vector<std::string> render_description(const ApiEntry& entry) {
  auto out = text::subtoken_split(entry.description);
  if (out.size() > kDescriptionCap) out.resize(kDescriptionCap);
  if (out.empty()) out.emplace_back(text::Vocabulary::kUnkToken);
  return out;
}

CatalogHealth validate_catalog(const CatalogLoad& load) {
  CatalogHealth h;
  const Catalog& cat = load.catalog;
  h.entries = cat.size();
  h.malformed_lines = load.errors.size();
  for (const auto& err : load.errors) {
    h.problems.push_back("line " + std::to_string(err.line) + ": " + err.message);
  }
  std::set<std::string> names;
  std::map<std::pair<std::string, std::size_t>, std::size_t> keys;
  std::set<std::pair<std::string, std::size_t>> qualified;
  for (const auto& e : cat.entries()) {
    names.insert(e.simple_name);
    ++keys[{e.simple_name, e.arity()}];
    if (!qualified.insert({e.qualified_name, e.arity()}).second) ++h.duplicate_qualified;
    if (text::subtoken_split(e.simple_name).empty()) {
      h.problems.push_back(e.qualified_name + ": simple name has no word characters");
    }
    // Every index must be able to find the entry again.
    const auto hits = cat.by_name_arity(e.simple_name, e.arity());
    bool found = false;
    for (const auto* hit : hits) found = found || hit == &e;
    if (!found) h.problems.push_back(e.qualified_name + ": not reachable through (name, arity) index");
  }
  h.distinct_names = names.size();
  for (const auto& [key, count] : keys) {
    if (count > 1) ++h.ambiguous_name_arity;
  }
  return h;
}

nlohmann::json to_json(const CatalogHealth& health) {
  return {{"entries", health.entries},
          {"malformed_lines", health.malformed_lines},
          {"distinct_names", health.distinct_names},
          {"ambiguous_name_arity", health.ambiguous_name_arity},
          {"duplicate_qualified", health.duplicate_qualified},
          {"problems", health.problems},
          {"ok", health.ok()}};
}

}  // namespace codesum::catalog
