// SPDX-License-Identifier: Apache-2.0
#include "codesum/ranker.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "codesum/text/subtoken.hpp"

namespace codesum::ranker {

std::string normalize_type(const std::string& type_text) {
  std::string head = text::to_lower_ascii(strip_generics(type_text));
  head.erase(std::remove_if(head.begin(), head.end(), [](char c) { return c == ' ' || c == '\t'; }),
             head.end());
  return head;
}

std::size_t param_diff(std::span<const ParamDecl> method_params, std::span<const ParamDecl> api_params) {
  std::map<std::string, long> balance;  // method count minus api count, per type
  for (const auto& p : method_params) ++balance[normalize_type(p.type)];
  for (const auto& p : api_params) --balance[normalize_type(p.type)];
  std::size_t diff = 0;
  for (const auto& [type, b] : balance) diff += static_cast<std::size_t>(b < 0 ? -b : b);
  return diff;
}

RankedApiSet score_apis(const java::MethodSignature& signature, std::vector<MatchedApi> matched,
                        std::size_t unmatched_count) {
  RankedApiSet set;
  set.unmatched_count = unmatched_count;
  set.ranked.reserve(matched.size());
  for (auto& m : matched) {
    const int score = -static_cast<int>(param_diff(signature.params, m.entry.params));
    set.ranked.push_back({std::move(m.entry), score, m.order_index});
  }
  std::stable_sort(set.ranked.begin(), set.ranked.end(), [](const RankedApi& a, const RankedApi& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.order_index < b.order_index;
  });
  set.n_selected = set.ranked.size();
  return set;
}

RankedApiSet select_top_n(RankedApiSet set, std::optional<std::size_t> n) {
  if (n && *n < set.ranked.size()) set.ranked.resize(*n);
  set.n_selected = set.ranked.size();
  return set;
}

ResolvedCalls resolve_calls(const std::vector<java::ApiCallSite>& calls,
                            const catalog::Catalog& catalog) {
  ResolvedCalls out;
  std::set<const catalog::ApiEntry*> seen;
  for (const auto& call : calls) {
    auto match = catalog::match_call(call, catalog);
    if (!match) {
      ++out.unmatched_count;
      continue;
    }
    if (!seen.insert(match->entry).second) continue;
    out.matched.push_back({*match->entry, call.order_index});
    out.tiers.push_back(match->tier);
  }
  return out;
}

RankedApiSet rank_method(const java::MethodSignature& signature,
                         const std::vector<java::ApiCallSite>& calls,
                         const catalog::Catalog& catalog) {
  auto resolved = resolve_calls(calls, catalog);
  return score_apis(signature, std::move(resolved.matched), resolved.unmatched_count);
}

}  // namespace codesum::ranker
