// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codesum/catalog.hpp"
#include "codesum/java/extract.hpp"
#include "codesum/param.hpp"

namespace codesum::ranker {

/// Type head used for comparison: generics stripped, lowercased.
std::string normalize_type(const std::string& type_text);

/// Number of parameter-type differences between a method and an API:
/// size of the multiset symmetric difference of normalized types. Names and
/// order are ignored.
std::size_t param_diff(std::span<const ParamDecl> method_params, std::span<const ParamDecl> api_params);

struct RankedApi {
  catalog::ApiEntry entry;
  int score = 0;  // -param_diff, always <= 0
  std::size_t order_index = 0;
  bool operator==(const RankedApi&) const = default;
};

struct RankedApiSet {
  std::vector<RankedApi> ranked;  // (score desc, order_index asc)
  std::size_t n_selected = 0;
  std::size_t unmatched_count = 0;
  bool operator==(const RankedApiSet&) const = default;
};

struct MatchedApi {
  catalog::ApiEntry entry;
  std::size_t order_index = 0;
};

/// Scores every entry and sorts; nothing is dropped (see select_top_n).
RankedApiSet score_apis(const java::MethodSignature& signature, std::vector<MatchedApi> matched,
                        std::size_t unmatched_count = 0);

/// Keeps the first min(n, size) entries; nullopt keeps all.
RankedApiSet select_top_n(RankedApiSet set, std::optional<std::size_t> n);

/// Call sites -> catalog matches. An entry called several times is kept
/// once at its first appearance; sites with no catalog entry are counted.
struct ResolvedCalls {
  std::vector<MatchedApi> matched;
  std::vector<catalog::MatchTier> tiers;  // parallel to matched
  std::size_t unmatched_count = 0;
};
ResolvedCalls resolve_calls(const std::vector<java::ApiCallSite>& calls, const catalog::Catalog& catalog);

/// Full ranking of a parsed method against a catalog.
RankedApiSet rank_method(const java::MethodSignature& signature,
                         const std::vector<java::ApiCallSite>& calls, const catalog::Catalog& catalog);

}  // namespace codesum::ranker
