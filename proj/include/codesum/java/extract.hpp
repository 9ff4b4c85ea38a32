// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "codesum/java/syntax_tree.hpp"
#include "codesum/param.hpp"

namespace codesum::java {

struct MethodSignature {
  std::string name;
  std::vector<ParamDecl> params;  // declaration order, generics stripped from types
  bool operator==(const MethodSignature&) const = default;
};

struct ApiCallSite {
  std::string simple_name;
  std::size_t arg_count = 0;
  std::optional<std::string> receiver_text;
  std::size_t order_index = 0;
  bool operator==(const ApiCallSite&) const = default;
};

MethodSignature extract_signature(const SyntaxTree& method);

/// One site per Call node. Sites are numbered when the callee Name is
/// reached in a pre-order walk, so `a.b(x).c(y, z)` yields b then c and
/// `f(g(x))` yields f then g: source order of the call names.
std::vector<ApiCallSite> extract_api_calls(const SyntaxTree& method);

/// Compact source-like rendering of an expression subtree (receiver text).
std::string render_expression(const SyntaxTree& expr);

}  // namespace codesum::java
