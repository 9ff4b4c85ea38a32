// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "codesum/errors.hpp"
#include "codesum/java/syntax_tree.hpp"

namespace codesum::java {

class SbtError : public Error {
 public:
  using Error::Error;
};

/// Structure-based traversal. For node n: "(", label(n), children..., ")", label(n)
/// where label(n) is the kind, or "Kind_value" for labeled leaves. Output has
/// exactly 4 tokens per node. Kinds must not contain '_' or be "(" / ")".
std::vector<std::string> sbt_flatten(const SyntaxTree& tree);

/// Inverse of sbt_flatten. Throws SbtError on unbalanced input, mismatched
/// open/close labels, or trailing tokens.
SyntaxTree sbt_parse(std::span<const std::string> tokens);

/// Maps SBT tokens onto the model's source vocabulary: lowercased, and
/// multi-word labels (Opaque spans, compound types) cut at the first space.
std::vector<std::string> sbt_model_tokens(const std::vector<std::string>& sbt);

}  // namespace codesum::java
