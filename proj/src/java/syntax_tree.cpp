// SPDX-License-Identifier: Apache-2.0
#include "codesum/java/syntax_tree.hpp"

#include <algorithm>

#include "codesum/param.hpp"

namespace codesum {

std::string strip_generics(const std::string& type_text) {
  std::string out;
  int depth = 0;
  for (char c : type_text) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace codesum

namespace codesum::java {

const std::vector<std::string_view>& all_node_kinds() {
  using namespace kind;
  static const std::vector<std::string_view> kinds = {
      kMethodDecl, kModifiers, kModifier, kTypeParams, kType,   kName,     kParams,  kParam,
      kThrows,     kBlock,     kLocalDecl, kVar,       kIf,     kWhile,    kDoWhile, kFor,
      kForInit,    kForUpdate, kForEach,  kReturn,     kThrow,  kBreak,    kContinue, kExprStmt,
      kEmpty,      kTry,       kCatch,    kFinally,    kSync,   kCall,     kArgs,    kFieldAccess,
      kIndex,      kNew,       kCast,     kCond,       kBinOp,  kUnOp,     kAssign,  kOp,
      kLiteral,    kOpaque};
  return kinds;
}

bool is_known_kind(std::string_view k) {
  const auto& kinds = all_node_kinds();
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

const SyntaxTree* SyntaxTree::child(std::string_view k) const {
  for (const auto& c : children) {
    if (c.kind == k) return &c;
  }
  return nullptr;
}

std::size_t SyntaxTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::size_t SyntaxTree::count_kind(std::string_view k) const {
  std::size_t n = kind == k ? 1 : 0;
  for (const auto& c : children) n += c.count_kind(k);
  return n;
}

std::string to_debug_string(const SyntaxTree& tree) {
  std::string out = tree.kind;
  if (tree.label) out += "[" + *tree.label + "]";
  if (!tree.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < tree.children.size(); ++i) {
      if (i) out += " ";
      out += to_debug_string(tree.children[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace codesum::java
