// SPDX-License-Identifier: Apache-2.0
#include "codesum/java/sbt.hpp"

#include "codesum/text/subtoken.hpp"

namespace codesum::java {
namespace {

std::string node_label(const SyntaxTree& n) {
  if (n.label) return n.kind + "_" + *n.label;
  return n.kind;
}

void flatten_into(const SyntaxTree& n, std::vector<std::string>& out) {
  const std::string label = node_label(n);
  out.emplace_back("(");
  out.push_back(label);
  for (const auto& c : n.children) flatten_into(c, out);
  out.emplace_back(")");
  out.push_back(label);
}

SyntaxTree label_to_node(const std::string& label) {
  const auto underscore = label.find('_');
  if (underscore == std::string::npos) return SyntaxTree::node(label);
  return SyntaxTree::leaf(label.substr(0, underscore), label.substr(underscore + 1));
}

class SbtReader {
 public:
  explicit SbtReader(std::span<const std::string> tokens) : toks_(tokens) {}

  SyntaxTree tree() {
    SyntaxTree root = node();
    if (pos_ != toks_.size()) fail("trailing tokens after root node");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SbtError("sbt: " + what + " at token " + std::to_string(pos_));
  }

  const std::string& take() {
    if (pos_ >= toks_.size()) fail("unexpected end of tokens");
    return toks_[pos_++];
  }

  bool is_paren(const std::string& s) const { return s == "(" || s == ")"; }

  SyntaxTree node() {
    if (take() != "(") fail("expected '('");
    const std::string& open = take();
    if (is_paren(open)) fail("expected a label after '('");
    SyntaxTree n = label_to_node(open);
    while (pos_ < toks_.size() && toks_[pos_] == "(") n.children.push_back(node());
    if (take() != ")") fail("expected ')'");
    const std::string& close = take();
    if (close != open) fail("label mismatch: opened '" + open + "' closed '" + close + "'");
    if (n.label && !n.children.empty()) fail("labeled node '" + open + "' has children");
    return n;
  }

  std::span<const std::string> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::string> sbt_flatten(const SyntaxTree& tree) {
  std::vector<std::string> out;
  out.reserve(4 * tree.node_count());
  flatten_into(tree, out);
  return out;
}

SyntaxTree sbt_parse(std::span<const std::string> tokens) { return SbtReader(tokens).tree(); }

std::vector<std::string> sbt_model_tokens(const std::vector<std::string>& sbt) {
  std::vector<std::string> out;
  out.reserve(sbt.size());
  for (const auto& tok : sbt) {
    std::string t = text::to_lower_ascii(tok);
    const auto space = t.find(' ');
    if (space != std::string::npos) t.resize(space);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace codesum::java
