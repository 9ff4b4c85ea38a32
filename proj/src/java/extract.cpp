// SPDX-License-Identifier: Apache-2.0
#include "codesum/java/extract.hpp"

namespace codesum::java {
namespace {

void collect_calls(const SyntaxTree& node, std::vector<ApiCallSite>& out) {
  if (node.is(kind::kCall)) {
    // Call := [receiver] Name Args
    const bool has_receiver = node.children.size() == 3;
    const SyntaxTree& name = node.children[has_receiver ? 1 : 0];
    const SyntaxTree& args = node.children.back();
    if (has_receiver) collect_calls(node.children[0], out);
    ApiCallSite site;
    site.simple_name = name.label.value_or("");
    site.arg_count = args.children.size();
    if (has_receiver) site.receiver_text = render_expression(node.children[0]);
    site.order_index = out.size();
    out.push_back(std::move(site));
    collect_calls(args, out);
    return;
  }
  for (const auto& child : node.children) collect_calls(child, out);
}

}  // namespace

MethodSignature extract_signature(const SyntaxTree& method) {
  MethodSignature sig;
  if (const auto* name = method.child(kind::kName)) sig.name = name->label.value_or("");
  if (const auto* params = method.child(kind::kParams)) {
    for (const auto& param : params->children) {
      const auto* type = param.child(kind::kType);
      const auto* pname = param.child(kind::kName);
      if (!type || !pname) continue;
      sig.params.push_back({strip_generics(type->label.value_or("")), pname->label.value_or("")});
    }
  }
  return sig;
}

std::vector<ApiCallSite> extract_api_calls(const SyntaxTree& method) {
  std::vector<ApiCallSite> out;
  // Only the body contributes; the header has no Call nodes anyway.
  collect_calls(method, out);
  return out;
}

std::string render_expression(const SyntaxTree& expr) {
  if (expr.label) return *expr.label;
  const auto& c = expr.children;
  if (expr.is(kind::kFieldAccess) && c.size() == 2) {
    return render_expression(c[0]) + "." + render_expression(c[1]);
  }
  if (expr.is(kind::kCall)) {
    const bool has_receiver = c.size() == 3;
    std::string out;
    if (has_receiver) out = render_expression(c[0]) + ".";
    out += render_expression(c[has_receiver ? 1 : 0]);
    out += "(";
    const auto& args = c.back().children;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += render_expression(args[i]);
    }
    return out + ")";
  }
  if (expr.is(kind::kIndex) && c.size() == 2) {
    return render_expression(c[0]) + "[" + render_expression(c[1]) + "]";
  }
  if (expr.is(kind::kNew) && c.size() == 2) {
    std::string out = "new " + render_expression(c[0]) + "(";
    for (std::size_t i = 0; i < c[1].children.size(); ++i) {
      if (i) out += ",";
      out += render_expression(c[1].children[i]);
    }
    return out + ")";
  }
  if (expr.is(kind::kCast) && c.size() == 2) {
    return "(" + render_expression(c[0]) + ")" + render_expression(c[1]);
  }
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " ";
    out += render_expression(c[i]);
  }
  if (expr.is(kind::kBinOp) || expr.is(kind::kCond) || expr.is(kind::kAssign)) return "(" + out + ")";
  return out;
}

}  // namespace codesum::java
