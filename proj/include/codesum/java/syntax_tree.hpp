// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codesum::java {

/// Node categories produced by the method parser.
///
///   Declaration: MethodDecl Modifiers Modifier TypeParams Type Name Params Param Throws
///   Statements:  Block LocalDecl Var If While DoWhile For ForInit ForUpdate ForEach
///                Return Throw Break Continue ExprStmt Empty Try Catch Finally Sync
///   Expressions: Call Args FieldAccess Index New Cast Cond BinOp UnOp Assign Op Literal
///   Fallback:    Opaque (leaf whose label is the skipped source span)
///
/// Leaves that carry a value (Name, Type, Literal, Op, Modifier, TypeParams, Opaque)
/// hold it in `label`; every other node is unlabeled.
namespace kind {
inline constexpr std::string_view kMethodDecl = "MethodDecl";
inline constexpr std::string_view kModifiers = "Modifiers";
inline constexpr std::string_view kModifier = "Modifier";
inline constexpr std::string_view kTypeParams = "TypeParams";
inline constexpr std::string_view kType = "Type";
inline constexpr std::string_view kName = "Name";
inline constexpr std::string_view kParams = "Params";
inline constexpr std::string_view kParam = "Param";
inline constexpr std::string_view kThrows = "Throws";
inline constexpr std::string_view kBlock = "Block";
inline constexpr std::string_view kLocalDecl = "LocalDecl";
inline constexpr std::string_view kVar = "Var";
inline constexpr std::string_view kIf = "If";
inline constexpr std::string_view kWhile = "While";
inline constexpr std::string_view kDoWhile = "DoWhile";
inline constexpr std::string_view kFor = "For";
inline constexpr std::string_view kForInit = "ForInit";
inline constexpr std::string_view kForUpdate = "ForUpdate";
inline constexpr std::string_view kForEach = "ForEach";
inline constexpr std::string_view kReturn = "Return";
inline constexpr std::string_view kThrow = "Throw";
inline constexpr std::string_view kBreak = "Break";
inline constexpr std::string_view kContinue = "Continue";
inline constexpr std::string_view kExprStmt = "ExprStmt";
inline constexpr std::string_view kEmpty = "Empty";
inline constexpr std::string_view kTry = "Try";
inline constexpr std::string_view kCatch = "Catch";
inline constexpr std::string_view kFinally = "Finally";
inline constexpr std::string_view kSync = "Sync";
inline constexpr std::string_view kCall = "Call";
inline constexpr std::string_view kArgs = "Args";
inline constexpr std::string_view kFieldAccess = "FieldAccess";
inline constexpr std::string_view kIndex = "Index";
inline constexpr std::string_view kNew = "New";
inline constexpr std::string_view kCast = "Cast";
inline constexpr std::string_view kCond = "Cond";
inline constexpr std::string_view kBinOp = "BinOp";
inline constexpr std::string_view kUnOp = "UnOp";
inline constexpr std::string_view kAssign = "Assign";
inline constexpr std::string_view kOp = "Op";
inline constexpr std::string_view kLiteral = "Literal";
inline constexpr std::string_view kOpaque = "Opaque";
}  // namespace kind

const std::vector<std::string_view>& all_node_kinds();
bool is_known_kind(std::string_view k);

struct SyntaxTree {
  std::string kind;
  std::optional<std::string> label;  // only on childless nodes
  std::vector<SyntaxTree> children;

  static SyntaxTree leaf(std::string_view kind, std::string label) {
    return SyntaxTree{std::string(kind), std::move(label), {}};
  }
  static SyntaxTree node(std::string_view kind, std::vector<SyntaxTree> children = {}) {
    return SyntaxTree{std::string(kind), std::nullopt, std::move(children)};
  }

  bool is(std::string_view k) const { return kind == k; }
  /// First direct child of the given kind, or nullptr.
  const SyntaxTree* child(std::string_view k) const;
  std::size_t node_count() const;
  std::size_t count_kind(std::string_view k) const;

  bool operator==(const SyntaxTree&) const = default;
};

/// Bracketed debug form, e.g. `MethodDecl(Name[f] Params Block)`.
std::string to_debug_string(const SyntaxTree& tree);

}  // namespace codesum::java
