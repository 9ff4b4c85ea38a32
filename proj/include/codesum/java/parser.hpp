// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>

#include "codesum/java/lexer.hpp"
#include "codesum/java/syntax_tree.hpp"

namespace codesum::java {

/// Parses one method (or constructor) declaration.
///
/// The header (modifiers, type parameters, result type, name, parameters,
/// throws clause) must be well formed, otherwise ParseError is thrown with
/// the offending offset. The body is parsed with a subset grammar and is
/// total: statements or expressions outside the subset (lambdas, method
/// references, anonymous classes, switch, array initializers, ...) become
/// Opaque leaves covering their token span and parsing continues after them.
/// A `void` result produces no Type child.
SyntaxTree parse_method(std::span<const JToken> tokens);

/// lex_java + parse_method.
SyntaxTree parse_method_source(std::string_view source);

}  // namespace codesum::java
