// SPDX-License-Identifier: Apache-2.0
#include "codesum/java/parser.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "codesum/errors.hpp"

namespace codesum::java {
namespace {

// Thrown inside the body grammar when a construct is outside the subset;
// the nearest enclosing statement is then replaced by an Opaque leaf.
struct Unsupported {};

constexpr int kMaxDepth = 200;

constexpr std::array<std::string_view, 8> kPrimitiveTypes = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double"};

constexpr std::array<std::string_view, 11> kModifierWords = {
    "public", "protected", "private", "static",   "final",    "abstract",
    "native", "synchronized", "strictfp", "transient", "default"};

constexpr std::array<std::string_view, 12> kAssignOps = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};

bool contains(auto const& arr, std::string_view s) {
  return std::find(arr.begin(), arr.end(), s) != arr.end();
}

int binary_precedence(const JToken& t) {
  if (t.kind == TokenKind::Keyword) return t.text == "instanceof" ? 7 : -1;
  if (t.kind != TokenKind::Operator) return -1;
  const std::string& s = t.text;
  if (s == "||") return 1;
  if (s == "&&") return 2;
  if (s == "|") return 3;
  if (s == "^") return 4;
  if (s == "&") return 5;
  if (s == "==" || s == "!=") return 6;
  if (s == "<" || s == ">" || s == "<=" || s == ">=") return 7;
  if (s == "<<" || s == ">>" || s == ">>>") return 8;
  if (s == "+" || s == "-") return 9;
  if (s == "*" || s == "/" || s == "%") return 10;
  return -1;
}

bool is_word(const JToken& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword ||
         t.kind == TokenKind::Literal;
}

class Parser {
 public:
  explicit Parser(std::span<const JToken> tokens) : toks_(tokens) {}

  SyntaxTree method() {
    std::vector<SyntaxTree> kids;

    std::vector<SyntaxTree> mods;
    while (!eof()) {
      if (peek_is(TokenKind::Punctuation, "@") && !peek_is(TokenKind::Keyword, "interface", 1)) {
        const std::size_t start = pos_;
        ++pos_;
        header_expect_identifier("annotation name");
        while (peek_is(TokenKind::Punctuation, ".")) {
          ++pos_;
          header_expect_identifier("annotation name");
        }
        if (peek_is(TokenKind::Punctuation, "(")) skip_balanced_header();
        mods.push_back(SyntaxTree::leaf(kind::kModifier, span_text(start, pos_, false)));
        continue;
      }
      if (peek().kind == TokenKind::Keyword && contains(kModifierWords, peek().text)) {
        mods.push_back(SyntaxTree::leaf(kind::kModifier, peek().text));
        ++pos_;
        continue;
      }
      break;
    }
    if (!mods.empty()) kids.push_back(SyntaxTree::node(kind::kModifiers, std::move(mods)));

    if (peek_is(TokenKind::Operator, "<")) {
      const std::size_t start = pos_;
      skip_generic_args_header();
      kids.push_back(SyntaxTree::leaf(kind::kTypeParams, span_text(start, pos_, true)));
    }

    const bool constructor =
        peek().kind == TokenKind::Identifier && peek_is(TokenKind::Punctuation, "(", 1);
    if (!constructor) {
      if (peek_is(TokenKind::Keyword, "void")) {
        ++pos_;
      } else {
        auto type = try_type();
        if (!type) header_error("expected result type");
        kids.push_back(SyntaxTree::leaf(kind::kType, *type));
      }
    }
    if (eof() || peek().kind != TokenKind::Identifier) header_error("expected method name");
    kids.push_back(SyntaxTree::leaf(kind::kName, peek().text));
    ++pos_;

    header_expect(TokenKind::Punctuation, "(");
    std::vector<SyntaxTree> params;
    std::set<std::string> seen;
    if (!peek_is(TokenKind::Punctuation, ")")) {
      while (true) {
        while (peek_is(TokenKind::Keyword, "final") || peek_is(TokenKind::Punctuation, "@")) {
          if (peek_is(TokenKind::Keyword, "final")) {
            ++pos_;
          } else {
            ++pos_;
            header_expect_identifier("annotation name");
            if (peek_is(TokenKind::Punctuation, "(")) skip_balanced_header();
          }
        }
        auto type = try_type();
        if (!type) header_error("expected parameter type");
        if (peek_is(TokenKind::Operator, "...")) {
          *type += "...";
          ++pos_;
        }
        if (eof() || peek().kind != TokenKind::Identifier) header_error("expected parameter name");
        std::string pname = peek().text;
        const std::size_t name_offset = peek().offset;
        ++pos_;
        while (peek_is(TokenKind::Punctuation, "[") && peek_is(TokenKind::Punctuation, "]", 1)) {
          *type += "[]";
          pos_ += 2;
        }
        if (!seen.insert(pname).second) {
          throw ParseError("duplicate parameter name '" + pname + "'", name_offset);
        }
        params.push_back(SyntaxTree::node(
            kind::kParam, {SyntaxTree::leaf(kind::kType, *type), SyntaxTree::leaf(kind::kName, pname)}));
        if (peek_is(TokenKind::Punctuation, ",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    header_expect(TokenKind::Punctuation, ")");
    kids.push_back(SyntaxTree::node(kind::kParams, std::move(params)));

    while (peek_is(TokenKind::Punctuation, "[") && peek_is(TokenKind::Punctuation, "]", 1)) pos_ += 2;

    if (peek_is(TokenKind::Keyword, "throws")) {
      ++pos_;
      std::vector<SyntaxTree> thrown;
      while (true) {
        auto type = try_type();
        if (!type) header_error("expected exception type");
        thrown.push_back(SyntaxTree::leaf(kind::kType, *type));
        if (peek_is(TokenKind::Punctuation, ",")) {
          ++pos_;
          continue;
        }
        break;
      }
      kids.push_back(SyntaxTree::node(kind::kThrows, std::move(thrown)));
    }

    if (peek_is(TokenKind::Punctuation, ";")) {
      ++pos_;
    } else if (peek_is(TokenKind::Punctuation, "{")) {
      kids.push_back(block());
    } else {
      header_error("expected method body");
    }
    if (!eof()) throw ParseError("unexpected tokens after the method body", peek().offset);
    return SyntaxTree::node(kind::kMethodDecl, std::move(kids));
  }

 private:
  // ---- token helpers -------------------------------------------------------

  bool eof(std::size_t ahead = 0) const { return pos_ + ahead >= toks_.size(); }

  const JToken& peek(std::size_t ahead = 0) const {
    static const JToken sentinel{TokenKind::Punctuation, "<eof>", 0};
    return eof(ahead) ? sentinel : toks_[pos_ + ahead];
  }

  bool peek_is(TokenKind k, std::string_view text, std::size_t ahead = 0) const {
    return !eof(ahead) && toks_[pos_ + ahead].is(k, text);
  }

  std::size_t current_offset() const {
    if (!eof()) return toks_[pos_].offset;
    return toks_.empty() ? 0 : toks_.back().end();
  }

  [[noreturn]] void header_error(const std::string& what) const {
    throw ParseError(what + (eof() ? " but reached end of input" : " near '" + peek().text + "'"),
                     current_offset());
  }

  void header_expect(TokenKind k, std::string_view text) {
    if (!peek_is(k, text)) header_error("expected '" + std::string(text) + "'");
    ++pos_;
  }

  void header_expect_identifier(const std::string& what) {
    if (eof() || peek().kind != TokenKind::Identifier) header_error("expected " + what);
    ++pos_;
  }

  void skip_balanced_header() {
    if (!skip_balanced()) header_error("unbalanced brackets");
  }

  void skip_generic_args_header() {
    if (!skip_generic_args()) header_error("unbalanced type arguments");
  }

  // Skips a group opened by the current token ( '(' '[' or '{' ) up to its
  // matching close. Returns false (position unchanged) when unbalanced.
  bool skip_balanced() {
    const std::size_t start = pos_;
    int depth = 0;
    while (!eof()) {
      const JToken& t = peek();
      if (t.kind == TokenKind::Punctuation) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      }
      ++pos_;
      if (depth == 0) return true;
    }
    pos_ = start;
    return false;
  }

  // Skips `<...>` starting at the current '<', splitting `>>` / `>>>` as needed.
  bool skip_generic_args() {
    const std::size_t start = pos_;
    int depth = 0;
    while (!eof()) {
      const JToken& t = peek();
      if (t.kind == TokenKind::Operator) {
        if (t.text == "<") {
          ++depth;
        } else if (t.text == ">") {
          --depth;
        } else if (t.text == ">>") {
          depth -= 2;
        } else if (t.text == ">>>") {
          depth -= 3;
        } else if (t.text != "?" && t.text != "&") {
          break;
        }
      } else if (t.kind == TokenKind::Punctuation && t.text != "," && t.text != "." &&
                 t.text != "[" && t.text != "]" && t.text != "@") {
        break;
      }
      ++pos_;
      if (depth == 0) return true;
      if (depth < 0) break;
    }
    pos_ = start;
    return false;
  }

  std::string span_text(std::size_t begin, std::size_t end, bool compact) const {
    std::string out;
    for (std::size_t i = begin; i < end && i < toks_.size(); ++i) {
      if (i > begin) {
        const bool spaced = compact ? (is_word(toks_[i - 1]) && is_word(toks_[i])) ||
                                          toks_[i].text == "extends" || toks_[i].text == "super" ||
                                          toks_[i - 1].text == "extends" ||
                                          toks_[i - 1].text == "super"
                                    : true;
        if (spaced) out += ' ';
      }
      out += toks_[i].text;
    }
    return out;
  }

  // Type := (primitive | var | Ident ('.' Ident)*) [TypeArgs] ('[' ']')*
  // Returns compact text or nullopt with the position restored.
  std::optional<std::string> try_type() {
    const std::size_t start = pos_;
    if (eof()) return std::nullopt;
    if (peek().kind == TokenKind::Keyword && contains(kPrimitiveTypes, peek().text)) {
      ++pos_;
    } else if (peek().kind == TokenKind::Identifier || peek_is(TokenKind::Keyword, "var")) {
      ++pos_;
      while (true) {
        if (peek_is(TokenKind::Operator, "<")) {
          if (!skip_generic_args()) {
            pos_ = start;
            return std::nullopt;
          }
        }
        if (peek_is(TokenKind::Punctuation, ".") && peek(1).kind == TokenKind::Identifier) {
          pos_ += 2;
          continue;
        }
        break;
      }
    } else {
      return std::nullopt;
    }
    while (peek_is(TokenKind::Punctuation, "[") && peek_is(TokenKind::Punctuation, "]", 1)) pos_ += 2;
    return span_text(start, pos_, true);
  }

  SyntaxTree opaque(std::size_t begin, std::size_t end) const {
    return SyntaxTree::leaf(kind::kOpaque, span_text(begin, end, false));
  }

  struct DepthGuard {
    explicit DepthGuard(int& d) : depth(d) {
      if (++depth > kMaxDepth) {
        --depth;
        throw Unsupported{};
      }
    }
    ~DepthGuard() { --depth; }
    int& depth;
  };

  // ---- statements ----------------------------------------------------------

  SyntaxTree block() {
    DepthGuard guard(depth_);
    ++pos_;  // '{'
    std::vector<SyntaxTree> stmts;
    while (!eof() && !peek_is(TokenKind::Punctuation, "}")) {
      stmts.push_back(statement());
    }
    if (!eof()) ++pos_;  // '}'
    return SyntaxTree::node(kind::kBlock, std::move(stmts));
  }

  SyntaxTree statement() {
    const std::size_t start = pos_;
    const int saved_depth = depth_;
    try {
      return statement_inner();
    } catch (const Unsupported&) {
      depth_ = saved_depth;
      pos_ = start;
      return opaque_statement();
    }
  }

  // Consumes one statement-shaped token region: up to a depth-0 ';', or a
  // brace group closing at depth 0 not followed by a continuation keyword.
  SyntaxTree opaque_statement() {
    const std::size_t start = pos_;
    int depth = 0;
    while (!eof()) {
      const JToken& t = peek();
      if (depth == 0 && pos_ > start && t.is(TokenKind::Punctuation, "}")) break;
      if (t.kind == TokenKind::Punctuation) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") depth = std::max(0, depth - 1);
      }
      ++pos_;
      if (depth == 0 && t.is(TokenKind::Punctuation, ";")) break;
      if (depth == 0 && t.is(TokenKind::Punctuation, "}")) {
        const JToken& next = peek();
        const bool continues = next.kind == TokenKind::Keyword &&
                               (next.text == "catch" || next.text == "finally" ||
                                next.text == "else" || next.text == "while");
        if (!continues) break;
      }
    }
    if (pos_ == start) ++pos_;  // a stray '}' handled by caller never reaches here
    return opaque(start, pos_);
  }

  void expect(TokenKind k, std::string_view text) {
    if (!peek_is(k, text)) throw Unsupported{};
    ++pos_;
  }

  SyntaxTree paren_condition() {
    expect(TokenKind::Punctuation, "(");
    SyntaxTree cond = expression();
    expect(TokenKind::Punctuation, ")");
    return cond;
  }

  SyntaxTree statement_inner() {
    DepthGuard guard(depth_);
    const JToken& t = peek();
    if (t.is(TokenKind::Punctuation, "{")) return block();
    if (t.is(TokenKind::Punctuation, ";")) {
      ++pos_;
      return SyntaxTree::node(kind::kEmpty);
    }
    if (t.kind == TokenKind::Keyword) {
      if (t.text == "if") {
        ++pos_;
        std::vector<SyntaxTree> kids;
        kids.push_back(paren_condition());
        kids.push_back(statement());
        if (peek_is(TokenKind::Keyword, "else")) {
          ++pos_;
          kids.push_back(statement());
        }
        return SyntaxTree::node(kind::kIf, std::move(kids));
      }
      if (t.text == "while") {
        ++pos_;
        SyntaxTree cond = paren_condition();
        SyntaxTree body = statement();
        return SyntaxTree::node(kind::kWhile, {std::move(cond), std::move(body)});
      }
      if (t.text == "do") {
        ++pos_;
        SyntaxTree body = statement();
        expect(TokenKind::Keyword, "while");
        SyntaxTree cond = paren_condition();
        expect(TokenKind::Punctuation, ";");
        return SyntaxTree::node(kind::kDoWhile, {std::move(body), std::move(cond)});
      }
      if (t.text == "for") return for_statement();
      if (t.text == "return") {
        ++pos_;
        std::vector<SyntaxTree> kids;
        if (!peek_is(TokenKind::Punctuation, ";")) kids.push_back(expression());
        expect(TokenKind::Punctuation, ";");
        return SyntaxTree::node(kind::kReturn, std::move(kids));
      }
      if (t.text == "throw") {
        ++pos_;
        SyntaxTree e = expression();
        expect(TokenKind::Punctuation, ";");
        return SyntaxTree::node(kind::kThrow, {std::move(e)});
      }
      if (t.text == "break" || t.text == "continue") {
        const bool is_break = t.text == "break";
        ++pos_;
        if (peek().kind == TokenKind::Identifier) ++pos_;  // label
        expect(TokenKind::Punctuation, ";");
        return SyntaxTree::node(is_break ? kind::kBreak : kind::kContinue);
      }
      if (t.text == "try") return try_statement();
      if (t.text == "synchronized") {
        ++pos_;
        SyntaxTree lock = paren_condition();
        if (!peek_is(TokenKind::Punctuation, "{")) throw Unsupported{};
        SyntaxTree body = block();
        return SyntaxTree::node(kind::kSync, {std::move(lock), std::move(body)});
      }
      if (t.text == "final") {
        ++pos_;
        if (auto decl = try_local_decl()) return std::move(*decl);
        throw Unsupported{};
      }
      if (!contains(kPrimitiveTypes, t.text) && t.text != "var" && t.text != "this" &&
          t.text != "super" && t.text != "new") {
        throw Unsupported{};  // switch, assert, class, ...
      }
    }
    if (auto decl = try_local_decl()) return std::move(*decl);
    SyntaxTree e = expression();
    expect(TokenKind::Punctuation, ";");
    return SyntaxTree::node(kind::kExprStmt, {std::move(e)});
  }

  // LocalDecl := Type Var (',' Var)* ';'   Var := Name ('[' ']')* ['=' init]
  std::optional<SyntaxTree> try_local_decl(bool require_semicolon = true) {
    const std::size_t start = pos_;
    auto type = try_type();
    if (!type || peek().kind != TokenKind::Identifier) {
      pos_ = start;
      return std::nullopt;
    }
    const JToken& after = peek(1);
    const bool looks_like_decl =
        after.is(TokenKind::Operator, "=") || after.is(TokenKind::Punctuation, ";") ||
        after.is(TokenKind::Punctuation, ",") || after.is(TokenKind::Punctuation, "[") ||
        after.is(TokenKind::Operator, ":");
    if (!looks_like_decl) {
      pos_ = start;
      return std::nullopt;
    }
    std::vector<SyntaxTree> kids;
    kids.push_back(SyntaxTree::leaf(kind::kType, *type));
    while (true) {
      if (peek().kind != TokenKind::Identifier) throw Unsupported{};
      std::vector<SyntaxTree> var;
      var.push_back(SyntaxTree::leaf(kind::kName, peek().text));
      ++pos_;
      while (peek_is(TokenKind::Punctuation, "[") && peek_is(TokenKind::Punctuation, "]", 1)) pos_ += 2;
      if (peek_is(TokenKind::Operator, "=")) {
        ++pos_;
        if (peek_is(TokenKind::Punctuation, "{")) {
          const std::size_t init_start = pos_;
          if (!skip_balanced()) throw Unsupported{};
          var.push_back(opaque(init_start, pos_));
        } else {
          var.push_back(expression());
        }
      }
      kids.push_back(SyntaxTree::node(kind::kVar, std::move(var)));
      if (peek_is(TokenKind::Punctuation, ",")) {
        ++pos_;
        continue;
      }
      break;
    }
    if (require_semicolon) expect(TokenKind::Punctuation, ";");
    return SyntaxTree::node(kind::kLocalDecl, std::move(kids));
  }

  SyntaxTree for_statement() {
    ++pos_;  // for
    expect(TokenKind::Punctuation, "(");
    // for-each: [final] Type Name ':' expr
    {
      const std::size_t start = pos_;
      if (peek_is(TokenKind::Keyword, "final")) ++pos_;
      auto type = try_type();
      if (type && peek().kind == TokenKind::Identifier && peek_is(TokenKind::Operator, ":", 1)) {
        SyntaxTree name = SyntaxTree::leaf(kind::kName, peek().text);
        pos_ += 2;
        SyntaxTree iterable = expression();
        expect(TokenKind::Punctuation, ")");
        SyntaxTree body = statement();
        return SyntaxTree::node(kind::kForEach, {SyntaxTree::leaf(kind::kType, *type), std::move(name),
                                                 std::move(iterable), std::move(body)});
      }
      pos_ = start;
    }
    std::vector<SyntaxTree> init;
    if (!peek_is(TokenKind::Punctuation, ";")) {
      if (auto decl = try_local_decl(false)) {
        init.push_back(std::move(*decl));
      } else {
        init.push_back(expression());
        while (peek_is(TokenKind::Punctuation, ",")) {
          ++pos_;
          init.push_back(expression());
        }
      }
    }
    expect(TokenKind::Punctuation, ";");
    std::vector<SyntaxTree> kids;
    kids.push_back(SyntaxTree::node(kind::kForInit, std::move(init)));
    if (peek_is(TokenKind::Punctuation, ";")) {
      kids.push_back(SyntaxTree::node(kind::kEmpty));
    } else {
      kids.push_back(expression());
    }
    expect(TokenKind::Punctuation, ";");
    std::vector<SyntaxTree> update;
    if (!peek_is(TokenKind::Punctuation, ")")) {
      update.push_back(expression());
      while (peek_is(TokenKind::Punctuation, ",")) {
        ++pos_;
        update.push_back(expression());
      }
    }
    expect(TokenKind::Punctuation, ")");
    kids.push_back(SyntaxTree::node(kind::kForUpdate, std::move(update)));
    kids.push_back(statement());
    return SyntaxTree::node(kind::kFor, std::move(kids));
  }

  SyntaxTree try_statement() {
    ++pos_;  // try
    if (peek_is(TokenKind::Punctuation, "(")) throw Unsupported{};  // try-with-resources
    if (!peek_is(TokenKind::Punctuation, "{")) throw Unsupported{};
    std::vector<SyntaxTree> kids;
    kids.push_back(block());
    while (peek_is(TokenKind::Keyword, "catch")) {
      ++pos_;
      expect(TokenKind::Punctuation, "(");
      if (peek_is(TokenKind::Keyword, "final")) ++pos_;
      auto type = try_type();
      if (!type) throw Unsupported{};
      while (peek_is(TokenKind::Operator, "|")) {  // multi-catch
        ++pos_;
        auto alt = try_type();
        if (!alt) throw Unsupported{};
        *type += "|" + *alt;
      }
      if (peek().kind != TokenKind::Identifier) throw Unsupported{};
      SyntaxTree name = SyntaxTree::leaf(kind::kName, peek().text);
      ++pos_;
      expect(TokenKind::Punctuation, ")");
      if (!peek_is(TokenKind::Punctuation, "{")) throw Unsupported{};
      SyntaxTree body = block();
      kids.push_back(SyntaxTree::node(
          kind::kCatch, {SyntaxTree::leaf(kind::kType, *type), std::move(name), std::move(body)}));
    }
    if (peek_is(TokenKind::Keyword, "finally")) {
      ++pos_;
      if (!peek_is(TokenKind::Punctuation, "{")) throw Unsupported{};
      kids.push_back(SyntaxTree::node(kind::kFinally, {block()}));
    }
    if (kids.size() == 1) throw Unsupported{};
    return SyntaxTree::node(kind::kTry, std::move(kids));
  }

  // ---- expressions ---------------------------------------------------------

  SyntaxTree expression() {
    DepthGuard guard(depth_);
    SyntaxTree lhs = ternary();
    if (peek().kind == TokenKind::Operator && contains(kAssignOps, peek().text)) {
      SyntaxTree op = SyntaxTree::leaf(kind::kOp, peek().text);
      ++pos_;
      SyntaxTree rhs = expression();
      return SyntaxTree::node(kind::kAssign, {std::move(lhs), std::move(op), std::move(rhs)});
    }
    return lhs;
  }

  SyntaxTree ternary() {
    SyntaxTree cond = binary(1);
    if (peek_is(TokenKind::Operator, "?")) {
      ++pos_;
      SyntaxTree a = expression();
      expect(TokenKind::Operator, ":");
      SyntaxTree b = expression();
      return SyntaxTree::node(kind::kCond, {std::move(cond), std::move(a), std::move(b)});
    }
    return cond;
  }

  SyntaxTree binary(int min_prec) {
    SyntaxTree lhs = unary();
    while (true) {
      const int prec = binary_precedence(peek());
      if (prec < min_prec) break;
      SyntaxTree op = SyntaxTree::leaf(kind::kOp, peek().text);
      const bool is_instanceof = peek().is(TokenKind::Keyword, "instanceof");
      ++pos_;
      SyntaxTree rhs = [&] {
        if (!is_instanceof) return binary(prec + 1);
        auto type = try_type();
        if (!type) throw Unsupported{};
        return SyntaxTree::leaf(kind::kType, *type);
      }();
      lhs = SyntaxTree::node(kind::kBinOp, {std::move(lhs), std::move(op), std::move(rhs)});
    }
    return lhs;
  }

  bool can_start_cast_operand(const JToken& t) const {
    if (t.kind == TokenKind::Identifier || t.kind == TokenKind::Literal) return true;
    if (t.kind == TokenKind::Keyword)
      return t.text == "this" || t.text == "super" || t.text == "new";
    return t.is(TokenKind::Punctuation, "(") || t.is(TokenKind::Operator, "!") ||
           t.is(TokenKind::Operator, "~");
  }

  // Index of the ')' matching the '(' at `open`, or npos.
  std::size_t matching_paren(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      const JToken& t = toks_[i];
      if (t.kind != TokenKind::Punctuation) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")" && --depth == 0) return i;
    }
    return std::string::npos;
  }

  SyntaxTree unary() {
    DepthGuard guard(depth_);
    const JToken& t = peek();
    if (t.kind == TokenKind::Operator &&
        (t.text == "+" || t.text == "-" || t.text == "!" || t.text == "~" || t.text == "++" ||
         t.text == "--")) {
      SyntaxTree op = SyntaxTree::leaf(kind::kOp, t.text);
      ++pos_;
      SyntaxTree operand = unary();
      return SyntaxTree::node(kind::kUnOp, {std::move(op), std::move(operand)});
    }
    if (t.is(TokenKind::Punctuation, "(")) {
      const std::size_t close = matching_paren(pos_);
      if (close == std::string::npos) throw Unsupported{};
      if (close + 1 < toks_.size() && toks_[close + 1].is(TokenKind::Operator, "->")) {
        return lambda();
      }
      // cast?
      const std::size_t start = pos_;
      ++pos_;
      auto type = try_type();
      if (type && pos_ == close) {
        const bool primitive = contains(kPrimitiveTypes, toks_[start + 1].text);
        if (primitive || (close + 1 < toks_.size() && can_start_cast_operand(toks_[close + 1]))) {
          ++pos_;
          SyntaxTree operand = unary();
          return SyntaxTree::node(kind::kCast,
                                  {SyntaxTree::leaf(kind::kType, *type), std::move(operand)});
        }
      }
      pos_ = start;
    }
    return postfix();
  }

  SyntaxTree lambda() {
    const std::size_t start = pos_;
    if (peek_is(TokenKind::Punctuation, "(")) {
      if (!skip_balanced()) throw Unsupported{};
    } else {
      ++pos_;  // single identifier parameter
    }
    expect(TokenKind::Operator, "->");
    if (peek_is(TokenKind::Punctuation, "{")) {
      if (!skip_balanced()) throw Unsupported{};
    } else {
      skip_expression_extent();
    }
    return opaque(start, pos_);
  }

  // Advances over an expression without building it: stops before a
  // depth-0 ',' ';' or a closing bracket that was not opened here.
  void skip_expression_extent() {
    int depth = 0;
    const std::size_t start = pos_;
    while (!eof()) {
      const JToken& t = peek();
      if (t.kind == TokenKind::Punctuation) {
        if (t.text == "(" || t.text == "[" || t.text == "{") {
          ++depth;
        } else if (t.text == ")" || t.text == "]" || t.text == "}") {
          if (depth == 0) break;
          --depth;
        } else if (depth == 0 && (t.text == "," || t.text == ";")) {
          break;
        }
      }
      ++pos_;
    }
    if (pos_ == start) throw Unsupported{};
  }

  SyntaxTree arguments() {
    expect(TokenKind::Punctuation, "(");
    std::vector<SyntaxTree> args;
    if (!peek_is(TokenKind::Punctuation, ")")) {
      while (true) {
        args.push_back(expression());
        if (peek_is(TokenKind::Punctuation, ",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect(TokenKind::Punctuation, ")");
    return SyntaxTree::node(kind::kArgs, std::move(args));
  }

  SyntaxTree postfix() {
    const std::size_t start = pos_;
    SyntaxTree expr = primary();
    while (true) {
      if (peek_is(TokenKind::Punctuation, ".")) {
        const JToken& member = peek(1);
        if (member.kind == TokenKind::Identifier ||
            (member.kind == TokenKind::Keyword && (member.text == "class" || member.text == "this"))) {
          pos_ += 2;
          SyntaxTree name = SyntaxTree::leaf(kind::kName, member.text);
          if (peek_is(TokenKind::Punctuation, "(")) {
            SyntaxTree args = arguments();
            expr = SyntaxTree::node(kind::kCall, {std::move(expr), std::move(name), std::move(args)});
          } else {
            expr = SyntaxTree::node(kind::kFieldAccess, {std::move(expr), std::move(name)});
          }
          continue;
        }
        throw Unsupported{};  // generic call, qualified new, ...
      }
      if (peek_is(TokenKind::Punctuation, "[")) {
        ++pos_;
        SyntaxTree index = expression();
        expect(TokenKind::Punctuation, "]");
        expr = SyntaxTree::node(kind::kIndex, {std::move(expr), std::move(index)});
        continue;
      }
      if (peek_is(TokenKind::Operator, "++") || peek_is(TokenKind::Operator, "--")) {
        SyntaxTree op = SyntaxTree::leaf(kind::kOp, peek().text);
        ++pos_;
        expr = SyntaxTree::node(kind::kUnOp, {std::move(expr), std::move(op)});
        continue;
      }
      if (peek_is(TokenKind::Operator, "::")) {
        ++pos_;
        if (peek().kind == TokenKind::Identifier || peek_is(TokenKind::Keyword, "new")) {
          ++pos_;
        } else {
          throw Unsupported{};
        }
        expr = opaque(start, pos_);
        continue;
      }
      break;
    }
    return expr;
  }

  SyntaxTree primary() {
    const JToken& t = peek();
    if (eof()) throw Unsupported{};
    if (t.kind == TokenKind::Literal) {
      ++pos_;
      return SyntaxTree::leaf(kind::kLiteral, t.text);
    }
    if (t.kind == TokenKind::Identifier) {
      if (peek_is(TokenKind::Operator, "->", 1)) return lambda();
      SyntaxTree name = SyntaxTree::leaf(kind::kName, t.text);
      ++pos_;
      if (peek_is(TokenKind::Punctuation, "(")) {
        SyntaxTree args = arguments();
        return SyntaxTree::node(kind::kCall, {std::move(name), std::move(args)});
      }
      return name;
    }
    if (t.kind == TokenKind::Keyword && (t.text == "this" || t.text == "super")) {
      SyntaxTree name = SyntaxTree::leaf(kind::kName, t.text);
      ++pos_;
      if (peek_is(TokenKind::Punctuation, "(")) {
        SyntaxTree args = arguments();
        return SyntaxTree::node(kind::kCall, {std::move(name), std::move(args)});
      }
      return name;
    }
    if (t.kind == TokenKind::Keyword && contains(kPrimitiveTypes, t.text)) {
      // int.class, int[].class
      const std::size_t start = pos_;
      auto type = try_type();
      if (type && peek_is(TokenKind::Punctuation, ".") && peek_is(TokenKind::Keyword, "class", 1)) {
        pos_ += 2;
        return SyntaxTree::node(kind::kFieldAccess, {SyntaxTree::leaf(kind::kType, *type),
                                                     SyntaxTree::leaf(kind::kName, "class")});
      }
      pos_ = start;
      throw Unsupported{};
    }
    if (t.is(TokenKind::Punctuation, "(")) {
      ++pos_;
      SyntaxTree inner = expression();
      expect(TokenKind::Punctuation, ")");
      return inner;
    }
    if (t.is(TokenKind::Keyword, "new")) return creation();
    throw Unsupported{};
  }

  SyntaxTree creation() {
    const std::size_t start = pos_;
    ++pos_;  // new
    auto type = [&]() -> std::optional<std::string> {
      // Parse the element type without array dims; dims carry expressions.
      const std::size_t type_start = pos_;
      if (eof()) return std::nullopt;
      if (peek().kind == TokenKind::Keyword && contains(kPrimitiveTypes, peek().text)) {
        ++pos_;
      } else if (peek().kind == TokenKind::Identifier) {
        ++pos_;
        while (true) {
          if (peek_is(TokenKind::Operator, "<") && !skip_generic_args()) return std::nullopt;
          if (peek_is(TokenKind::Punctuation, ".") && peek(1).kind == TokenKind::Identifier) {
            pos_ += 2;
            continue;
          }
          break;
        }
      } else {
        return std::nullopt;
      }
      return span_text(type_start, pos_, true);
    }();
    if (!type) throw Unsupported{};
    if (peek_is(TokenKind::Punctuation, "[")) {
      std::vector<SyntaxTree> dims;
      std::string type_text = *type;
      while (peek_is(TokenKind::Punctuation, "[")) {
        ++pos_;
        if (peek_is(TokenKind::Punctuation, "]")) {
          ++pos_;
        } else {
          dims.push_back(expression());
          expect(TokenKind::Punctuation, "]");
        }
        type_text += "[]";
      }
      if (peek_is(TokenKind::Punctuation, "{")) {
        if (!skip_balanced()) throw Unsupported{};
        return opaque(start, pos_);
      }
      return SyntaxTree::node(kind::kNew, {SyntaxTree::leaf(kind::kType, type_text),
                                           SyntaxTree::node(kind::kArgs, std::move(dims))});
    }
    SyntaxTree args = arguments();
    if (peek_is(TokenKind::Punctuation, "{")) {  // anonymous class body
      if (!skip_balanced()) throw Unsupported{};
      return opaque(start, pos_);
    }
    return SyntaxTree::node(kind::kNew, {SyntaxTree::leaf(kind::kType, *type), std::move(args)});
  }

  std::span<const JToken> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

SyntaxTree parse_method(std::span<const JToken> tokens) {
  if (tokens.empty()) throw ParseError("empty input, expected a method declaration", 0);
  return Parser(tokens).method();
}

SyntaxTree parse_method_source(std::string_view source) {
  const auto tokens = lex_java(source);
  return parse_method(tokens);
}

}  // namespace codesum::java
