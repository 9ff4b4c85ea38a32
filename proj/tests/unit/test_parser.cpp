// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "codesum/errors.hpp"
#include "codesum/java/extract.hpp"
#include "codesum/java/parser.hpp"

using namespace codesum::java;
using codesum::ParamDecl;
using T = SyntaxTree;

namespace {

const char* kAwait =
    "boolean await(long timeout, TimeUnit unit) throws InterruptedException {\n"
    "  if (latch.getCount() == 0) { return true; }\n"
    "  boolean done = latch.await(timeout, unit);\n"
    "  if (!done) { d.dispose(); }\n"
    "  return done;\n"
    "}";

}  // namespace

TEST(Parser, EmptyMethod) {
  const T want = T::node(kind::kMethodDecl,
                         {T::leaf(kind::kName, "f"), T::node(kind::kParams), T::node(kind::kBlock)});
  EXPECT_EQ(parse_method_source("void f() {}"), want);
}

TEST(Parser, ReturnTypeAndModifiers) {
  const T tree = parse_method_source("public static int add(int a, int b) { return a + b; }");
  const T want = T::node(
      kind::kMethodDecl,
      {T::node(kind::kModifiers, {T::leaf(kind::kModifier, "public"), T::leaf(kind::kModifier, "static")}),
       T::leaf(kind::kType, "int"), T::leaf(kind::kName, "add"),
       T::node(kind::kParams,
               {T::node(kind::kParam, {T::leaf(kind::kType, "int"), T::leaf(kind::kName, "a")}),
                T::node(kind::kParam, {T::leaf(kind::kType, "int"), T::leaf(kind::kName, "b")})}),
       T::node(kind::kBlock,
               {T::node(kind::kReturn, {T::node(kind::kBinOp, {T::leaf(kind::kName, "a"),
                                                                T::leaf(kind::kOp, "+"),
                                                                T::leaf(kind::kName, "b")})})})});
  EXPECT_EQ(tree, want);
}

TEST(Parser, AwaitHeaderParams) {
  const T tree = parse_method_source(kAwait);
  const T* params = tree.child(kind::kParams);
  ASSERT_NE(params, nullptr);
  const T want = T::node(
      kind::kParams,
      {T::node(kind::kParam, {T::leaf(kind::kType, "long"), T::leaf(kind::kName, "timeout")}),
       T::node(kind::kParam, {T::leaf(kind::kType, "TimeUnit"), T::leaf(kind::kName, "unit")})});
  EXPECT_EQ(*params, want);
  EXPECT_NE(tree.child(kind::kThrows), nullptr);
}

TEST(Parser, LambdaBecomesOpaqueWithSiblingsIntact) {
  const T tree = parse_method_source("void g() { a(); x = y -> y + 1; b(); }");
  EXPECT_EQ(tree.count_kind(kind::kOpaque), 1u);
  EXPECT_EQ(tree.count_kind(kind::kCall), 2u);
  const T* block = tree.child(kind::kBlock);
  ASSERT_NE(block, nullptr);
  EXPECT_EQ(block->children.size(), 3u);
}

TEST(Parser, UnsupportedStatementIsOpaque) {
  const T tree = parse_method_source("void f() { return 1 }");
  EXPECT_GE(tree.count_kind(kind::kOpaque), 1u);
}

TEST(Parser, ControlFlow) {
  const T tree = parse_method_source(
      "int h(int[] xs) { int s = 0; for (int i = 0; i < xs.length; i++) { s += xs[i]; }"
      " while (s > 10) { s--; } do { s++; } while (s < 0);"
      " try { s = s / 2; } catch (ArithmeticException e) { throw e; } finally { s = 0; }"
      " return s > 0 ? s : -s; }");
  for (auto k : {kind::kFor, kind::kWhile, kind::kDoWhile, kind::kTry, kind::kCatch, kind::kFinally,
                 kind::kCond, kind::kIndex, kind::kThrow}) {
    EXPECT_GE(tree.count_kind(k), 1u) << k;
  }
}

TEST(Parser, MalformedInputThrows) {
  EXPECT_THROW(parse_method_source("void f( {"), codesum::ParseError);
  EXPECT_THROW(parse_method_source("void f() {} extra"), codesum::ParseError);
}

TEST(Extract, Signature) {
  EXPECT_EQ(extract_signature(parse_method_source("void f(int a, String b) {}")).params,
            (std::vector<ParamDecl>{{"int", "a"}, {"String", "b"}}));
  const auto sig = extract_signature(parse_method_source(kAwait));
  EXPECT_EQ(sig.name, "await");
  EXPECT_EQ(sig.params, (std::vector<ParamDecl>{{"long", "timeout"}, {"TimeUnit", "unit"}}));
  EXPECT_EQ(extract_signature(parse_method_source("void g(Map<K,V> m) {}")).params,
            (std::vector<ParamDecl>{{"Map", "m"}}));
}

TEST(Extract, CallSites) {
  const auto calls = extract_api_calls(parse_method_source("void f() { file.createNewFile(); }"));
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0], (ApiCallSite{"createNewFile", 0, std::string("file"), 0}));

  const auto chain = extract_api_calls(parse_method_source("void f() { a.b(x).c(y, z); }"));
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_EQ(chain[0].simple_name, "b");
  EXPECT_EQ(chain[0].arg_count, 1u);
  EXPECT_EQ(chain[1].simple_name, "c");
  EXPECT_EQ(chain[1].arg_count, 2u);
  EXPECT_EQ(chain[1].order_index, 1u);

  EXPECT_TRUE(extract_api_calls(parse_method_source("void f() {}")).empty());
}

TEST(Extract, AwaitCallOrder) {
  const auto calls = extract_api_calls(parse_method_source(kAwait));
  ASSERT_EQ(calls.size(), 3u);
  EXPECT_EQ(calls[0].simple_name, "getCount");
  EXPECT_EQ(calls[1].simple_name, "await");
  EXPECT_EQ(calls[2].simple_name, "dispose");
  for (std::size_t i = 0; i < calls.size(); ++i) EXPECT_EQ(calls[i].order_index, i);
}
