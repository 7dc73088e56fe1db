// Copyright 2026 The ArrayFree Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <map>

#include "arrayfree/frontend.h"
#include "test_util.h"

namespace arrayfree {
namespace {

using ::arrayfree::testing::MustParse;
using ::arrayfree::testing::ReadTestData;
using ::arrayfree::testing::TopStmt;

TEST(ParseTest, RecordsExampleHasTwoLoopsOverRecordArray) {
  Program p = MustParse(ReadTestData("records.c"));
  const VarDecl* a = p.FindDecl("a");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->size, 100000u);
  ASSERT_TRUE(a->record.has_value());
  const StructDef* s = p.FindStruct(*a->record);
  ASSERT_NE(s, nullptr);
  ASSERT_EQ(s->fields.size(), 2u);
  EXPECT_EQ(s->fields[0].name, "p");
  EXPECT_EQ(s->fields[1].name, "q");
  EXPECT_EQ(s->fields[0].type, ScalarType::kUnsigned);
  const auto& body = std::get<Block>(p.body->node);
  ASSERT_EQ(body.stmts.size(), 2u);
  for (const StmtPtr& s : body.stmts) {
    const auto* loop = std::get_if<For>(&s->node);
    ASSERT_NE(loop, nullptr);
    EXPECT_EQ(loop->iterator, "i");
  }
}

TEST(ParseTest, SmallestAssignment) {
  Program p = MustParse("int x; x = 5;");
  const auto& body = std::get<Block>(p.body->node);
  ASSERT_EQ(body.stmts.size(), 1u);
  const auto* assign = std::get_if<Assign>(&body.stmts[0]->node);
  ASSERT_NE(assign, nullptr);
  EXPECT_TRUE(IsVarNamed(*assign->target, "x"));
  const auto* c = std::get_if<Const>(&assign->value->node);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->value, 5u);
}

TEST(ParseTest, TwoDimensionalArrayIsUnsupported) {
  ParseResult r = Parse("int a[3][3];");
  ASSERT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kUnsupported);
  EXPECT_EQ(r.diagnostics[0].span.line, 1);
  EXPECT_EQ(ParseProgram("int a[3][3];").status().code(),
            absl::StatusCode::kUnimplemented);
}

TEST(ParseTest, RejectsConstructsOutsideTheSubset) {
  for (const char* src : {
           "int x; main() { while (x) { x = 0; } }",
           "int *p;",
           "int x; main() { do { x = 1; } while (x); }",
           "int x = 3;",
       }) {
    ParseResult r = Parse(src);
    ASSERT_FALSE(r.ok()) << src;
    EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kUnsupported) << src;
  }
}

TEST(ParseTest, SyntaxErrorListsExpectedTokens) {
  ParseResult r = Parse("int x; main() { x = ; }");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kSyntax);
  EXPECT_EQ(r.diagnostics[0].span.line, 1);
  EXPECT_FALSE(r.diagnostics[0].expected.empty());
}

TEST(ParseTest, TypeErrors) {
  for (const char* src : {
           "int x; x[0] = 1;",
           "int a[2]; a = 1;",
           "int y; x = 1;",
           "struct S { int p; } r; r.q = 1;",
           "int x; int x;",
       }) {
    ParseResult r = Parse(src);
    ASSERT_FALSE(r.ok()) << src;
    EXPECT_EQ(r.diagnostics[0].kind, DiagnosticKind::kType) << src;
  }
}

TEST(ParseTest, IncrementStepsDesugar) {
  Program p = MustParse("int i, a[4]; for (i = 3; i >= 0; i--) { a[i] = i; }");
  const auto& loop = std::get<For>(TopStmt(p, 0).node);
  const auto& step = std::get<Binary>(loop.step->node);
  EXPECT_EQ(step.op, BinaryOp::kSub);
  EXPECT_TRUE(IsVarNamed(*step.lhs, "i"));
}

TEST(ParseTest, CommentsAndPreprocessorLinesAreIgnored) {
  Program p = MustParse(
      "#include <assert.h>\n"
      "int x; /* block\n comment */\n"
      "// line comment\n"
      "int main(void) { x = 1; }\n");
  EXPECT_EQ(std::get<Block>(p.body->node).stmts.size(), 1u);
}

TEST(ParseTest, AssertIdsFollowProgramOrder) {
  Program p = MustParse("int x; assert(x); if (x) { assert(1); } assert(0);");
  std::vector<int> ids;
  ForEachStmt(p.body, [&](const StmtPtr& s) {
    if (const auto* a = std::get_if<Assert>(&s->node)) ids.push_back(a->id);
  });
  EXPECT_EQ(ids, (std::vector<int>{0, 1, 2}));
}

TEST(EmitTest, SingleAssertIsOneLine) {
  Program p = MustParse("int x; assert(x == 1);");
  EXPECT_EQ(EmitStmt(TopStmt(p, 0)), "assert(x == 1);");
}

TEST(EmitTest, ParenthesizesByPrecedence) {
  Program p = MustParse("int x, y; x = (x + y) * -(-y) - (x - y);");
  EXPECT_EQ(EmitStmt(TopStmt(p, 0)), "x = (x + y) * -(-y) - (x - y);");
}

TEST(EmitTest, RoundTripsRecordsExample) {
  Program p = MustParse(ReadTestData("records.c"));
  std::string text = Emit(p);
  Program q = MustParse(text);
  EXPECT_TRUE(StructurallyEqual(p, q));
  EXPECT_EQ(Emit(q), text);
}

TEST(EmitTest, RoundTripsTransformedForms) {
  const char* src =
      "int x, i_a; struct S { int p; } x_a;\n"
      "main() { i_a = nd(0, 3); (x == i_a) ? x_a.p = 4 : 4;\n"
      "  x = ((x == i_a) ? x_a.p : nd()) + nd(-2, 2); }";
  Program p = MustParse(src);
  Program q = MustParse(Emit(p));
  EXPECT_TRUE(StructurallyEqual(p, q));
}

TEST(EmitTest, NdPrefixNamesBothHelpers) {
  ParseOptions po{NdNaming::FromPrefix("__nd")};
  Program p = *Parse("int x; x = __nd() + __nd_range(0, 3);", po).program;
  EmitOptions eo{NdNaming::FromPrefix("__nd"), ""};
  EXPECT_EQ(EmitStmt(TopStmt(p, 0), eo), "x = __nd() + __nd_range(0, 3);");
}

TEST(StructuralEqualityTest, RenamingIsABijection) {
  Program p = MustParse("int x, y; x = y;");
  Program q = MustParse("int u, v; u = v;");
  Program r = MustParse("int u, v; u = u;");
  std::map<std::string, std::string> renaming;
  EXPECT_TRUE(StructurallyEqual(p, q, &renaming));
  EXPECT_EQ(renaming["x"], "u");
  renaming.clear();
  EXPECT_FALSE(StructurallyEqual(p, r, &renaming));
}

TEST(ValidateTransformedTest, UntransformedRecordsExampleHasLoopsAndSubscripts) {
  Program p = MustParse(ReadTestData("records.c"));
  ConformanceReport report = ValidateTransformed(p);
  EXPECT_EQ(report.Count(ViolationKind::kLoop), 2);
  EXPECT_EQ(report.Count(ViolationKind::kArrayAccess), 5);
}

TEST(ValidateTransformedTest, ResidualSubscriptIsReportedWithSpan) {
  SourceSpan span{7, 3};
  Program p;
  p.decls.push_back({"a", ScalarType::kInt, std::nullopt, 2, {}});
  p.decls.push_back({"x", ScalarType::kInt, std::nullopt, std::nullopt, {}});
  p.body = MakeBlock({MakeAssign(MakeVar("x"),
                                 MakeIndex("a", MakeConst(0), span))});
  ConformanceReport report = ValidateTransformed(p);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::kArrayAccess);
  EXPECT_EQ(report.violations[0].span, span);
}

TEST(ValidateTransformedTest, EmptyNdRangeIsAViolation) {
  Program p = MustParse("int x; x = nd(0, 3);");
  EXPECT_TRUE(ValidateTransformed(p).conformant());
  p.body = MakeBlock({MakeAssign(MakeVar("x"), MakeNdRange(3, 0))});
  EXPECT_EQ(ValidateTransformed(p).Count(ViolationKind::kBadNdRange), 1);
}

}  // namespace
}  // namespace arrayfree
