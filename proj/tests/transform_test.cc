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

#include "arrayfree/transform.h"

#include <chrono>

#include "test_util.h"

namespace arrayfree {
namespace {

using ::arrayfree::testing::MustParse;
using ::arrayfree::testing::ReadTestData;
using ::arrayfree::testing::TopStmt;

TransformResult MustTransform(const Program& p) {
  absl::StatusOr<TransformResult> r = TransformProgram(p);
  EXPECT_TRUE(r.ok()) << r.status();
  return r.ok() ? *std::move(r) : TransformResult{};
}

std::vector<std::string> BodyLines(const Program& p) {
  std::vector<std::string> lines;
  for (const StmtPtr& s : std::get<Block>(p.body->node).stmts) {
    lines.push_back(EmitStmt(*s));
  }
  return lines;
}

TEST(TransformProgramTest, RecordsExampleMatchesExpectedRewrite) {
  auto start = std::chrono::steady_clock::now();
  Program records = MustParse(ReadTestData("records.c"));
  TransformResult r = MustTransform(records);
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  Program expected = MustParse(ReadTestData("records_rewritten.c"));
  std::map<std::string, std::string> renaming;
  EXPECT_TRUE(StructurallyEqual(r.program, expected, &renaming))
      << Emit(r.program);
  EXPECT_LT(seconds, 1.0);
  EXPECT_TRUE(ValidateTransformed(r.program).conformant());
}

TEST(TransformProgramTest, RecordsExampleExactText) {
  TransformResult r = MustTransform(MustParse(ReadTestData("records.c")));
  EXPECT_EQ(BodyLines(r.program),
            (std::vector<std::string>{
                "i_a = nd(0, 99999);",
                "k = nd();",
                "i = i_a;",
                "k = i;",
                "(i == i_a) ? x_a.p = k : k;",
                "(i == i_a) ? x_a.q = k * k : k * k;",
                "k = nd();",
                "i = i_a;",
                "assert(((i == i_a) ? x_a.q : nd()) == ((i == i_a) ? x_a.p : "
                "nd()) * ((i == i_a) ? x_a.p : nd()));",
            }));
  EXPECT_EQ(r.report.Count(Rule::kS3), 2);
  EXPECT_EQ(r.report.Count(Rule::kS4), 0);
  EXPECT_EQ(r.report.Count(Rule::kS1), 2);
  EXPECT_EQ(r.report.Count(Rule::kE2), 3);
  EXPECT_EQ(r.report.Count(Rule::kP), 1);
  EXPECT_EQ(r.report.fresh_names,
            (std::vector<std::string>{"i_a", "x_a"}));
}

TEST(TransformProgramTest, ArrayFreeProgramIsUnchanged) {
  Program p = MustParse("int x, y; x = 5; if (x > 1) { y = x; } assert(y);");
  TransformResult r = MustTransform(p);
  EXPECT_TRUE(StructurallyEqual(p, r.program));
  EXPECT_EQ(r.report.Count(Rule::kP), 0);
  EXPECT_EQ(Emit(p), Emit(r.program));
}

TEST(TransformProgramTest, OneWitnessPerArray) {
  TransformResult r = MustTransform(
      MustParse("int a[2], b[3]; a[0] = b[1]; assert(a[1] == b[2]);"));
  std::vector<std::string> lines = BodyLines(r.program);
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0], "i_a = nd(0, 1);");
  EXPECT_EQ(lines[1], "i_b = nd(0, 2);");
  EXPECT_EQ(lines[2], "(0 == i_a) ? x_a = (1 == i_b) ? x_b : nd() : "
                      "((1 == i_b) ? x_b : nd());");
  EXPECT_EQ(r.witnesses.size(), 2u);
}

TEST(TransformProgramTest, FreshNamesAvoidCollisions) {
  TransformResult r =
      MustTransform(MustParse("int i_a, x_a, a[2]; a[0] = i_a + x_a;"));
  ASSERT_EQ(r.witnesses.size(), 1u);
  EXPECT_EQ(r.witnesses[0].index_var, "i_a_1");
  EXPECT_EQ(r.witnesses[0].value_var, "x_a_1");
}

TEST(TransformProgramTest, RefusesTransformedInput) {
  Program p = MustParse("int x; x = nd();");
  EXPECT_EQ(TransformProgram(p).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TransformProgramTest, PartialLoopIsGuarded) {
  TransformResult r = MustTransform(MustParse(
      "int i, s, a[4]; for (i = 1; i < 3; i++) { s = s + a[i]; }"));
  EXPECT_EQ(BodyLines(r.program),
            (std::vector<std::string>{
                "i_a = nd(0, 3);",
                "if (nd(0, 1)) {\n  s = nd();\n  i = nd(1, 2);\n"
                "  s = s + ((i == i_a) ? x_a : nd());\n}",
                "s = nd();",
            }));
  EXPECT_EQ(r.report.Count(Rule::kS4), 1);
}

TEST(TransformProgramTest, EscapingIteratorIsHavocked) {
  TransformResult r = MustTransform(MustParse(
      "int i, x, a[2]; for (i = 0; i < 2; i++) { a[i] = 1; } x = i;"));
  std::vector<std::string> lines = BodyLines(r.program);
  EXPECT_EQ(lines, (std::vector<std::string>{"i_a = nd(0, 1);", "i = i_a;",
                                             "(i == i_a) ? x_a = 1 : 1;",
                                             "i = nd();", "x = i;"}));
}

TEST(TransformProgramTest, RecordWitnessHavocsEveryField) {
  TransformResult r = MustTransform(MustParse(
      "struct S { int p; int q; } a[3]; int i;"
      " for (i = 0; i < 3; i++) { a[i + 1].p = 0; }"));
  std::vector<std::string> lines = BodyLines(r.program);
  EXPECT_NE(std::find(lines.begin(), lines.end(), "x_a.q = nd();"),
            lines.end());
}

TEST(TransformStmtTest, ArrayWriteBecomesConditionalAssignment) {
  Program records = MustParse(ReadTestData("records.c"));
  ProgramFacts facts(records);
  TransformReport report;
  TransformContext ctx =
      TransformContext::Create(records, facts, TransformConfig{}, &report);
  const auto& loop = std::get<For>(TopStmt(records, 0).node);
  const StmtPtr& write = std::get<Block>(loop.body->node).stmts[1];
  EXPECT_EQ(EmitStmt(*TransformStmt(write, ctx)),
            "(i == i_a) ? x_a.p = k : k;");
  Program scalar = MustParse("int x; x = 5;");
  EXPECT_EQ(EmitStmt(*TransformStmt(std::get<Block>(scalar.body->node).stmts[0],
                                    ctx)),
            "x = 5;");
}

TEST(TransformStmtTest, FullAccessLoopSequence) {
  Program records = MustParse(ReadTestData("records.c"));
  ProgramFacts facts(records);
  TransformContext ctx =
      TransformContext::Create(records, facts, TransformConfig{}, nullptr);
  StmtPtr loop = std::get<Block>(records.body->node).stmts[0];
  EXPECT_EQ(EmitStmt(*TransformStmt(loop, ctx)),
            "{\n  k = nd();\n  i = i_a;\n  k = i;\n"
            "  (i == i_a) ? x_a.p = k : k;\n"
            "  (i == i_a) ? x_a.q = k * k : k * k;\n  k = nd();\n}");
}

TEST(TransformExprTest, Rules) {
  Program p = MustParse(
      "int i, j, k; struct S { int p; int q; } a[4];"
      " assert(a[i].q == a[i].p * a[i].p); k = k * k; k = a[j + 1].p;");
  ProgramFacts facts(p);
  TransformContext ctx =
      TransformContext::Create(p, facts, TransformConfig{}, nullptr);
  const auto& stmts = std::get<Block>(p.body->node).stmts;
  EXPECT_EQ(EmitExpr(*TransformExpr(std::get<Assert>(stmts[0]->node).cond, ctx)),
            "((i == i_a) ? x_a.q : nd()) == ((i == i_a) ? x_a.p : nd()) * "
            "((i == i_a) ? x_a.p : nd())");
  EXPECT_EQ(EmitExpr(*TransformExpr(std::get<Assign>(stmts[1]->node).value, ctx)),
            "k * k");
  EXPECT_EQ(EmitExpr(*TransformExpr(std::get<Assign>(stmts[2]->node).value, ctx)),
            "(j + 1 == i_a) ? x_a.p : nd()");
}

TEST(TransformReportTest, JsonHasRuleCounts) {
  TransformResult r = MustTransform(MustParse(ReadTestData("records.c")));
  std::string json = r.report.ToJson();
  EXPECT_NE(json.find("\"S3\": 2"), std::string::npos) << json;
  EXPECT_NE(json.find("\"loops_full_access\": 2"), std::string::npos);
}

}  // namespace
}  // namespace arrayfree
