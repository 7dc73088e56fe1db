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

// Properties checked over generated programs.

#include <algorithm>
#include <functional>
#include <set>

#include "absl/strings/str_cat.h"
#include "arrayfree/analysis.h"
#include "arrayfree/frontend.h"
#include "arrayfree/harness.h"
#include "arrayfree/oracle.h"
#include "arrayfree/transform.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace arrayfree {
namespace {

using ::arrayfree::testing::MustParse;

Program Generated(std::uint64_t seed) {
  GenLimits limits;
  limits.seed = seed;
  return GenProgram(limits);
}

Program MustTransform(const Program& p) {
  auto result = TransformProgram(p);
  EXPECT_TRUE(result.ok()) << result.status() << "\n" << Emit(p);
  return result.ok() ? result->program : Program{};
}

bool SafeForBothDefaults(const Program& p) {
  return RunOriginal(p, {}, 0).failed.empty() &&
         RunOriginal(p, {}, 1).failed.empty();
}

int CountLoops(const Program& p) {
  int n = 0;
  ForEachStmt(p.body, [&](const StmtPtr& s) {
    n += std::holds_alternative<For>(s->node);
  });
  return n;
}

int CountArrayAccesses(const Program& p) {
  int n = 0;
  ForEachStmt(p.body, [&](const StmtPtr& s) {
    ForEachOwnExpr(*s, [&](const ExprPtr& root) {
      ForEachSubexpr(root, [&](const ExprPtr& e) {
        n += std::holds_alternative<Index>(e->node);
      });
    });
  });
  return n;
}

constexpr std::uint64_t kSeeds = 300;

TEST(FrontendProperty, EmitParseRoundTrip) {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    std::string text = Emit(p);
    Program again = MustParse(text);
    EXPECT_TRUE(StructurallyEqual(p, again)) << text;
    EXPECT_EQ(Emit(again), text);
  }
}

TEST(FrontendProperty, ValidateFlagsExactlyLoopsArraysAndEmptyRanges) {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    ConformanceReport original = ValidateTransformed(p);
    EXPECT_EQ(original.Count(ViolationKind::kLoop), CountLoops(p));
    EXPECT_EQ(original.Count(ViolationKind::kArrayAccess),
              CountArrayAccesses(p));
    Program t = MustTransform(p);
    EXPECT_TRUE(ValidateTransformed(t).conformant()) << Emit(t);
  }
  Program empty_range = MustParse("int x; int main() { x = nd(3, 2); }");
  EXPECT_EQ(ValidateTransformed(empty_range).Count(ViolationKind::kBadNdRange),
            1);
  Program point_range = MustParse("int x; int main() { x = nd(2, 2); }");
  EXPECT_TRUE(ValidateTransformed(point_range).conformant());
}

TEST(TransformProperty, DeterministicOutput) {
  for (std::uint64_t seed = 0; seed < kSeeds; seed += 3) {
    Program p = Generated(seed);
    EXPECT_EQ(Emit(MustTransform(p)), Emit(MustTransform(Generated(seed))));
  }
}

TEST(TransformProperty, RuleCoverageAccounting) {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    auto result = TransformProgram(p);
    ASSERT_TRUE(result.ok()) << result.status();
    const TransformReport& r = result->report;
    EXPECT_EQ(r.loops_full() + r.loops_partial(), CountLoops(p)) << Emit(p);
    EXPECT_EQ(r.Count(Rule::kS1) + r.Count(Rule::kE2), CountArrayAccesses(p))
        << Emit(p);
    EXPECT_EQ(r.Count(Rule::kP), static_cast<int>(ArrayInventory(p).size()));
  }
}

TEST(AnalysisProperty, LoopDefsNeverContainTheIterator) {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    for (const LoopFacts& f : ProgramFacts(p).loops()) {
      EXPECT_FALSE(f.defs.scalars.count(f.iterator)) << Emit(p);
      EXPECT_FALSE(f.constant_only.count(f.iterator)) << Emit(p);
    }
  }
}

// The loop with its body replaced by a store into a fresh array, followed by
// a check of every cell. Only meaningful when the header alone decides the
// iterations, which full access requires.
Program CoverageProbe(const Program& p, const For& loop, std::uint64_t size) {
  std::string decls;
  for (const StructDef& s : p.structs) {
    decls += "struct " + s.name + " {";
    for (const StructField& f : s.fields) {
      decls += absl::StrCat(
          f.type == ScalarType::kUnsigned ? " unsigned int " : " int ",
          f.name, ";");
    }
    decls += " };\n";
  }
  for (const VarDecl& d : p.decls) {
    if (d.is_array()) continue;
    decls += absl::StrCat(d.is_record() ? "struct " + *d.record
                          : d.scalar == ScalarType::kUnsigned ? "unsigned int"
                                                              : "int",
                          " ", d.name, ";\n");
  }
  std::string text = absl::StrCat(
      decls, "int seen__[", size, "];\nint main() {\n  for (", loop.iterator,
      " = ", EmitExpr(*loop.init), "; ", EmitExpr(*loop.test), "; ",
      loop.iterator, " = ", EmitExpr(*loop.step), ") { seen__[", loop.iterator,
      "] = seen__[", loop.iterator, "] + 1; }\n");
  for (std::uint64_t c = 0; c < size; ++c) {
    absl::StrAppend(&text, "  assert(seen__[", c, "] == 1);\n");
  }
  return MustParse(text + "}\n");
}

TEST(AnalysisProperty, FullArrayAccessIsUnderApproximating) {
  int confirmed = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    ProgramFacts facts(p);
    for (const LoopFacts& f : facts.loops()) {
      const auto& loop = std::get<For>(f.loop->node);
      for (const auto& [name, full] : f.full_access) {
        if (!full) continue;
        const ArrayInfo* array = facts.FindArray(name);
        ASSERT_NE(array, nullptr);
        // Every iteration value is an index and every index is visited once.
        Outcome probe = RunOriginal(CoverageProbe(p, loop, array->size));
        EXPECT_EQ(probe.status, OutcomeStatus::kPass)
            << probe.detail << "\n" << Emit(p);
        // Every access to the array in the body goes through the iterator.
        ForEachStmt(loop.body, [&](const StmtPtr& s) {
          ForEachOwnExpr(*s, [&](const ExprPtr& root) {
            ForEachSubexpr(root, [&](const ExprPtr& e) {
              const auto* idx = std::get_if<Index>(&e->node);
              if (idx == nullptr || idx->array != name) return;
              EXPECT_TRUE(IsVarNamed(*idx->index, loop.iterator)) << Emit(p);
            });
          });
        });
        ++confirmed;
      }
    }
  }
  EXPECT_GT(confirmed, 100);
}

// Every loop assigning a variable or array the assertion depends on is
// among its enclosing or defining loops.
TEST(AnalysisProperty, DefiningLoopsAreClosed) {
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    PrecisionReport report = ClassifyPrecision(p);
    std::vector<std::pair<const Stmt*, std::set<std::string>>> loop_writes;
    ForEachStmt(p.body, [&](const StmtPtr& s) {
      const auto* loop = std::get_if<For>(&s->node);
      if (loop == nullptr) return;
      std::set<std::string> written;
      ForEachStmt(loop->body, [&](const StmtPtr& inner) {
        if (const auto* a = std::get_if<Assign>(&inner->node)) {
          written.insert(LvalueRoot(*a->target));
        } else if (const auto* f = std::get_if<For>(&inner->node)) {
          written.insert(f->iterator);
        }
      });
      loop_writes.emplace_back(s.get(), std::move(written));
    });
    for (const AssertionPrecision& a : report.assertions) {
      if (!a.in_loop) continue;
      std::set<std::pair<int, int>> covered;
      for (const SourceSpan& s : a.enclosing_loops) covered.insert({s.line, s.column});
      for (const SourceSpan& s : a.defining_loops) covered.insert({s.line, s.column});
      std::set<std::string> cone = a.dependent_scalars;
      for (const std::string& access : a.dependent_accesses) {
        cone.insert(access.substr(0, access.find('[')));
      }
      for (const auto& [loop, written] : loop_writes) {
        bool writes_cone = std::any_of(
            written.begin(), written.end(),
            [&](const std::string& x) { return cone.count(x) > 0; });
        if (!writes_cone) continue;
        EXPECT_TRUE(covered.count({loop->span.line, loop->span.column}))
            << "assert " << a.assert_id << ", loop at " << loop->span.line
            << ":" << loop->span.column << "\n" << Emit(p);
      }
    }
  }
}

// Rebuilds `stmt`, prefixing the body of `target` with `extra`.
StmtPtr PrefixLoopBody(const StmtPtr& stmt, const Stmt* target,
                       const StmtPtr& extra) {
  if (stmt == nullptr) return nullptr;
  return std::visit(
      Overloaded{
          [&](const For& n) {
            StmtPtr body = PrefixLoopBody(n.body, target, extra);
            if (stmt.get() == target) body = MakeBlock({extra, body});
            return MakeFor(n.iterator, n.init, n.test, n.step, body,
                           stmt->span);
          },
          [&](const Block& n) {
            std::vector<StmtPtr> stmts;
            for (const StmtPtr& c : n.stmts) {
              stmts.push_back(PrefixLoopBody(c, target, extra));
            }
            return MakeBlock(std::move(stmts), stmt->span);
          },
          [&](const If& n) {
            return MakeIf(n.cond, PrefixLoopBody(n.then, target, extra),
                          PrefixLoopBody(n.otherwise, target, extra),
                          stmt->span);
          },
          [&](const auto&) { return stmt; },
      },
      stmt->node);
}

TEST(AnalysisProperty, HavockingADependentScalarBreaksQualification) {
  int mutated = 0;
  for (std::uint64_t seed = 0; seed < 3 * kSeeds; ++seed) {
    Program p = Generated(seed);
    PrecisionReport report = ClassifyPrecision(p);
    std::set<std::string> iterators;
    ForEachStmt(p.body, [&](const StmtPtr& s) {
      if (const auto* f = std::get_if<For>(&s->node)) iterators.insert(f->iterator);
    });
    for (size_t k = 0; k < report.assertions.size(); ++k) {
      const AssertionPrecision& a = report.assertions[k];
      if (!a.qualifies) continue;
      auto x = std::find_if(
          a.dependent_scalars.begin(), a.dependent_scalars.end(),
          [&](const std::string& v) {
            const VarDecl* d = p.FindDecl(v);
            return !iterators.count(v) && d != nullptr && !d->is_record();
          });
      if (x == a.dependent_scalars.end()) continue;
      // The innermost loop enclosing the assertion.
      const Stmt* enclosing = nullptr;
      ForEachStmt(p.body, [&](const StmtPtr& s) {
        if (s->span.line == a.enclosing_loops.back().line &&
            s->span.column == a.enclosing_loops.back().column &&
            std::holds_alternative<For>(s->node)) {
          enclosing = s.get();
        }
      });
      ASSERT_NE(enclosing, nullptr);
      Program m = p;
      m.body = PrefixLoopBody(
          p.body, enclosing,
          MakeAssign(MakeVar(*x), MakeBinary(BinaryOp::kAdd, MakeVar(*x),
                                             MakeConst(1))));
      AssertionPrecision after = ClassifyPrecision(m).assertions[k];
      EXPECT_FALSE(after.qualifies) << Emit(m);
      EXPECT_TRUE(after.violated.count(PrecisionRule::kS4)) << Emit(m);
      ++mutated;
    }
  }
  EXPECT_GT(mutated, 20);
}

TEST(OracleProperty, SoundnessOnUnsafePrograms) {
  int unsafe = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    if (SafeForBothDefaults(p)) continue;
    ++unsafe;
    DiffVerdict v = CheckSoundness(p);
    EXPECT_EQ(v.status, VerdictStatus::kHolds) << v.detail << "\n" << Emit(p);
    EXPECT_LE(v.executions, OracleConfig{}.cap * OracleConfig{}.array_defaults.size());
  }
  EXPECT_GT(unsafe, 100);
}

TEST(OracleProperty, PrecisionOnQualifyingSafePrograms) {
  int qualifying = 0;
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Program p = Generated(seed);
    if (!ClassifyPrecision(p).AllQualify() || !SafeForBothDefaults(p)) continue;
    ++qualifying;
    DiffVerdict v = CheckPrecisionEmpirical(p);
    EXPECT_EQ(v.status, VerdictStatus::kHolds) << v.detail << "\n" << Emit(p);
  }
  EXPECT_GT(qualifying, 30);
}

// A rewrite whose witness can only point at index 0 loses the violation at
// index 1; the enumeration must expose that as an uncovered failure.
TEST(OracleProperty, DetectsAWitnessRangeThatIsTooNarrow) {
  Program original = MustParse(
      "int a[2]; int i;\n"
      "int main() { for (i = 0; i < 2; i++) { a[i] = i; }\n"
      "  for (i = 0; i < 2; i++) { assert(a[i] == 0); } }\n");
  Outcome orig = RunOriginal(original);
  ASSERT_EQ(orig.failed, std::set<int>{0});
  auto result = TransformProgram(original);
  ASSERT_TRUE(result.ok());
  std::string text = Emit(result->program);
  ASSERT_NE(text.find("nd(0, 1)"), std::string::npos) << text;
  ChoiceDomains domains = DomainsFromOriginal(original, {}, 0);
  InitialState initial;
  initial.element_vars = {result->witnesses[0].value_var};

  EnumerationResult faithful =
      EnumerateTransformed(result->program, domains, {}, initial);
  EXPECT_EQ(faithful.failed, std::set<int>{0});

  std::string narrowed = text;
  narrowed.replace(narrowed.find("nd(0, 1)"), 8, "nd(0, 0)");
  EnumerationResult broken =
      EnumerateTransformed(MustParse(narrowed), domains, {}, initial);
  EXPECT_FALSE(broken.capped);
  EXPECT_TRUE(broken.failed.empty()) << narrowed;
}

TEST(OracleProperty, RangedChoicesStayInRange) {
  for (std::int64_t lo : {-3, 0, 2}) {
    for (std::int64_t width : {1, 5, 40}) {
      std::int64_t hi = lo + width - 1;
      Program p = MustParse(absl::StrCat(
          "int x; int main() { x = nd(", lo, ", ", hi, "); assert(x >= ", lo,
          "); assert(x <= ", hi, "); }"));
      EnumerationResult r = EnumerateTransformed(p, {}, {}, {});
      EXPECT_TRUE(r.failed.empty());
      EXPECT_EQ(r.executions, static_cast<std::uint64_t>(width));
    }
  }
}

TEST(OracleProperty, OriginalRunsAreDeterministic) {
  for (std::uint64_t seed = 0; seed < kSeeds; seed += 7) {
    Program p = Generated(seed);
    Outcome a = RunOriginal(p, {}, 1, true);
    Outcome b = RunOriginal(p, {}, 1, true);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.failed, b.failed);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (size_t k = 0; k < a.trace.size(); ++k) {
      EXPECT_EQ(a.trace[k].values, b.trace[k].values);
    }
  }
}

TEST(OracleProperty, EnumeratedOutcomesReplay) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Program p = Generated(seed);
    auto result = TransformProgram(p);
    ASSERT_TRUE(result.ok());
    InitialState initial;
    for (const WitnessPair& w : result->witnesses) {
      initial.element_vars.insert(w.value_var);
    }
    OracleConfig config;
    config.cap = 2000;
    EnumerationResult r = EnumerateTransformed(
        result->program, DomainsFromOriginal(p, config, 0), config, initial);
    for (size_t k = 0; k < r.outcomes.size(); k += 97) {
      Outcome again =
          ReplayTransformed(result->program, r.outcomes[k].choices, config,
                            initial);
      EXPECT_EQ(again.status, r.outcomes[k].status);
      EXPECT_EQ(again.failed, r.outcomes[k].failed);
    }
  }
}

}  // namespace
}  // namespace arrayfree
