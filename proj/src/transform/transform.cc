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

#include <set>
#include <stdexcept>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace arrayfree {

const char* RuleName(Rule rule) {
  static constexpr const char* kNames[kRuleCount] = {
      "E1", "E2", "E3", "S1", "S2", "S3", "S4",
      "S5", "S6", "S7", "S8", "S9", "P"};
  return kNames[static_cast<int>(rule)];
}

std::string TransformReport::ToJson() const {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json rules = nlohmann::ordered_json::object();
  for (int r = 0; r < kRuleCount; ++r) {
    rules[RuleName(static_cast<Rule>(r))] = counts[r];
  }
  doc["rules"] = std::move(rules);
  doc["fresh_names"] = fresh_names;
  doc["loops_full_access"] = loops_full();
  doc["loops_partial"] = loops_partial();
  return doc.dump(2) + "\n";
}

namespace {

// Identifiers already taken in the program, in any namespace.
std::set<std::string> TakenNames(const Program& program) {
  std::set<std::string> taken;
  for (const StructDef& def : program.structs) {
    taken.insert(def.name);
    for (const StructField& f : def.fields) taken.insert(f.name);
  }
  for (const VarDecl& decl : program.decls) taken.insert(decl.name);
  return taken;
}

std::string Fresh(const std::string& base, std::set<std::string>* taken) {
  std::string name = base;
  for (int n = 1; taken->count(name); ++n) name = absl::StrCat(base, "_", n);
  taken->insert(name);
  return name;
}

void Report(TransformContext& ctx, Rule rule) {
  if (ctx.report != nullptr) ctx.report->Add(rule);
}

const Index* ArrayTarget(const Expr& target) {
  if (const auto* idx = std::get_if<Index>(&target.node)) return idx;
  if (const auto* field = std::get_if<Field>(&target.node)) {
    return ArrayTarget(*field->base);
  }
  return nullptr;
}

const WitnessPair& WitnessOf(const TransformContext& ctx,
                             const std::string& array) {
  auto it = ctx.witnesses.find(array);
  if (it == ctx.witnesses.end()) {
    throw std::invalid_argument("no witness for array '" + array + "'");
  }
  return it->second;
}

// `x_a` or `x_a.f`, mirroring the field path of an array lvalue/read.
ExprPtr WitnessAccess(const Expr& access, const WitnessPair& w) {
  if (const auto* field = std::get_if<Field>(&access.node)) {
    return MakeField(WitnessAccess(*field->base, w), field->field, access.span);
  }
  return MakeVar(w.value_var, access.span);
}

std::string OriginOf(const Expr& access, const std::string& array) {
  if (const auto* field = std::get_if<Field>(&access.node)) {
    return absl::StrCat(OriginOf(*field->base, array), ".", field->field);
  }
  return array;
}

ExprPtr IndexMatches(TransformContext& ctx, const Index& idx,
                     const WitnessPair& w, SourceSpan span) {
  return MakeBinary(BinaryOp::kEq, TransformExpr(idx.index, ctx),
                    MakeVar(w.index_var, span), span);
}

// `u = nd()` for a scalar, one per field for a record.
void Havoc(const TransformContext& ctx, const std::string& name,
           const std::optional<std::string>& record, const std::string& origin,
           SourceSpan span, std::vector<StmtPtr>* out) {
  if (!record) {
    out->push_back(MakeAssign(MakeVar(name, span), MakeNd(origin, span), span));
    return;
  }
  const StructDef* def = ctx.program->FindStruct(*record);
  for (const StructField& f : def->fields) {
    out->push_back(MakeAssign(MakeField(MakeVar(name, span), f.name, span),
                              MakeNd(absl::StrCat(origin, ".", f.name), span),
                              span));
  }
}

void HavocSet(const TransformContext& ctx, const LoopFacts& facts,
              SourceSpan span, std::vector<StmtPtr>* out) {
  for (const std::string& u : facts.havoc.scalars) {
    const VarDecl* decl = ctx.program->FindDecl(u);
    Havoc(ctx, u, decl != nullptr ? decl->record : std::nullopt, u, span, out);
  }
  for (const ArrayInfo& a : ctx.facts->arrays()) {
    if (!facts.havoc.arrays.count(a.name)) continue;
    const WitnessPair& w = WitnessOf(ctx, a.name);
    Havoc(ctx, w.value_var, w.record, a.name, span, out);
  }
}

void TransformInto(const StmtPtr& stmt, TransformContext& ctx,
                   std::vector<StmtPtr>* out);

StmtPtr TransformBlock(const StmtPtr& stmt, TransformContext& ctx) {
  std::vector<StmtPtr> stmts;
  if (const auto* block = std::get_if<Block>(&stmt->node)) {
    Report(ctx, Rule::kS7);
    for (const StmtPtr& s : block->stmts) TransformInto(s, ctx, &stmts);
  } else {
    TransformInto(stmt, ctx, &stmts);
  }
  return MakeBlock(std::move(stmts), stmt->span);
}

void TransformLoop(const StmtPtr& stmt, const For& loop, TransformContext& ctx,
                   std::vector<StmtPtr>* out) {
  const LoopFacts& facts = ctx.facts->ForLoop(*stmt);
  SourceSpan span = stmt->span;
  const LoopFacts* saved = ctx.loop;
  ctx.loop = &facts;
  std::vector<StmtPtr> body;
  StmtPtr body_block = loop.body;
  if (facts.full()) {
    Report(ctx, Rule::kS3);
    HavocSet(ctx, facts, span, out);
    const WitnessPair& w = WitnessOf(ctx, *facts.bound_array);
    out->push_back(
        MakeAssign(MakeVar(loop.iterator, span), MakeVar(w.index_var, span),
                   span));
    const auto& inner = std::get<Block>(body_block->node);
    Report(ctx, Rule::kS7);
    for (const StmtPtr& s : inner.stmts) TransformInto(s, ctx, out);
  } else {
    Report(ctx, Rule::kS4);
    std::vector<StmtPtr> guarded;
    HavocSet(ctx, facts, span, &guarded);
    const VarDecl* decl = ctx.program->FindDecl(loop.iterator);
    auto [lo, hi] = LoopBound(
        facts, decl != nullptr ? decl->scalar : ScalarType::kInt,
        ctx.config.width);
    guarded.push_back(MakeAssign(MakeVar(loop.iterator, span),
                                 MakeNdRange(lo, hi, span), span));
    const auto& inner = std::get<Block>(body_block->node);
    Report(ctx, Rule::kS7);
    for (const StmtPtr& s : inner.stmts) TransformInto(s, ctx, &guarded);
    out->push_back(MakeIf(MakeNdRange(0, 1, span),
                          MakeBlock(std::move(guarded), span), nullptr, span));
  }
  HavocSet(ctx, facts, span, out);
  if (facts.iterator_escapes) {
    out->push_back(MakeAssign(MakeVar(loop.iterator, span),
                              MakeNd(loop.iterator, span), span));
  }
  ctx.loop = saved;
}

void TransformInto(const StmtPtr& stmt, TransformContext& ctx,
                   std::vector<StmtPtr>* out) {
  if (const auto* loop = std::get_if<For>(&stmt->node)) {
    TransformLoop(stmt, *loop, ctx, out);
    return;
  }
  out->push_back(TransformStmt(stmt, ctx));
}

bool HasTransformedForms(const Program& program) {
  bool found = false;
  ForEachStmt(program.body, [&](const StmtPtr& s) {
    found |= std::holds_alternative<CondAssign>(s->node);
    ForEachOwnExpr(*s, [&](const ExprPtr& root) {
      ForEachSubexpr(root, [&](const ExprPtr& e) {
        found |= std::holds_alternative<Nd>(e->node) ||
                 std::holds_alternative<NdRange>(e->node) ||
                 std::holds_alternative<Cond>(e->node);
      });
    });
  });
  return found;
}

}  // namespace

TransformContext TransformContext::Create(const Program& program,
                                          const ProgramFacts& facts,
                                          const TransformConfig& config,
                                          TransformReport* report) {
  TransformContext ctx;
  ctx.program = &program;
  ctx.facts = &facts;
  ctx.config = config;
  ctx.report = report;
  std::set<std::string> taken = TakenNames(program);
  for (const ArrayInfo& a : facts.arrays()) {
    WitnessPair w;
    w.array = a.name;
    w.value_var = Fresh("x_" + a.name, &taken);
    w.index_var = Fresh("i_" + a.name, &taken);
    w.size = a.size;
    w.record = a.record;
    w.scalar = a.scalar;
    if (report != nullptr) {
      report->fresh_names.push_back(w.index_var);
      report->fresh_names.push_back(w.value_var);
    }
    ctx.witnesses.emplace(a.name, std::move(w));
  }
  return ctx;
}

ExprPtr TransformExpr(const ExprPtr& expr, TransformContext& ctx) {
  return std::visit(
      Overloaded{
          [&](const Index& n) -> ExprPtr {
            Report(ctx, Rule::kE2);
            const WitnessPair& w = WitnessOf(ctx, n.array);
            return MakeCond(IndexMatches(ctx, n, w, expr->span),
                            MakeVar(w.value_var, expr->span),
                            MakeNd(n.array, expr->span), expr->span);
          },
          [&](const Field& n) -> ExprPtr {
            const Index* idx = ArrayTarget(*n.base);
            if (idx == nullptr) {
              Report(ctx, Rule::kE3);
              return expr;
            }
            Report(ctx, Rule::kE2);
            const WitnessPair& w = WitnessOf(ctx, idx->array);
            return MakeCond(IndexMatches(ctx, *idx, w, expr->span),
                            WitnessAccess(*expr, w),
                            MakeNd(OriginOf(*expr, idx->array), expr->span),
                            expr->span);
          },
          [&](const Unary& n) -> ExprPtr {
            Report(ctx, Rule::kE1);
            return MakeUnary(n.op, TransformExpr(n.operand, ctx), expr->span);
          },
          [&](const Binary& n) -> ExprPtr {
            Report(ctx, Rule::kE1);
            return MakeBinary(n.op, TransformExpr(n.lhs, ctx),
                              TransformExpr(n.rhs, ctx), expr->span);
          },
          [&](const Cond& n) -> ExprPtr {
            return MakeCond(TransformExpr(n.cond, ctx),
                            TransformExpr(n.then, ctx),
                            TransformExpr(n.otherwise, ctx), expr->span);
          },
          [&](const auto&) -> ExprPtr {
            Report(ctx, Rule::kE3);
            return expr;
          },
      },
      expr->node);
}

StmtPtr TransformStmt(const StmtPtr& stmt, TransformContext& ctx) {
  SourceSpan span = stmt->span;
  return std::visit(
      Overloaded{
          [&](const Assign& n) -> StmtPtr {
            if (const Index* idx = ArrayTarget(*n.target)) {
              Report(ctx, Rule::kS1);
              const WitnessPair& w = WitnessOf(ctx, idx->array);
              ExprPtr value = TransformExpr(n.value, ctx);
              return MakeCondAssign(IndexMatches(ctx, *idx, w, span),
                                    WitnessAccess(*n.target, w), value, value,
                                    span);
            }
            Report(ctx, Rule::kS2);
            return MakeAssign(n.target, TransformExpr(n.value, ctx), span);
          },
          [&](const If& n) -> StmtPtr {
            Report(ctx, n.otherwise != nullptr ? Rule::kS5 : Rule::kS6);
            ExprPtr cond = TransformExpr(n.cond, ctx);
            StmtPtr then = TransformBlock(n.then, ctx);
            StmtPtr otherwise =
                n.otherwise != nullptr ? TransformBlock(n.otherwise, ctx)
                                       : nullptr;
            return MakeIf(cond, then, otherwise, span);
          },
          [&](const For&) -> StmtPtr {
            std::vector<StmtPtr> out;
            TransformLoop(stmt, std::get<For>(stmt->node), ctx, &out);
            return MakeBlock(std::move(out), span);
          },
          [&](const Block& n) -> StmtPtr {
            if (n.stmts.empty()) {
              Report(ctx, Rule::kS9);
              return stmt;
            }
            return TransformBlock(stmt, ctx);
          },
          [&](const Assert& n) -> StmtPtr {
            Report(ctx, Rule::kS8);
            return MakeAssert(TransformExpr(n.cond, ctx), n.id, span);
          },
          [&](const CondAssign&) -> StmtPtr {
            Report(ctx, Rule::kS9);
            return stmt;
          },
      },
      stmt->node);
}

absl::StatusOr<TransformResult> TransformProgram(
    const Program& program, const TransformConfig& config) {
  if (HasTransformedForms(program)) {
    return absl::InvalidArgumentError(
        "input already contains nd(), conditional expressions or conditional "
        "assignments");
  }
  ProgramFacts facts(program);
  TransformResult result;
  TransformContext ctx =
      TransformContext::Create(program, facts, config, &result.report);

  Program& out = result.program;
  out.structs = program.structs;
  for (const VarDecl& decl : program.decls) {
    if (!decl.is_array()) {
      out.decls.push_back(decl);
      continue;
    }
    const WitnessPair& w = ctx.witnesses.at(decl.name);
    out.decls.push_back(
        {w.value_var, decl.scalar, decl.record, std::nullopt, decl.span});
    out.decls.push_back(
        {w.index_var, ScalarType::kInt, std::nullopt, std::nullopt, decl.span});
    result.witnesses.push_back(w);
  }

  std::vector<StmtPtr> body;
  for (const WitnessPair& w : result.witnesses) {
    Report(ctx, Rule::kP);
    body.push_back(MakeAssign(
        MakeVar(w.index_var),
        MakeNdRange(0, static_cast<std::int64_t>(w.size) - 1)));
  }
  Report(ctx, Rule::kS7);
  for (const StmtPtr& s : std::get<Block>(program.body->node).stmts) {
    TransformInto(s, ctx, &body);
  }
  out.body = MakeBlock(std::move(body), program.body->span);
  return result;
}

}  // namespace arrayfree
