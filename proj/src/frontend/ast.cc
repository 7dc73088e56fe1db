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

#include "arrayfree/ast.h"

#include <utility>

namespace arrayfree {

const char* BinaryOpSpelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
    case BinaryOp::kMod: return "%";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kAnd: return "&&";
    case BinaryOp::kOr: return "||";
  }
  return "?";
}

const char* UnaryOpSpelling(UnaryOp op) {
  return op == UnaryOp::kNeg ? "-" : "!";
}

const VarDecl* Program::FindDecl(const std::string& name) const {
  for (const VarDecl& decl : decls) {
    if (decl.name == name) return &decl;
  }
  return nullptr;
}

const StructDef* Program::FindStruct(const std::string& name) const {
  for (const StructDef& def : structs) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

std::optional<ScalarType> Program::FieldType(const VarDecl& decl,
                                             const std::string& field) const {
  if (!decl.record) return std::nullopt;
  const StructDef* def = FindStruct(*decl.record);
  if (def == nullptr) return std::nullopt;
  for (const StructField& f : def->fields) {
    if (f.name == field) return f.type;
  }
  return std::nullopt;
}

namespace {

template <typename T>
ExprPtr NewExpr(T node, SourceSpan span) {
  return std::make_shared<const Expr>(Expr{span, std::move(node)});
}

template <typename T>
StmtPtr NewStmt(T node, SourceSpan span) {
  return std::make_shared<const Stmt>(Stmt{span, std::move(node)});
}

}  // namespace

ExprPtr MakeConst(std::uint64_t value, bool is_unsigned, SourceSpan span) {
  return NewExpr(Const{value, is_unsigned}, span);
}
ExprPtr MakeVar(std::string name, SourceSpan span) {
  return NewExpr(VarRef{std::move(name)}, span);
}
ExprPtr MakeIndex(std::string array, ExprPtr index, SourceSpan span) {
  return NewExpr(Index{std::move(array), std::move(index)}, span);
}
ExprPtr MakeField(ExprPtr base, std::string field, SourceSpan span) {
  return NewExpr(Field{std::move(base), std::move(field)}, span);
}
ExprPtr MakeUnary(UnaryOp op, ExprPtr operand, SourceSpan span) {
  return NewExpr(Unary{op, std::move(operand)}, span);
}
ExprPtr MakeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  return NewExpr(Binary{op, std::move(lhs), std::move(rhs)}, span);
}
ExprPtr MakeCond(ExprPtr cond, ExprPtr then, ExprPtr otherwise,
                 SourceSpan span) {
  return NewExpr(Cond{std::move(cond), std::move(then), std::move(otherwise)},
                 span);
}
ExprPtr MakeNd(std::string origin, SourceSpan span) {
  return NewExpr(Nd{std::move(origin)}, span);
}
ExprPtr MakeNdRange(std::int64_t lo, std::int64_t hi, SourceSpan span) {
  return NewExpr(NdRange{lo, hi}, span);
}

StmtPtr MakeAssign(ExprPtr target, ExprPtr value, SourceSpan span) {
  return NewStmt(Assign{std::move(target), std::move(value)}, span);
}
StmtPtr MakeCondAssign(ExprPtr cond, ExprPtr target, ExprPtr value,
                       ExprPtr otherwise, SourceSpan span) {
  return NewStmt(CondAssign{std::move(cond), std::move(target),
                            std::move(value), std::move(otherwise)},
                 span);
}
StmtPtr MakeIf(ExprPtr cond, StmtPtr then, StmtPtr otherwise,
               SourceSpan span) {
  return NewStmt(If{std::move(cond), std::move(then), std::move(otherwise)},
                 span);
}
StmtPtr MakeFor(std::string iterator, ExprPtr init, ExprPtr test, ExprPtr step,
                StmtPtr body, SourceSpan span) {
  return NewStmt(For{std::move(iterator), std::move(init), std::move(test),
                     std::move(step), std::move(body)},
                 span);
}
StmtPtr MakeBlock(std::vector<StmtPtr> stmts, SourceSpan span) {
  return NewStmt(Block{std::move(stmts)}, span);
}
StmtPtr MakeAssert(ExprPtr cond, int id, SourceSpan span) {
  return NewStmt(Assert{std::move(cond), id}, span);
}

std::string LvalueRoot(const Expr& lvalue) {
  return std::visit(Overloaded{
                        [](const VarRef& n) { return n.name; },
                        [](const Index& n) { return n.array; },
                        [](const Field& n) { return LvalueRoot(*n.base); },
                        [](const auto&) { return std::string(); },
                    },
                    lvalue.node);
}

bool IsLvalue(const Expr& expr) {
  if (std::holds_alternative<VarRef>(expr.node) ||
      std::holds_alternative<Index>(expr.node)) {
    return true;
  }
  if (const auto* field = std::get_if<Field>(&expr.node)) {
    return IsLvalue(*field->base);
  }
  return false;
}

bool IsVarNamed(const Expr& expr, const std::string& name) {
  const auto* var = std::get_if<VarRef>(&expr.node);
  return var != nullptr && var->name == name;
}

namespace {

bool SameName(const std::string& a, const std::string& b,
              std::map<std::string, std::string>* renaming) {
  if (renaming == nullptr) return a == b;
  auto it = renaming->find(a);
  if (it != renaming->end()) return it->second == b;
  for (const auto& [from, to] : *renaming) {
    if (to == b) return false;
  }
  renaming->emplace(a, b);
  return true;
}

bool EqualPtr(const ExprPtr& a, const ExprPtr& b,
              std::map<std::string, std::string>* renaming) {
  if (a == nullptr || b == nullptr) return a == b;
  return StructurallyEqual(*a, *b, renaming);
}

bool EqualPtr(const StmtPtr& a, const StmtPtr& b,
              std::map<std::string, std::string>* renaming) {
  if (a == nullptr || b == nullptr) return a == b;
  return StructurallyEqual(*a, *b, renaming);
}

}  // namespace

bool StructurallyEqual(const Expr& a, const Expr& b,
                       std::map<std::string, std::string>* renaming) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Const& x) {
            const auto& y = std::get<Const>(b.node);
            return x.value == y.value && x.is_unsigned == y.is_unsigned;
          },
          [&](const VarRef& x) {
            return SameName(x.name, std::get<VarRef>(b.node).name, renaming);
          },
          [&](const Index& x) {
            const auto& y = std::get<Index>(b.node);
            return SameName(x.array, y.array, renaming) &&
                   EqualPtr(x.index, y.index, renaming);
          },
          [&](const Field& x) {
            const auto& y = std::get<Field>(b.node);
            return EqualPtr(x.base, y.base, renaming) &&
                   SameName(x.field, y.field, renaming);
          },
          [&](const Unary& x) {
            const auto& y = std::get<Unary>(b.node);
            return x.op == y.op && EqualPtr(x.operand, y.operand, renaming);
          },
          [&](const Binary& x) {
            const auto& y = std::get<Binary>(b.node);
            return x.op == y.op && EqualPtr(x.lhs, y.lhs, renaming) &&
                   EqualPtr(x.rhs, y.rhs, renaming);
          },
          [&](const Cond& x) {
            const auto& y = std::get<Cond>(b.node);
            return EqualPtr(x.cond, y.cond, renaming) &&
                   EqualPtr(x.then, y.then, renaming) &&
                   EqualPtr(x.otherwise, y.otherwise, renaming);
          },
          [&](const Nd&) { return true; },
          [&](const NdRange& x) {
            const auto& y = std::get<NdRange>(b.node);
            return x.lo == y.lo && x.hi == y.hi;
          },
      },
      a.node);
}

bool StructurallyEqual(const Stmt& a, const Stmt& b,
                       std::map<std::string, std::string>* renaming) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Assign& x) {
            const auto& y = std::get<Assign>(b.node);
            return EqualPtr(x.target, y.target, renaming) &&
                   EqualPtr(x.value, y.value, renaming);
          },
          [&](const CondAssign& x) {
            const auto& y = std::get<CondAssign>(b.node);
            return EqualPtr(x.cond, y.cond, renaming) &&
                   EqualPtr(x.target, y.target, renaming) &&
                   EqualPtr(x.value, y.value, renaming) &&
                   EqualPtr(x.otherwise, y.otherwise, renaming);
          },
          [&](const If& x) {
            const auto& y = std::get<If>(b.node);
            return EqualPtr(x.cond, y.cond, renaming) &&
                   EqualPtr(x.then, y.then, renaming) &&
                   EqualPtr(x.otherwise, y.otherwise, renaming);
          },
          [&](const For& x) {
            const auto& y = std::get<For>(b.node);
            return SameName(x.iterator, y.iterator, renaming) &&
                   EqualPtr(x.init, y.init, renaming) &&
                   EqualPtr(x.test, y.test, renaming) &&
                   EqualPtr(x.step, y.step, renaming) &&
                   EqualPtr(x.body, y.body, renaming);
          },
          [&](const Block& x) {
            const auto& y = std::get<Block>(b.node);
            if (x.stmts.size() != y.stmts.size()) return false;
            for (size_t i = 0; i < x.stmts.size(); ++i) {
              if (!EqualPtr(x.stmts[i], y.stmts[i], renaming)) return false;
            }
            return true;
          },
          [&](const Assert& x) {
            return EqualPtr(x.cond, std::get<Assert>(b.node).cond, renaming);
          },
      },
      a.node);
}

bool StructurallyEqual(const Program& a, const Program& b,
                       std::map<std::string, std::string>* renaming) {
  if (a.structs.size() != b.structs.size()) return false;
  for (size_t i = 0; i < a.structs.size(); ++i) {
    const StructDef& x = a.structs[i];
    const StructDef& y = b.structs[i];
    if (!SameName(x.name, y.name, renaming)) return false;
    if (x.fields.size() != y.fields.size()) return false;
    for (size_t f = 0; f < x.fields.size(); ++f) {
      if (x.fields[f].type != y.fields[f].type ||
          !SameName(x.fields[f].name, y.fields[f].name, renaming)) {
        return false;
      }
    }
  }
  if (a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i) {
    const VarDecl& x = a.decls[i];
    const VarDecl& y = b.decls[i];
    if (!SameName(x.name, y.name, renaming)) return false;
    if (x.size != y.size || x.record.has_value() != y.record.has_value()) {
      return false;
    }
    if (x.record) {
      if (!SameName(*x.record, *y.record, renaming)) return false;
    } else if (x.scalar != y.scalar) {
      return false;
    }
  }
  return EqualPtr(a.body, b.body, renaming);
}

}  // namespace arrayfree
