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

#include <string>

#include "absl/strings/str_cat.h"
#include "arrayfree/frontend.h"

namespace arrayfree {
namespace {

// Binding strength; higher binds tighter.
int Precedence(const Expr& e) {
  return std::visit(Overloaded{
                        [](const Cond&) { return 1; },
                        [](const Binary& b) {
                          switch (b.op) {
                            case BinaryOp::kOr: return 2;
                            case BinaryOp::kAnd: return 3;
                            case BinaryOp::kEq:
                            case BinaryOp::kNe: return 4;
                            case BinaryOp::kLt:
                            case BinaryOp::kLe:
                            case BinaryOp::kGt:
                            case BinaryOp::kGe: return 5;
                            case BinaryOp::kAdd:
                            case BinaryOp::kSub: return 6;
                            default: return 7;
                          }
                        },
                        [](const Unary&) { return 8; },
                        [](const auto&) { return 10; },
                    },
                    e.node);
}

class Printer {
 public:
  explicit Printer(const EmitOptions& options) : options_(options) {}

  std::string Expression(const Expr& e, int min_prec = 0) {
    std::string text = Raw(e);
    return Precedence(e) < min_prec ? absl::StrCat("(", text, ")") : text;
  }

  void Statement(const Stmt& s, int depth, std::string* out) {
    std::string pad(2 * depth, ' ');
    std::visit(
        Overloaded{
            [&](const Assign& n) {
              absl::StrAppend(out, pad, Expression(*n.target), " = ",
                              Expression(*n.value, 1), ";\n");
            },
            [&](const CondAssign& n) {
              absl::StrAppend(out, pad, "(", Expression(*n.cond), ") ? ",
                              Expression(*n.target), " = ",
                              Expression(*n.value, 1), " : ",
                              Expression(*n.otherwise, 2), ";\n");
            },
            [&](const If& n) {
              absl::StrAppend(out, pad, "if (", Expression(*n.cond), ") ");
              Braced(*n.then, depth, out);
              if (n.otherwise != nullptr) {
                out->pop_back();
                absl::StrAppend(out, " else ");
                Braced(*n.otherwise, depth, out);
              }
            },
            [&](const For& n) {
              absl::StrAppend(out, pad, "for (", n.iterator, " = ",
                              Expression(*n.init, 1), "; ",
                              Expression(*n.test, 1), "; ",
                              Step(n.iterator, *n.step), ") ");
              Braced(*n.body, depth, out);
            },
            [&](const Block& n) {
              absl::StrAppend(out, pad);
              Braced(s, depth, out);
            },
            [&](const Assert& n) {
              absl::StrAppend(out, pad, "assert(", Expression(*n.cond),
                              ");\n");
            },
        },
        s.node);
  }

  // Prints a statement as a `{ ... }` block starting at the current column.
  void Braced(const Stmt& s, int depth, std::string* out) {
    out->append("{\n");
    if (const auto* block = std::get_if<Block>(&s.node)) {
      for (const StmtPtr& child : block->stmts) {
        Statement(*child, depth + 1, out);
      }
    } else {
      Statement(s, depth + 1, out);
    }
    absl::StrAppend(out, std::string(2 * depth, ' '), "}\n");
  }

 private:
  std::string Raw(const Expr& e) {
    return std::visit(
        Overloaded{
            [&](const Const& n) {
              return absl::StrCat(n.value, n.is_unsigned ? "u" : "");
            },
            [&](const VarRef& n) { return n.name; },
            [&](const Index& n) {
              return absl::StrCat(n.array, "[", Expression(*n.index), "]");
            },
            [&](const Field& n) {
              return absl::StrCat(Expression(*n.base, 9), ".", n.field);
            },
            [&](const Unary& n) {
              return absl::StrCat(UnaryOpSpelling(n.op),
                                  Expression(*n.operand, 9));
            },
            [&](const Binary& n) {
              int p = Precedence(e);
              return absl::StrCat(Expression(*n.lhs, p), " ",
                                  BinaryOpSpelling(n.op), " ",
                                  Expression(*n.rhs, p + 1));
            },
            [&](const Cond& n) {
              return absl::StrCat("(", Expression(*n.cond), ") ? ",
                                  Expression(*n.then, 2), " : ",
                                  Expression(*n.otherwise, 1));
            },
            [&](const Nd&) { return absl::StrCat(options_.nd.unbounded, "()"); },
            [&](const NdRange& n) {
              return absl::StrCat(options_.nd.ranged, "(", n.lo, ", ", n.hi,
                                  ")");
            },
        },
        e.node);
  }

  std::string Step(const std::string& iterator, const Expr& step) {
    if (const auto* bin = std::get_if<Binary>(&step.node)) {
      const auto* one = std::get_if<Const>(&bin->rhs->node);
      if (IsVarNamed(*bin->lhs, iterator) && one != nullptr &&
          one->value == 1 && !one->is_unsigned) {
        if (bin->op == BinaryOp::kAdd) return iterator + "++";
        if (bin->op == BinaryOp::kSub) return iterator + "--";
      }
    }
    return absl::StrCat(iterator, " = ", Expression(step, 1));
  }

  const EmitOptions& options_;
};

const char* ScalarTypeName(ScalarType t) {
  return t == ScalarType::kUnsigned ? "unsigned int" : "int";
}

}  // namespace

std::string Emit(const Program& program, const EmitOptions& options) {
  std::string out = options.prelude;
  for (const StructDef& def : program.structs) {
    absl::StrAppend(&out, "struct ", def.name, " {\n");
    for (const StructField& f : def.fields) {
      absl::StrAppend(&out, "  ", ScalarTypeName(f.type), " ", f.name, ";\n");
    }
    out.append("};\n");
  }
  for (const VarDecl& decl : program.decls) {
    if (decl.record) {
      absl::StrAppend(&out, "struct ", *decl.record, " ", decl.name);
    } else {
      absl::StrAppend(&out, ScalarTypeName(decl.scalar), " ", decl.name);
    }
    if (decl.size) absl::StrAppend(&out, "[", *decl.size, "]");
    out.append(";\n");
  }
  out.append("\nint main()\n");
  Printer printer(options);
  if (program.body != nullptr) {
    printer.Braced(*program.body, 0, &out);
  } else {
    out.append("{\n}\n");
  }
  return out;
}

std::string EmitExpr(const Expr& expr, const EmitOptions& options) {
  return Printer(options).Expression(expr);
}

std::string EmitStmt(const Stmt& stmt, const EmitOptions& options) {
  std::string out;
  Printer(options).Statement(stmt, 0, &out);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

int ConformanceReport::Count(ViolationKind kind) const {
  int n = 0;
  for (const Violation& v : violations) n += v.kind == kind;
  return n;
}

ConformanceReport ValidateTransformed(const Program& program) {
  ConformanceReport report;
  auto check_expr = [&](const ExprPtr& root) {
    ForEachSubexpr(root, [&](const ExprPtr& e) {
      if (const auto* idx = std::get_if<Index>(&e->node)) {
        report.violations.push_back(
            {ViolationKind::kArrayAccess, e->span,
             absl::StrCat("array access '", EmitExpr(*e), "'")});
        (void)idx;
      } else if (const auto* range = std::get_if<NdRange>(&e->node)) {
        if (range->lo > range->hi) {
          report.violations.push_back(
              {ViolationKind::kBadNdRange, e->span,
               absl::StrCat("empty range ", EmitExpr(*e))});
        }
      }
    });
  };
  ForEachStmt(program.body, [&](const StmtPtr& s) {
    if (const auto* loop = std::get_if<For>(&s->node)) {
      report.violations.push_back(
          {ViolationKind::kLoop, s->span,
           absl::StrCat("loop over '", loop->iterator, "'")});
    }
    ForEachOwnExpr(*s, check_expr);
  });
  return report;
}

}  // namespace arrayfree
