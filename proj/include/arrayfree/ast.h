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

// Abstract syntax for the C subset handled by the toolkit.
//
// The same tree describes both input programs (loops, array subscripts) and
// transformed programs (nondeterministic choices, conditional expressions and
// conditional assignments). Nodes are immutable and shared through
// `std::shared_ptr<const ...>`, so rewriting a program reuses every subtree it
// does not change and node addresses are stable keys for analysis results.

#ifndef ARRAYFREE_AST_H_
#define ARRAYFREE_AST_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace arrayfree {

struct SourceSpan {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ScalarType { kInt, kUnsigned };

enum class BinaryOp {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kMod,
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNe,
  kAnd,
  kOr,
};

enum class UnaryOp { kNeg, kNot };

const char* BinaryOpSpelling(BinaryOp op);
const char* UnaryOpSpelling(UnaryOp op);

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

// Integer literal. `is_unsigned` follows C: a `u` suffix or a value that does
// not fit in a signed int.
struct Const {
  std::uint64_t value = 0;
  bool is_unsigned = false;
};

struct VarRef {
  std::string name;
};

// `array[index]`.
struct Index {
  std::string array;
  ExprPtr index;
};

// `base.field`; base is a VarRef of record type or an Index into an array of
// records.
struct Field {
  ExprPtr base;
  std::string field;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

// `cond ? then : otherwise`. Only produced by the transformation.
struct Cond {
  ExprPtr cond;
  ExprPtr then;
  ExprPtr otherwise;
};

// `nd()`: an unconstrained value of the surrounding type. `origin` names the
// location whose value the choice stands for ("k", "a", "a.p"); it is not
// printed and only narrows the oracle's finite enumeration domain.
struct Nd {
  std::string origin;
};

// `nd(lo, hi)`: a value in the closed range [lo, hi].
struct NdRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct Expr {
  using Node =
      std::variant<Const, VarRef, Index, Field, Unary, Binary, Cond, Nd, NdRange>;

  SourceSpan span;
  Node node;
};

// `target = value;` where target is an lvalue expression.
struct Assign {
  ExprPtr target;
  ExprPtr value;
};

// `(cond) ? target = value : otherwise;`. Only produced by the
// transformation (array writes).
struct CondAssign {
  ExprPtr cond;
  ExprPtr target;
  ExprPtr value;
  ExprPtr otherwise;
};

// `if (cond) then [else otherwise]`; otherwise is null without an else.
struct If {
  ExprPtr cond;
  StmtPtr then;
  StmtPtr otherwise;
};

// `for (iterator = init; test; step) body`. `step` is the iterator's next
// value: `i++` is stored as `i + 1`.
struct For {
  std::string iterator;
  ExprPtr init;
  ExprPtr test;
  ExprPtr step;
  StmtPtr body;
};

struct Block {
  std::vector<StmtPtr> stmts;
};

// `assert(cond);`. `id` is the assertion's ordinal in program order; the
// transformation preserves it so assertions can be matched across programs.
struct Assert {
  ExprPtr cond;
  int id = 0;
};

struct Stmt {
  using Node = std::variant<Assign, CondAssign, If, For, Block, Assert>;

  SourceSpan span;
  Node node;
};

struct StructField {
  std::string name;
  ScalarType type = ScalarType::kInt;

  friend bool operator==(const StructField&, const StructField&) = default;
};

struct StructDef {
  std::string name;
  std::vector<StructField> fields;
  SourceSpan span;
};

// A global variable: scalar, record, array of scalars or array of records.
struct VarDecl {
  std::string name;
  ScalarType scalar = ScalarType::kInt;  // element type when not a record
  std::optional<std::string> record;     // struct name
  std::optional<std::uint64_t> size;     // set for arrays
  SourceSpan span;

  bool is_array() const { return size.has_value(); }
  bool is_record() const { return record.has_value(); }
};

struct Program {
  std::vector<StructDef> structs;
  std::vector<VarDecl> decls;
  StmtPtr body;  // always a Block

  const VarDecl* FindDecl(const std::string& name) const;
  const StructDef* FindStruct(const std::string& name) const;
  // Type of `decl.field`, or nullopt when the field does not exist.
  std::optional<ScalarType> FieldType(const VarDecl& decl,
                                      const std::string& field) const;
};

// Node construction helpers.
ExprPtr MakeConst(std::uint64_t value, bool is_unsigned = false,
                  SourceSpan span = {});
ExprPtr MakeVar(std::string name, SourceSpan span = {});
ExprPtr MakeIndex(std::string array, ExprPtr index, SourceSpan span = {});
ExprPtr MakeField(ExprPtr base, std::string field, SourceSpan span = {});
ExprPtr MakeUnary(UnaryOp op, ExprPtr operand, SourceSpan span = {});
ExprPtr MakeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr MakeCond(ExprPtr cond, ExprPtr then, ExprPtr otherwise,
                 SourceSpan span = {});
ExprPtr MakeNd(std::string origin = {}, SourceSpan span = {});
ExprPtr MakeNdRange(std::int64_t lo, std::int64_t hi, SourceSpan span = {});

StmtPtr MakeAssign(ExprPtr target, ExprPtr value, SourceSpan span = {});
StmtPtr MakeCondAssign(ExprPtr cond, ExprPtr target, ExprPtr value,
                       ExprPtr otherwise, SourceSpan span = {});
StmtPtr MakeIf(ExprPtr cond, StmtPtr then, StmtPtr otherwise = nullptr,
               SourceSpan span = {});
StmtPtr MakeFor(std::string iterator, ExprPtr init, ExprPtr test, ExprPtr step,
                StmtPtr body, SourceSpan span = {});
StmtPtr MakeBlock(std::vector<StmtPtr> stmts, SourceSpan span = {});
StmtPtr MakeAssert(ExprPtr cond, int id, SourceSpan span = {});

// Name of the variable at the root of an lvalue (`a` for `a[i].p`).
std::string LvalueRoot(const Expr& lvalue);
bool IsLvalue(const Expr& expr);

// True when `expr` is exactly a read of variable `name`.
bool IsVarNamed(const Expr& expr, const std::string& name);

// Structural equality ignoring spans and nd origins. With `renaming`
// non-null, identifiers may differ as long as they correspond through a
// consistent bijection, which is recorded into the map (left -> right).
bool StructurallyEqual(const Expr& a, const Expr& b,
                       std::map<std::string, std::string>* renaming = nullptr);
bool StructurallyEqual(const Stmt& a, const Stmt& b,
                       std::map<std::string, std::string>* renaming = nullptr);
bool StructurallyEqual(const Program& a, const Program& b,
                       std::map<std::string, std::string>* renaming = nullptr);

// Visits every expression node below `expr` (pre-order, including `expr`).
template <typename Fn>
void ForEachSubexpr(const ExprPtr& expr, Fn&& fn);

// Visits every statement below `stmt` (pre-order, including `stmt`).
template <typename Fn>
void ForEachStmt(const StmtPtr& stmt, Fn&& fn);

// Visits every expression directly owned by `stmt` (not its child statements).
template <typename Fn>
void ForEachOwnExpr(const Stmt& stmt, Fn&& fn);

// ---------------------------------------------------------------------------

template <typename... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <typename Fn>
void ForEachSubexpr(const ExprPtr& expr, Fn&& fn) {
  if (expr == nullptr) return;
  fn(expr);
  std::visit(Overloaded{
                 [&](const Index& n) { ForEachSubexpr(n.index, fn); },
                 [&](const Field& n) { ForEachSubexpr(n.base, fn); },
                 [&](const Unary& n) { ForEachSubexpr(n.operand, fn); },
                 [&](const Binary& n) {
                   ForEachSubexpr(n.lhs, fn);
                   ForEachSubexpr(n.rhs, fn);
                 },
                 [&](const Cond& n) {
                   ForEachSubexpr(n.cond, fn);
                   ForEachSubexpr(n.then, fn);
                   ForEachSubexpr(n.otherwise, fn);
                 },
                 [](const auto&) {},
             },
             expr->node);
}

template <typename Fn>
void ForEachStmt(const StmtPtr& stmt, Fn&& fn) {
  if (stmt == nullptr) return;
  fn(stmt);
  std::visit(Overloaded{
                 [&](const If& n) {
                   ForEachStmt(n.then, fn);
                   ForEachStmt(n.otherwise, fn);
                 },
                 [&](const For& n) { ForEachStmt(n.body, fn); },
                 [&](const Block& n) {
                   for (const StmtPtr& s : n.stmts) ForEachStmt(s, fn);
                 },
                 [](const auto&) {},
             },
             stmt->node);
}

template <typename Fn>
void ForEachOwnExpr(const Stmt& stmt, Fn&& fn) {
  std::visit(Overloaded{
                 [&](const Assign& n) {
                   fn(n.target);
                   fn(n.value);
                 },
                 [&](const CondAssign& n) {
                   fn(n.cond);
                   fn(n.target);
                   fn(n.value);
                   fn(n.otherwise);
                 },
                 [&](const If& n) { fn(n.cond); },
                 [&](const For& n) {
                   fn(n.init);
                   fn(n.test);
                   fn(n.step);
                 },
                 [&](const Assert& n) { fn(n.cond); },
                 [](const Block&) {},
             },
             stmt.node);
}

}  // namespace arrayfree

#endif  // ARRAYFREE_AST_H_
