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

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>

#include "arrayfree/analysis.h"

namespace arrayfree {

std::vector<ArrayInfo> ArrayInventory(const Program& program) {
  std::vector<ArrayInfo> arrays;
  for (const VarDecl& decl : program.decls) {
    if (!decl.is_array()) continue;
    arrays.push_back({decl.name, *decl.size, decl.record, decl.scalar,
                      decl.span});
  }
  return arrays;
}

std::int64_t LastOf(const ArrayInfo& array) {
  return static_cast<std::int64_t>(array.size) - 1;
}

std::set<std::string> ReadVariables(const Expr& expr) {
  std::set<std::string> names;
  std::visit(Overloaded{
                 [&](const VarRef& n) { names.insert(n.name); },
                 [&](const Index& n) {
                   names.insert(n.array);
                   names.merge(ReadVariables(*n.index));
                 },
                 [&](const Field& n) { names.merge(ReadVariables(*n.base)); },
                 [&](const Unary& n) { names.merge(ReadVariables(*n.operand)); },
                 [&](const Binary& n) {
                   names.merge(ReadVariables(*n.lhs));
                   names.merge(ReadVariables(*n.rhs));
                 },
                 [&](const Cond& n) {
                   names.merge(ReadVariables(*n.cond));
                   names.merge(ReadVariables(*n.then));
                   names.merge(ReadVariables(*n.otherwise));
                 },
                 [](const auto&) {},
             },
             expr.node);
  return names;
}

namespace {

// Variables read while evaluating an assignment target (index expressions).
std::set<std::string> TargetReads(const Expr& target) {
  if (const auto* idx = std::get_if<Index>(&target.node)) {
    return ReadVariables(*idx->index);
  }
  if (const auto* field = std::get_if<Field>(&target.node)) {
    return TargetReads(*field->base);
  }
  return {};
}

// `a` for targets `a[e]` and `a[e].f`, empty otherwise.
const Index* ArrayTarget(const Expr& target) {
  if (const auto* idx = std::get_if<Index>(&target.node)) return idx;
  if (const auto* field = std::get_if<Field>(&target.node)) {
    return ArrayTarget(*field->base);
  }
  return nullptr;
}

void Union(std::set<std::string>* into, const std::set<std::string>& from) {
  into->insert(from.begin(), from.end());
}

}  // namespace

Liveness::Liveness(const Program& program) {
  if (program.body != nullptr) LiveIn(*program.body, {});
}

const std::set<std::string>& Liveness::BodyEntry(const Stmt& loop) const {
  static const std::set<std::string> kEmpty;
  auto it = body_entry_.find(&loop);
  return it == body_entry_.end() ? kEmpty : it->second;
}

const std::set<std::string>& Liveness::Exit(const Stmt& loop) const {
  static const std::set<std::string> kEmpty;
  auto it = exit_.find(&loop);
  return it == exit_.end() ? kEmpty : it->second;
}

std::set<std::string> Liveness::LiveIn(const Stmt& stmt,
                                       std::set<std::string> out) {
  return std::visit(
      Overloaded{
          [&](const Assign& n) {
            if (const auto* var = std::get_if<VarRef>(&n.target->node)) {
              out.erase(var->name);
            }
            Union(&out, TargetReads(*n.target));
            Union(&out, ReadVariables(*n.value));
            return out;
          },
          [&](const CondAssign& n) {
            Union(&out, ReadVariables(*n.cond));
            Union(&out, TargetReads(*n.target));
            Union(&out, ReadVariables(*n.value));
            Union(&out, ReadVariables(*n.otherwise));
            return out;
          },
          [&](const If& n) {
            std::set<std::string> in = LiveIn(*n.then, out);
            Union(&in, n.otherwise != nullptr ? LiveIn(*n.otherwise, out)
                                              : out);
            Union(&in, ReadVariables(*n.cond));
            return in;
          },
          [&](const For& n) {
            std::set<std::string> head = out;
            Union(&head, ReadVariables(*n.test));
            std::set<std::string> entry;
            while (true) {
              std::set<std::string> before_step = head;
              before_step.erase(n.iterator);
              Union(&before_step, ReadVariables(*n.step));
              entry = LiveIn(*n.body, before_step);
              std::set<std::string> next = out;
              Union(&next, ReadVariables(*n.test));
              Union(&next, entry);
              if (next == head) break;
              head = std::move(next);
            }
            body_entry_[&stmt] = entry;
            exit_[&stmt] = out;
            std::set<std::string> in = head;
            in.erase(n.iterator);
            Union(&in, ReadVariables(*n.init));
            return in;
          },
          [&](const Block& n) {
            for (auto it = n.stmts.rbegin(); it != n.stmts.rend(); ++it) {
              out = LiveIn(**it, std::move(out));
            }
            return out;
          },
          [&](const Assert& n) {
            Union(&out, ReadVariables(*n.cond));
            return out;
          },
      },
      stmt.node);
}

bool BodyAssignsIterator(const For& loop) {
  bool assigned = false;
  ForEachStmt(loop.body, [&](const StmtPtr& s) {
    if (const auto* a = std::get_if<Assign>(&s->node)) {
      assigned |= IsVarNamed(*a->target, loop.iterator);
    } else if (const auto* c = std::get_if<CondAssign>(&s->node)) {
      assigned |= IsVarNamed(*c->target, loop.iterator);
    } else if (const auto* f = std::get_if<For>(&s->node)) {
      assigned |= f->iterator == loop.iterator;
    }
  });
  return assigned;
}

std::set<std::string> WrittenArrays(const Stmt& stmt) {
  std::set<std::string> arrays;
  auto visit = [&](const StmtPtr& s) {
    const Expr* target = nullptr;
    if (const auto* a = std::get_if<Assign>(&s->node)) target = a->target.get();
    if (const auto* c = std::get_if<CondAssign>(&s->node)) {
      target = c->target.get();
    }
    if (target == nullptr) return;
    if (const Index* idx = ArrayTarget(*target)) arrays.insert(idx->array);
  };
  // ForEachStmt takes a StmtPtr; wrap without taking ownership.
  StmtPtr root(std::shared_ptr<const Stmt>(), &stmt);
  ForEachStmt(root, visit);
  return arrays;
}

namespace {

std::optional<std::int64_t> SignedLiteral(const Expr& e) {
  if (const auto* c = std::get_if<Const>(&e.node)) {
    return static_cast<std::int64_t>(c->value);
  }
  if (const auto* u = std::get_if<Unary>(&e.node)) {
    if (u->op != UnaryOp::kNeg) return std::nullopt;
    if (const auto* c = std::get_if<Const>(&u->operand->node)) {
      if (c->is_unsigned) return std::nullopt;
      return -static_cast<std::int64_t>(c->value);
    }
  }
  return std::nullopt;
}

bool IsLiteral(const Expr& e, std::uint64_t value) {
  const auto* c = std::get_if<Const>(&e.node);
  return c != nullptr && c->value == value;
}

// Step expression `i + k` / `i - k` as a signed increment.
std::optional<std::int64_t> StepIncrement(const For& loop) {
  const auto* bin = std::get_if<Binary>(&loop.step->node);
  if (bin == nullptr || !IsVarNamed(*bin->lhs, loop.iterator)) {
    return std::nullopt;
  }
  std::optional<std::int64_t> k = SignedLiteral(*bin->rhs);
  if (!k) return std::nullopt;
  if (bin->op == BinaryOp::kAdd) return *k;
  if (bin->op == BinaryOp::kSub) return -*k;
  return std::nullopt;
}

// Normalizes the test to `i OP c`.
std::optional<std::pair<BinaryOp, std::int64_t>> IteratorTest(
    const For& loop) {
  const auto* bin = std::get_if<Binary>(&loop.test->node);
  if (bin == nullptr) return std::nullopt;
  if (IsVarNamed(*bin->lhs, loop.iterator)) {
    if (auto c = SignedLiteral(*bin->rhs)) return std::pair(bin->op, *c);
    return std::nullopt;
  }
  if (IsVarNamed(*bin->rhs, loop.iterator)) {
    auto c = SignedLiteral(*bin->lhs);
    if (!c) return std::nullopt;
    switch (bin->op) {
      case BinaryOp::kLt: return std::pair(BinaryOp::kGt, *c);
      case BinaryOp::kLe: return std::pair(BinaryOp::kGe, *c);
      case BinaryOp::kGt: return std::pair(BinaryOp::kLt, *c);
      case BinaryOp::kGe: return std::pair(BinaryOp::kLe, *c);
      case BinaryOp::kNe: return std::pair(BinaryOp::kNe, *c);
      default: return std::nullopt;
    }
  }
  return std::nullopt;
}

// Values the iterator takes inside the body, when the header alone decides
// them and at least one iteration runs.
std::optional<std::pair<std::int64_t, std::int64_t>> StaticRange(
    const For& loop) {
  if (BodyAssignsIterator(loop)) return std::nullopt;
  std::optional<std::int64_t> init = SignedLiteral(*loop.init);
  std::optional<std::int64_t> k = StepIncrement(loop);
  auto test = IteratorTest(loop);
  if (!init || !k || !test || *k == 0) return std::nullopt;
  auto [op, c] = *test;
  // Keep to values every iterator type represents exactly.
  constexpr std::int64_t kSmall = std::numeric_limits<std::int32_t>::max();
  if (*init < 0 || c < 0 || *init > kSmall || c > kSmall) return std::nullopt;
  std::int64_t lo, hi;
  if (*k > 0) {
    std::int64_t last;
    if (op == BinaryOp::kLt || op == BinaryOp::kNe) {
      last = c - 1;
    } else if (op == BinaryOp::kLe) {
      last = c;
    } else {
      return std::nullopt;
    }
    if (op == BinaryOp::kNe && (*k != 1 || *init > c)) return std::nullopt;
    if (last < *init) return std::nullopt;
    lo = *init;
    hi = *init + ((last - *init) / *k) * *k;
  } else {
    std::int64_t first;
    if (op == BinaryOp::kGt || op == BinaryOp::kNe) {
      first = c + 1;
    } else if (op == BinaryOp::kGe) {
      first = c;
    } else {
      return std::nullopt;
    }
    if (op == BinaryOp::kNe && (*k != -1 || *init < c)) return std::nullopt;
    if (first > *init) return std::nullopt;
    hi = *init;
    lo = *init - ((*init - first) / -*k) * -*k;
  }
  return std::pair(lo, hi);
}

bool AccessesOnlyThroughIterator(const For& loop, const std::string& array,
                                 bool* any) {
  bool only = true;
  ForEachStmt(loop.body, [&](const StmtPtr& s) {
    ForEachOwnExpr(*s, [&](const ExprPtr& root) {
      ForEachSubexpr(root, [&](const ExprPtr& e) {
        const auto* idx = std::get_if<Index>(&e->node);
        if (idx == nullptr || idx->array != array) return;
        *any = true;
        only &= IsVarNamed(*idx->index, loop.iterator);
      });
    });
  });
  return only;
}

struct ScalarWrites {
  bool all_literal = true;
};

// Scalars (and record variables) assigned in `body`, with whether every
// assignment is a single literal.
std::map<std::string, ScalarWrites> AssignedScalars(const StmtPtr& body) {
  std::map<std::string, ScalarWrites> writes;
  ForEachStmt(body, [&](const StmtPtr& s) {
    const Expr* target = nullptr;
    const Expr* value = nullptr;
    if (const auto* a = std::get_if<Assign>(&s->node)) {
      target = a->target.get();
      value = a->value.get();
    } else if (const auto* c = std::get_if<CondAssign>(&s->node)) {
      target = c->target.get();
    } else if (const auto* f = std::get_if<For>(&s->node)) {
      // The header's increment is never a literal.
      writes[f->iterator].all_literal = false;
      return;
    }
    if (target == nullptr || ArrayTarget(*target) != nullptr) return;
    ScalarWrites& w = writes[LvalueRoot(*target)];
    w.all_literal &= value != nullptr &&
                     std::holds_alternative<Const>(value->node) &&
                     std::holds_alternative<VarRef>(target->node);
  });
  return writes;
}

ModSet ComputeDefs(const Stmt& stmt, const Liveness& liveness,
                   std::set<std::string>* constant_only) {
  const auto* loop = std::get_if<For>(&stmt.node);
  if (loop == nullptr) throw std::invalid_argument("LoopDefs: not a loop");
  ModSet defs;
  const std::set<std::string>& entry = liveness.BodyEntry(stmt);
  const std::set<std::string>& exit = liveness.Exit(stmt);
  for (const auto& [name, w] : AssignedScalars(loop->body)) {
    if (name == loop->iterator) continue;
    if (w.all_literal && entry.count(name) == 0 && exit.count(name) == 0) {
      if (constant_only != nullptr) constant_only->insert(name);
      continue;
    }
    defs.scalars.insert(name);
  }
  bool iterator_assigned = BodyAssignsIterator(*loop);
  ForEachStmt(loop->body, [&](const StmtPtr& s) {
    const Expr* target = nullptr;
    if (const auto* a = std::get_if<Assign>(&s->node)) target = a->target.get();
    if (const auto* c = std::get_if<CondAssign>(&s->node)) {
      target = c->target.get();
    }
    if (target == nullptr) return;
    const Index* idx = ArrayTarget(*target);
    if (idx == nullptr) return;
    if (iterator_assigned || !IsVarNamed(*idx->index, loop->iterator)) {
      defs.arrays.insert(idx->array);
    }
  });
  return defs;
}

}  // namespace

bool FullArrayAccess(const Stmt& stmt, const ArrayInfo& array) {
  const auto* loop = std::get_if<For>(&stmt.node);
  if (loop == nullptr) return false;
  if (!IsLiteral(*loop->init, 0)) return false;
  const auto* test = std::get_if<Binary>(&loop->test->node);
  if (test == nullptr || !IsVarNamed(*test->lhs, loop->iterator)) return false;
  bool bound_ok =
      (test->op == BinaryOp::kLt && IsLiteral(*test->rhs, array.size)) ||
      (test->op == BinaryOp::kLe && IsLiteral(*test->rhs, array.size - 1));
  if (!bound_ok) return false;
  std::optional<std::int64_t> k = StepIncrement(*loop);
  const auto* step = std::get_if<Binary>(&loop->step->node);
  if (!k || *k != 1 || step->op != BinaryOp::kAdd) return false;
  if (BodyAssignsIterator(*loop)) return false;
  bool any = false;
  return AccessesOnlyThroughIterator(*loop, array.name, &any) && any;
}

ModSet LoopDefs(const Stmt& loop, const Liveness& liveness) {
  return ComputeDefs(loop, liveness, nullptr);
}

ModSet LoopDefs(const Program& program, const Stmt& loop) {
  return LoopDefs(loop, Liveness(program));
}

std::pair<std::int64_t, std::int64_t> LoopBound(const LoopFacts& facts,
                                                ScalarType iterator_type,
                                                int width) {
  if (facts.lower && facts.upper) return {*facts.lower, *facts.upper};
  if (iterator_type == ScalarType::kUnsigned) {
    std::int64_t max = width >= 63 ? std::numeric_limits<std::int64_t>::max()
                                   : (std::int64_t{1} << width) - 1;
    return {0, max};
  }
  if (width >= 64) {
    return {std::numeric_limits<std::int64_t>::min(),
            std::numeric_limits<std::int64_t>::max()};
  }
  std::int64_t half = std::int64_t{1} << (width - 1);
  return {-half, half - 1};
}

ProgramFacts::ProgramFacts(const Program& program)
    : arrays_(ArrayInventory(program)), liveness_(program) {
  std::function<void(const StmtPtr&, int)> walk = [&](const StmtPtr& s,
                                                      int depth) {
    if (s == nullptr) return;
    std::visit(
        Overloaded{
            [&](const If& n) {
              walk(n.then, depth);
              walk(n.otherwise, depth);
            },
            [&](const Block& n) {
              for (const StmtPtr& c : n.stmts) walk(c, depth);
            },
            [&](const For& n) {
              LoopFacts f;
              f.loop = s.get();
              f.span = s->span;
              f.iterator = n.iterator;
              f.depth = depth;
              if (auto range = StaticRange(n)) {
                f.lower = range->first;
                f.upper = range->second;
              }
              for (const ArrayInfo& a : arrays_) {
                bool full = FullArrayAccess(*s, a);
                f.full_access[a.name] = full;
                if (full && !f.bound_array) f.bound_array = a.name;
              }
              f.defs = ComputeDefs(*s, liveness_, &f.constant_only);
              f.havoc = f.defs;
              std::set<std::string> written = WrittenArrays(*n.body);
              // The witness follows at most one array per loop iteration:
              // the bound array for a full traversal, otherwise the first
              // array written through the iterator.
              std::optional<std::string> tracked = f.bound_array;
              for (const ArrayInfo& a : arrays_) {
                if (!written.count(a.name) || f.defs.arrays.count(a.name)) {
                  continue;
                }
                if (!tracked) {
                  tracked = a.name;
                } else if (*tracked != a.name) {
                  f.havoc.arrays.insert(a.name);
                }
              }
              f.live_body_entry = liveness_.BodyEntry(*s);
              f.live_exit = liveness_.Exit(*s);
              f.iterator_escapes = f.live_exit.count(n.iterator) > 0;
              index_[s.get()] = loops_.size();
              loops_.push_back(std::move(f));
              walk(n.body, depth + 1);
            },
            [](const auto&) {},
        },
        s->node);
  };
  walk(program.body, 0);
}

const LoopFacts& ProgramFacts::ForLoop(const Stmt& loop) const {
  auto it = index_.find(&loop);
  if (it == index_.end()) {
    throw std::out_of_range("ProgramFacts: statement is not a known loop");
  }
  return loops_[it->second];
}

const ArrayInfo* ProgramFacts::FindArray(const std::string& name) const {
  for (const ArrayInfo& a : arrays_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

}  // namespace arrayfree
