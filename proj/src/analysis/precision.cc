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

// Precision classification.
//
// For each assertion the classifier grows a flow-insensitive dependence cone:
// the variables and arrays its condition reads, the conditions of the `if`s
// around it, and transitively everything read by any assignment to a
// variable already in the cone. Loops containing such assignments, and the
// loops enclosing the assertion, are the relevant loops; each must be a full
// traversal and must not havoc anything in the cone. A havocked scalar is
// tolerated when both of its havocs are dead: it is overwritten in the body
// before any read and is not read after the loop.

#include <algorithm>
#include <deque>
#include <functional>

#include "absl/strings/str_cat.h"
#include "arrayfree/analysis.h"
#include "arrayfree/frontend.h"

namespace arrayfree {

const char* PrecisionRuleName(PrecisionRule rule) {
  switch (rule) {
    case PrecisionRule::kL1: return "l1";
    case PrecisionRule::kA2: return "a2";
    case PrecisionRule::kA3: return "a3";
    case PrecisionRule::kS4: return "s4";
    case PrecisionRule::kD5: return "d5";
    case PrecisionRule::kD6: return "d6";
  }
  return "?";
}

bool PrecisionReport::AllQualify() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const AssertionPrecision& a) { return a.qualifies; });
}

namespace {

using LoopStack = std::vector<const Stmt*>;

struct Guard {
  ExprPtr cond;
  size_t depth;  // number of enclosing loops at the `if`
};

struct Site {
  const Stmt* stmt = nullptr;
  LoopStack loops;
  std::vector<Guard> guards;
};

struct WriteSite : Site {
  ExprPtr target;
  ExprPtr value;  // null for conditional assignments
};

struct AssertSite : Site {
  const Assert* assert = nullptr;
};

const Index* ArrayTargetOf(const Expr& target) {
  if (const auto* idx = std::get_if<Index>(&target.node)) return idx;
  if (const auto* field = std::get_if<Field>(&target.node)) {
    return ArrayTargetOf(*field->base);
  }
  return nullptr;
}

class Classifier {
 public:
  Classifier(const Program& program, const ProgramFacts& facts)
      : program_(program), facts_(facts) {
    Site root;
    Collect(program.body, &root);
  }

  const std::vector<AssertSite>& asserts() const { return asserts_; }

  AssertionPrecision Classify(const AssertSite& site) {
    AssertionPrecision out;
    out.assert_id = site.assert->id;
    out.span = site.stmt->span;
    out.in_loop = !site.loops.empty();
    for (const Stmt* loop : site.loops) out.enclosing_loops.push_back(loop->span);
    if (!out.in_loop) {
      out.notes.push_back("assertion outside any loop: no precision claim");
      return out;
    }

    state_ = State{};
    enclosing_ = std::set<const Stmt*>(site.loops.begin(), site.loops.end());
    for (const Stmt* loop : site.loops) state_.relevant.insert(loop);
    Enqueue(site.assert->cond, site.loops);
    EnqueueGuards(site);
    Drain();

    auto violate = [&](PrecisionRule rule, std::string note) {
      out.violated.insert(rule);
      out.notes.push_back(absl::StrCat(PrecisionRuleName(rule), ": ", note));
    };
    for (const PendingAccess& access : state_.accesses) {
      if (access.loop == nullptr) {
        violate(PrecisionRule::kA2,
                absl::StrCat("'", access.text, "' read outside any loop"));
      } else {
        violate(enclosing_.count(access.loop) ? PrecisionRule::kA2
                                              : PrecisionRule::kD5,
                absl::StrCat("'", access.text, "' at ", Where(access.loop),
                             " is not indexed by a full traversal's iterator"));
      }
    }
    for (const std::string& note : state_.escaped) {
      violate(PrecisionRule::kS4, note);
    }
    for (const Stmt* loop : Ordered(state_.relevant)) {
      const LoopFacts& f = facts_.ForLoop(*loop);
      bool encloses = enclosing_.count(loop) > 0;
      if (!encloses) out.defining_loops.push_back(loop->span);
      if (!f.full()) {
        violate(PrecisionRule::kL1,
                absl::StrCat("loop at ", Where(loop),
                             " does not fully traverse an array"));
      }
      for (const std::string& x : f.havoc.scalars) {
        if (!state_.scalars.count(x)) continue;
        if (!f.live_body_entry.count(x) && !f.live_exit.count(x)) {
          out.relaxation_applied = true;
          continue;
        }
        violate(encloses ? PrecisionRule::kS4 : PrecisionRule::kD6,
                absl::StrCat("'", x, "' is havocked by the loop at ",
                             Where(loop)));
      }
      for (const std::string& b : f.havoc.arrays) {
        if (!state_.arrays.count(b)) continue;
        violate(PrecisionRule::kA3,
                absl::StrCat("array '", b, "' is havocked by the loop at ",
                             Where(loop)));
      }
    }
    out.dependent_scalars = state_.scalars;
    out.dependent_accesses = state_.access_texts;
    out.qualifies = out.violated.empty();
    return out;
  }

 private:
  struct PendingAccess {
    const Stmt* loop;  // innermost loop, null at top level
    std::string text;
  };

  struct State {
    std::set<std::string> scalars;
    std::set<std::string> arrays;
    std::set<const Stmt*> relevant;
    std::set<const Stmt*> headers;  // iterator definitions already chased
    std::vector<PendingAccess> accesses;
    std::vector<std::string> access_texts;
    std::vector<std::string> escaped;
    std::deque<std::pair<ExprPtr, LoopStack>> work;
  };

  void Collect(const StmtPtr& s, Site* ctx) {
    if (s == nullptr) return;
    std::visit(
        Overloaded{
            [&](const Assign& n) { AddWrite(s, n.target, n.value, *ctx); },
            [&](const CondAssign& n) {
              AddWrite(s, n.target, nullptr, *ctx);
            },
            [&](const If& n) {
              ctx->guards.push_back({n.cond, ctx->loops.size()});
              Collect(n.then, ctx);
              Collect(n.otherwise, ctx);
              ctx->guards.pop_back();
            },
            [&](const For& n) {
              loop_order_[s.get()] = loop_order_.size();
              iterator_loops_[n.iterator].push_back(s.get());
              ctx->loops.push_back(s.get());
              Collect(n.body, ctx);
              ctx->loops.pop_back();
            },
            [&](const Block& n) {
              for (const StmtPtr& c : n.stmts) Collect(c, ctx);
            },
            [&](const Assert& n) {
              AssertSite site;
              static_cast<Site&>(site) = *ctx;
              site.stmt = s.get();
              site.assert = &n;
              asserts_.push_back(std::move(site));
            },
        },
        s->node);
  }

  void AddWrite(const StmtPtr& s, const ExprPtr& target, const ExprPtr& value,
                const Site& ctx) {
    WriteSite w;
    static_cast<Site&>(w) = ctx;
    w.stmt = s.get();
    w.target = target;
    w.value = value;
    const Index* idx = ArrayTargetOf(*target);
    std::string name = idx != nullptr ? idx->array : LvalueRoot(*target);
    writes_[name].push_back(std::move(w));
  }

  void Enqueue(const ExprPtr& e, const LoopStack& loops) {
    if (e != nullptr) state_.work.emplace_back(e, loops);
  }

  void EnqueueGuards(const Site& site) {
    for (const Guard& g : site.guards) {
      Enqueue(g.cond, LoopStack(site.loops.begin(),
                                site.loops.begin() + g.depth));
    }
  }

  void Drain() {
    while (!state_.work.empty()) {
      auto [expr, loops] = state_.work.front();
      state_.work.pop_front();
      ForEachSubexpr(expr, [&](const ExprPtr& e) {
        if (const auto* var = std::get_if<VarRef>(&e->node)) {
          UseVariable(var->name, loops);
        } else if (const auto* idx = std::get_if<Index>(&e->node)) {
          UseArray(*e, *idx, loops);
        }
      });
    }
  }

  void UseVariable(const std::string& name, const LoopStack& loops) {
    // Inside a loop over `name`, the header is the only definition the
    // full-traversal shape allows.
    for (auto it = loops.rbegin(); it != loops.rend(); ++it) {
      const auto& loop = std::get<For>((*it)->node);
      if (loop.iterator != name) continue;
      state_.relevant.insert(*it);
      if (state_.headers.insert(*it).second) {
        LoopStack outer(loops.begin(), (it + 1).base());
        LoopStack inner(loops.begin(), it.base());
        Enqueue(loop.init, outer);
        Enqueue(loop.step, inner);
      }
      return;
    }
    if (!state_.scalars.insert(name).second) return;
    ChaseWrites(name);
    auto loops_over = iterator_loops_.find(name);
    if (loops_over == iterator_loops_.end()) return;
    for (const Stmt* loop : loops_over->second) {
      const LoopFacts& f = facts_.ForLoop(*loop);
      if (!f.iterator_escapes) continue;
      state_.relevant.insert(loop);
      state_.escaped.push_back(absl::StrCat("iterator '", name,
                                            "' of the loop at ", Where(loop),
                                            " is read after the loop"));
    }
  }

  void UseArray(const Expr& e, const Index& idx, const LoopStack& loops) {
    std::string text = EmitExpr(e);
    state_.access_texts.push_back(text);
    bool exact = false;
    if (!loops.empty()) {
      const LoopFacts& f = facts_.ForLoop(*loops.back());
      exact = f.bound_array == idx.array && IsVarNamed(*idx.index, f.iterator);
    }
    if (!exact) {
      state_.accesses.push_back(
          {loops.empty() ? nullptr : loops.back(), std::move(text)});
    }
    if (state_.arrays.insert(idx.array).second) ChaseWrites(idx.array);
  }

  void ChaseWrites(const std::string& name) {
    auto it = writes_.find(name);
    if (it == writes_.end()) return;
    for (const WriteSite& w : it->second) {
      for (const Stmt* loop : w.loops) state_.relevant.insert(loop);
      Enqueue(w.value, w.loops);
      if (const Index* idx = ArrayTargetOf(*w.target)) {
        state_.access_texts.push_back(EmitExpr(*w.target));
        Enqueue(idx->index, w.loops);
      }
      if (const auto* c = std::get_if<CondAssign>(&w.stmt->node)) {
        Enqueue(c->cond, w.loops);
        Enqueue(c->otherwise, w.loops);
      }
      EnqueueGuards(w);
    }
  }

  std::vector<const Stmt*> Ordered(const std::set<const Stmt*>& loops) const {
    std::vector<const Stmt*> sorted(loops.begin(), loops.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](const Stmt* a, const Stmt* b) {
                return loop_order_.at(a) < loop_order_.at(b);
              });
    return sorted;
  }

  static std::string Where(const Stmt* loop) {
    return absl::StrCat(loop->span.line, ":", loop->span.column);
  }

  const Program& program_;
  const ProgramFacts& facts_;
  std::vector<AssertSite> asserts_;
  std::map<std::string, std::vector<WriteSite>> writes_;
  std::map<std::string, std::vector<const Stmt*>> iterator_loops_;
  std::map<const Stmt*, size_t> loop_order_;
  std::set<const Stmt*> enclosing_;
  State state_;
};

}  // namespace

PrecisionReport ClassifyPrecision(const Program& program) {
  ProgramFacts facts(program);
  Classifier classifier(program, facts);
  PrecisionReport report;
  for (const AssertSite& site : classifier.asserts()) {
    report.assertions.push_back(classifier.Classify(site));
  }
  return report;
}

}  // namespace arrayfree
