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

#include "interpreter.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "arrayfree/frontend.h"

namespace arrayfree {

MemoryLayout::MemoryLayout(const Program& program) {
  auto add = [&](const std::string& name, const std::string& cls,
                 const std::string& root, bool is_unsigned, bool in_array) {
    by_name_[name] = names_.size();
    names_.push_back(name);
    classes_.push_back(cls);
    roots_.push_back(root);
    unsigned_.push_back(is_unsigned);
    in_array_.push_back(in_array);
  };
  for (const VarDecl& decl : program.decls) {
    Var var;
    var.base = names_.size();
    std::vector<StructField> fields;
    if (decl.is_record()) {
      const StructDef* def = program.FindStruct(*decl.record);
      if (def != nullptr) fields = def->fields;
      for (const StructField& f : fields) var.fields.push_back(f.name);
      var.stride = std::max<size_t>(1, fields.size());
    }
    std::uint64_t count = decl.is_array() ? *decl.size : 1;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::string cell =
          decl.is_array() ? absl::StrCat(decl.name, "[", k, "]") : decl.name;
      if (!decl.is_record()) {
        add(cell, decl.name, decl.name, decl.scalar == ScalarType::kUnsigned,
            decl.is_array());
        continue;
      }
      for (const StructField& f : fields) {
        add(absl::StrCat(cell, ".", f.name),
            absl::StrCat(decl.name, ".", f.name), decl.name,
            f.type == ScalarType::kUnsigned, decl.is_array());
      }
    }
    vars_[decl.name] = std::move(var);
  }
}

size_t MemoryLayout::Base(const std::string& name) const {
  return vars_.at(name).base;
}

size_t MemoryLayout::Stride(const std::string& name) const {
  return vars_.at(name).stride;
}

std::optional<size_t> MemoryLayout::FieldOffset(
    const std::string& name, const std::string& field) const {
  auto it = vars_.find(name);
  if (it == vars_.end()) return std::nullopt;
  const auto& fields = it->second.fields;
  auto f = std::find(fields.begin(), fields.end(), field);
  if (f == fields.end()) return std::nullopt;
  return static_cast<size_t>(f - fields.begin());
}

std::optional<size_t> MemoryLayout::Find(const std::string& slot_name) const {
  auto it = by_name_.find(slot_name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

namespace oracle_internal {

std::uint64_t WidthMask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::uint64_t DfsChooser::Choose(const std::vector<std::uint64_t>& domain) {
  if (depth_ == path_.size()) path_.push_back({0, domain.size()});
  const Point& p = path_[depth_++];
  return domain[(p.index + seed_) % domain.size()];
}

bool DfsChooser::Advance() {
  path_.resize(depth_);
  while (!path_.empty()) {
    if (++path_.back().index < path_.back().size) return true;
    path_.pop_back();
  }
  return false;
}

std::uint64_t ReplayChooser::Choose(const std::vector<std::uint64_t>& domain) {
  if (next_ < values_.size()) return values_[next_++];
  return domain.front();
}

namespace {

struct UndefinedAccess {
  std::string detail;
  SourceSpan span;
};

struct OutOfFuel {};
struct TraceTooLarge {};

// The leading `v = nd(l, u)` statements of a transformed program.
std::set<const Stmt*> WitnessInits(const Program& program) {
  std::set<const Stmt*> out;
  for (const StmtPtr& s : std::get<Block>(program.body->node).stmts) {
    const auto* assign = std::get_if<Assign>(&s->node);
    if (assign == nullptr || !std::holds_alternative<VarRef>(assign->target->node) ||
        !std::holds_alternative<NdRange>(assign->value->node)) {
      break;
    }
    out.insert(s.get());
  }
  return out;
}

}  // namespace

Interpreter::Interpreter(const Program& program, const OracleConfig& config)
    : program_(program),
      config_(config),
      layout_(program),
      mask_(WidthMask(config.width)),
      witness_inits_(WitnessInits(program)) {
  ForEachStmt(program.body, [&](const StmtPtr& s) {
    ForEachOwnExpr(*s, [&](const ExprPtr& e) {
      ForEachSubexpr(e, [&](const ExprPtr& sub) {
        if (const auto* c = std::get_if<Const>(&sub->node)) {
          constants_.insert(c->value & mask_);
        }
      });
      if (e != nullptr) ComputeUnsigned(*e);
    });
  });
}

bool Interpreter::ClassUnsigned(const std::string& cls) const {
  size_t dot = cls.find('.');
  const VarDecl* decl = program_.FindDecl(cls.substr(0, dot));
  if (decl == nullptr) return false;
  if (dot == std::string::npos) return decl->scalar == ScalarType::kUnsigned;
  return program_.FieldType(*decl, cls.substr(dot + 1)) ==
         ScalarType::kUnsigned;
}

bool Interpreter::ComputeUnsigned(const Expr& expr) {
  auto cached = unsigned_.find(&expr);
  if (cached != unsigned_.end()) return cached->second;
  bool result = std::visit(
      Overloaded{
          [](const Const& n) { return n.is_unsigned; },
          [&](const VarRef& n) { return ClassUnsigned(n.name); },
          [&](const Index& n) {
            ComputeUnsigned(*n.index);
            return ClassUnsigned(n.array);
          },
          [&](const Field& n) {
            ComputeUnsigned(*n.base);
            return ClassUnsigned(
                absl::StrCat(LvalueRoot(*n.base), ".", n.field));
          },
          [&](const Unary& n) {
            bool operand = ComputeUnsigned(*n.operand);
            return n.op == UnaryOp::kNeg && operand;
          },
          [&](const Binary& n) {
            bool either = ComputeUnsigned(*n.lhs);
            either = ComputeUnsigned(*n.rhs) || either;
            switch (n.op) {
              case BinaryOp::kAdd:
              case BinaryOp::kSub:
              case BinaryOp::kMul:
              case BinaryOp::kDiv:
              case BinaryOp::kMod:
                return either;
              default:
                return false;
            }
          },
          [&](const Cond& n) {
            ComputeUnsigned(*n.cond);
            bool then = ComputeUnsigned(*n.then);
            return ComputeUnsigned(*n.otherwise) || then;
          },
          [&](const Nd& n) { return ClassUnsigned(n.origin); },
          [](const NdRange&) { return false; },
      },
      expr.node);
  unsigned_[&expr] = result;
  return result;
}

const std::vector<std::uint64_t>& Interpreter::ClassDomain(
    const std::string& cls, const RunOptions& options) {
  if (cached_for_ != options.domains) {
    class_domains_.clear();
    range_domains_.clear();
    cached_for_ = options.domains;
  }
  auto it = class_domains_.find(cls);
  if (it != class_domains_.end()) return it->second;
  std::set<std::uint64_t> values = {0, 1, mask_};
  if (options.domains != nullptr) {
    auto seen = options.domains->by_class.find(cls);
    if (seen != options.domains->by_class.end()) {
      for (std::uint64_t v : seen->second) values.insert(v & mask_);
    }
  }
  return class_domains_[cls] =
             std::vector<std::uint64_t>(values.begin(), values.end());
}

const std::vector<std::uint64_t>& Interpreter::RangeDomain(
    const Expr& expr, const std::string& target, bool full,
    const RunOptions& options) {
  ClassDomain("", options);  // resets the caches when the domains change
  auto key = std::make_pair(&expr, target);
  auto it = range_domains_.find(key);
  if (it != range_domains_.end()) return it->second;
  const auto& range = std::get<NdRange>(expr.node);
  std::vector<std::uint64_t> values;
  __int128 span = static_cast<__int128>(range.hi) - range.lo + 1;
  if (full || span <= static_cast<__int128>(config_.range_cap)) {
    for (std::int64_t v = range.lo; v <= range.hi; ++v) {
      values.push_back(static_cast<std::uint64_t>(v) & mask_);
      if (v == range.hi) break;
    }
  } else {
    std::set<std::int64_t> picks = {range.lo, range.hi};
    bool target_unsigned = !target.empty() && ClassUnsigned(target);
    auto consider = [&](std::uint64_t pattern) {
      std::int64_t v = static_cast<std::int64_t>(pattern & mask_);
      if (!target_unsigned && config_.width < 64 &&
          (pattern & (std::uint64_t{1} << (config_.width - 1)))) {
        v = static_cast<std::int64_t>((pattern & mask_) | ~mask_);
      }
      if (v >= range.lo && v <= range.hi) picks.insert(v);
    };
    for (std::uint64_t c : constants_) consider(c);
    if (options.domains != nullptr) {
      for (std::uint64_t c : options.domains->constants) consider(c);
      auto seen = options.domains->by_class.find(target);
      if (seen != options.domains->by_class.end()) {
        for (std::uint64_t v : seen->second) consider(v);
      }
    }
    for (std::int64_t v : picks) {
      values.push_back(static_cast<std::uint64_t>(v) & mask_);
    }
  }
  return range_domains_[key] = std::move(values);
}

struct Interpreter::Frame {
  Interpreter& in;
  const RunOptions& options;
  Outcome& outcome;
  std::vector<std::uint64_t> mem;
  std::vector<const std::vector<std::uint64_t>*> pending;
  std::uint64_t fuel_used = 0;
  std::uint64_t trace_used = 0;

  std::uint64_t mask() const { return in.mask_; }

  std::int64_t Signed(std::uint64_t v) const {
    int w = in.config_.width;
    if (w >= 64) return static_cast<std::int64_t>(v);
    if (v & (std::uint64_t{1} << (w - 1))) v |= ~mask();
    return static_cast<std::int64_t>(v);
  }

  void Tick() {
    if (++fuel_used > options.fuel) throw OutOfFuel{};
  }

  std::uint64_t Pick(const std::vector<std::uint64_t>& domain) {
    if (domain.empty()) return 0;
    if (options.chooser == nullptr) return domain.front();
    std::uint64_t v = options.chooser->Choose(domain) & mask();
    outcome.choices.push_back(v);
    return v;
  }

  std::uint64_t Load(size_t slot) {
    if (pending[slot] != nullptr) {
      mem[slot] = Pick(*pending[slot]);
      pending[slot] = nullptr;
    }
    return mem[slot];
  }

  void Store(size_t slot, std::uint64_t v) {
    mem[slot] = v & mask();
    pending[slot] = nullptr;
    if (options.observe) options.observe(slot, mem[slot]);
  }

  size_t Slot(const Expr& lvalue) {
    if (const auto* var = std::get_if<VarRef>(&lvalue.node)) {
      return in.layout_.Base(var->name);
    }
    if (const auto* idx = std::get_if<Index>(&lvalue.node)) {
      std::uint64_t raw = Eval(*idx->index);
      const VarDecl* decl = in.program_.FindDecl(idx->array);
      std::uint64_t size = decl != nullptr && decl->size ? *decl->size : 0;
      bool out_of_range = in.unsigned_.at(idx->index.get())
                              ? raw >= size
                              : Signed(raw) < 0 ||
                                    static_cast<std::uint64_t>(Signed(raw)) >= size;
      if (out_of_range) {
        throw UndefinedAccess{
            absl::StrCat("index ", in.unsigned_.at(idx->index.get())
                                       ? absl::StrCat(raw)
                                       : absl::StrCat(Signed(raw)),
                         " out of bounds for '", idx->array, "' of size ",
                         size),
            lvalue.span};
      }
      std::uint64_t k = in.unsigned_.at(idx->index.get())
                            ? raw
                            : static_cast<std::uint64_t>(Signed(raw));
      return in.layout_.Base(idx->array) + k * in.layout_.Stride(idx->array);
    }
    const auto& field = std::get<Field>(lvalue.node);
    std::string root = LvalueRoot(*field.base);
    return Slot(*field.base) + *in.layout_.FieldOffset(root, field.field);
  }

  std::uint64_t Eval(const Expr& e) {
    return std::visit(
        Overloaded{
            [&](const Const& n) { return n.value & mask(); },
            [&](const VarRef&) { return Load(Slot(e)); },
            [&](const Index&) { return Load(Slot(e)); },
            [&](const Field&) { return Load(Slot(e)); },
            [&](const Unary& n) -> std::uint64_t {
              std::uint64_t v = Eval(*n.operand);
              if (n.op == UnaryOp::kNot) return v == 0 ? 1 : 0;
              return (~v + 1) & mask();
            },
            [&](const Binary& n) { return EvalBinary(n); },
            [&](const Cond& n) {
              return Eval(*n.cond) != 0 ? Eval(*n.then) : Eval(*n.otherwise);
            },
            [&](const Nd& n) { return Pick(in.ClassDomain(n.origin, options)); },
            [&](const NdRange&) {
              return Pick(in.RangeDomain(e, "", false, options));
            },
        },
        e.node);
  }

  std::uint64_t EvalBinary(const Binary& n) {
    if (n.op == BinaryOp::kAnd) {
      return Eval(*n.lhs) != 0 && Eval(*n.rhs) != 0 ? 1 : 0;
    }
    if (n.op == BinaryOp::kOr) {
      return Eval(*n.lhs) != 0 || Eval(*n.rhs) != 0 ? 1 : 0;
    }
    std::uint64_t a = Eval(*n.lhs);
    std::uint64_t b = Eval(*n.rhs);
    bool is_unsigned =
        in.unsigned_.at(n.lhs.get()) || in.unsigned_.at(n.rhs.get());
    std::int64_t sa = Signed(a);
    std::int64_t sb = Signed(b);
    switch (n.op) {
      case BinaryOp::kAdd: return (a + b) & mask();
      case BinaryOp::kSub: return (a - b) & mask();
      case BinaryOp::kMul: return (a * b) & mask();
      case BinaryOp::kDiv:
        if (b == 0) return mask();
        if (is_unsigned) return a / b;
        if (sb == -1) return (~a + 1) & mask();
        return static_cast<std::uint64_t>(sa / sb) & mask();
      case BinaryOp::kMod:
        if (b == 0) return a;
        if (is_unsigned) return a % b;
        if (sb == -1) return 0;
        return static_cast<std::uint64_t>(sa % sb) & mask();
      case BinaryOp::kLt: return is_unsigned ? a < b : sa < sb;
      case BinaryOp::kLe: return is_unsigned ? a <= b : sa <= sb;
      case BinaryOp::kGt: return is_unsigned ? a > b : sa > sb;
      case BinaryOp::kGe: return is_unsigned ? a >= b : sa >= sb;
      case BinaryOp::kEq: return a == b;
      case BinaryOp::kNe: return a != b;
      default: return 0;
    }
  }

  void Assign(const Stmt& s, const arrayfree::Assign& n) {
    if (const auto* nd = std::get_if<Nd>(&n.value->node)) {
      size_t slot = Slot(*n.target);
      pending[slot] = &in.ClassDomain(nd->origin, options);
      return;
    }
    if (std::holds_alternative<NdRange>(n.value->node)) {
      size_t slot = Slot(*n.target);
      bool full = in.witness_inits_.count(&s) > 0;
      Store(slot, Pick(in.RangeDomain(*n.value, in.layout_.SlotClass(slot),
                                      full, options)));
      return;
    }
    std::uint64_t v = Eval(*n.value);
    Store(Slot(*n.target), v);
  }

  void Exec(const StmtPtr& s) {
    if (s == nullptr) return;
    Tick();
    std::visit(
        Overloaded{
            [&](const arrayfree::Assign& n) { Assign(*s, n); },
            [&](const CondAssign& n) {
              // The otherwise branch is a value without effects.
              if (Eval(*n.cond) == 0) return;
              std::uint64_t v = Eval(*n.value);
              Store(Slot(*n.target), v);
            },
            [&](const If& n) {
              if (Eval(*n.cond) != 0) {
                Exec(n.then);
              } else {
                Exec(n.otherwise);
              }
            },
            [&](const For& n) {
              size_t slot = in.layout_.Base(n.iterator);
              Store(slot, Eval(*n.init));
              while (true) {
                Tick();
                if (Eval(*n.test) == 0) break;
                Exec(n.body);
                Store(slot, Eval(*n.step));
              }
            },
            [&](const Block& n) {
              for (const StmtPtr& c : n.stmts) Exec(c);
            },
            [&](const Assert& n) {
              if (options.record_trace) {
                trace_used += mem.size();
                if (trace_used > in.config_.trace_budget) throw TraceTooLarge{};
                AssertPoint point;
                point.assert_id = n.id;
                point.values = mem;
                point.pending.resize(mem.size());
                for (size_t k = 0; k < mem.size(); ++k) {
                  point.pending[k] = pending[k] != nullptr;
                }
                outcome.trace.push_back(std::move(point));
              }
              if (Eval(*n.cond) != 0) return;
              outcome.failed.insert(n.id);
              if (!outcome.first_failed) {
                outcome.first_failed = n.id;
                outcome.first_span = s->span;
              }
            },
        },
        s->node);
  }
};

Outcome Interpreter::Run(const RunOptions& options) {
  Outcome outcome;
  Frame frame{*this, options, outcome, {}, {}, 0, 0};
  frame.mem.resize(layout_.size());
  frame.pending.assign(layout_.size(), nullptr);
  for (size_t slot = 0; slot < layout_.size(); ++slot) {
    bool element = layout_.SlotInArray(slot) ||
                   options.element_vars.count(layout_.SlotRoot(slot)) > 0;
    frame.Store(slot, element ? options.array_default : config_.scalar_default);
  }
  try {
    frame.Exec(program_.body);
  } catch (const UndefinedAccess& e) {
    outcome.status = OutcomeStatus::kUndefined;
    outcome.detail = absl::StrCat(e.span.line, ":", e.span.column, ": ",
                                  e.detail);
    return outcome;
  } catch (const OutOfFuel&) {
    outcome.status = OutcomeStatus::kInconclusive;
    outcome.detail = absl::StrCat("fuel of ", options.fuel,
                                  " statements exhausted");
    return outcome;
  } catch (const TraceTooLarge&) {
    outcome.status = OutcomeStatus::kInconclusive;
    outcome.trace.clear();
    outcome.detail = absl::StrCat("trace budget of ",
                                  config_.trace_budget, " slots exhausted");
    return outcome;
  }
  outcome.status = outcome.failed.empty() ? OutcomeStatus::kPass
                                          : OutcomeStatus::kAssertFailed;
  return outcome;
}

Exploration Explore(const Program& program, const ChoiceDomains& domains,
                    const OracleConfig& config, const InitialState& initial,
                    bool record_trace, std::uint64_t samples,
                    const std::function<bool(Outcome&)>& visit) {
  Interpreter interpreter(program, config);
  RunOptions options;
  options.domains = &domains;
  options.array_default = initial.array_default;
  options.element_vars = initial.element_vars;
  options.fuel = config.fuel;
  options.record_trace = record_trace;
  Exploration result;
  RandomChooser sampler(config.seed);
  options.chooser = &sampler;
  for (std::uint64_t k = 0; k < samples && result.executions < config.cap;
       ++k) {
    Outcome outcome = interpreter.Run(options);
    ++result.executions;
    bool deterministic = outcome.choices.empty();
    if (!visit(outcome)) {
      result.stopped = true;
      return result;
    }
    if (deterministic) return result;  // the only execution there is
  }
  if (result.executions >= config.cap && samples > 0) {
    result.capped = true;
    return result;
  }
  DfsChooser chooser(config.seed);
  options.chooser = &chooser;
  while (true) {
    chooser.BeginRun();
    Outcome outcome = interpreter.Run(options);
    ++result.executions;
    if (!visit(outcome)) {
      result.stopped = true;
      break;
    }
    if (!chooser.Advance()) break;
    if (result.executions >= config.cap) {
      result.capped = true;
      break;
    }
  }
  return result;
}

}  // namespace oracle_internal

using oracle_internal::Interpreter;
using oracle_internal::RunOptions;

const char* OutcomeStatusName(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::kPass: return "pass";
    case OutcomeStatus::kAssertFailed: return "assert_failed";
    case OutcomeStatus::kUndefined: return "undefined";
    case OutcomeStatus::kInconclusive: return "inconclusive";
  }
  return "?";
}

Outcome RunOriginal(const Program& program, const OracleConfig& config,
                    std::uint64_t array_default, bool record_trace) {
  Interpreter interpreter(program, config);
  RunOptions options;
  options.array_default = array_default;
  options.fuel = config.fuel;
  options.record_trace = record_trace;
  return interpreter.Run(options);
}

ChoiceDomains DomainsFromOriginal(const Program& original,
                                  const OracleConfig& config,
                                  std::uint64_t array_default) {
  ChoiceDomains domains;
  Interpreter interpreter(original, config);
  std::uint64_t mask = oracle_internal::WidthMask(config.width);
  RunOptions options;
  options.array_default = array_default;
  options.fuel = config.fuel;
  options.observe = [&](size_t slot, std::uint64_t v) {
    domains.by_class[interpreter.layout().SlotClass(slot)].insert(v);
  };
  interpreter.Run(options);
  ForEachStmt(original.body, [&](const StmtPtr& s) {
    ForEachOwnExpr(*s, [&](const ExprPtr& e) {
      ForEachSubexpr(e, [&](const ExprPtr& sub) {
        if (const auto* c = std::get_if<Const>(&sub->node)) {
          domains.constants.insert(c->value & mask);
        }
      });
    });
  });
  return domains;
}

EnumerationResult EnumerateTransformed(const Program& transformed,
                                       const ChoiceDomains& domains,
                                       const OracleConfig& config,
                                       const InitialState& initial) {
  EnumerationResult result;
  auto exploration = oracle_internal::Explore(
      transformed, domains, config, initial, false, 0, [&](Outcome& outcome) {
        result.failed.insert(outcome.failed.begin(), outcome.failed.end());
        result.outcomes.push_back(std::move(outcome));
        return true;
      });
  result.executions = exploration.executions;
  result.capped = exploration.capped;
  return result;
}

Outcome ReplayTransformed(const Program& transformed,
                          const std::vector<std::uint64_t>& choices,
                          const OracleConfig& config,
                          const InitialState& initial) {
  Interpreter interpreter(transformed, config);
  oracle_internal::ReplayChooser chooser(choices);
  RunOptions options;
  options.chooser = &chooser;
  options.array_default = initial.array_default;
  options.element_vars = initial.element_vars;
  options.fuel = config.fuel;
  return interpreter.Run(options);
}

}  // namespace arrayfree
