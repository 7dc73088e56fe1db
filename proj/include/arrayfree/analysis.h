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

// Static facts consumed by the witness transformation: array inventory,
// per-loop modification sets, full-access detection, iterator ranges and
// variable liveness, plus the precision classification of assertions.

#ifndef ARRAYFREE_ANALYSIS_H_
#define ARRAYFREE_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arrayfree/ast.h"

namespace arrayfree {

inline constexpr int kDefaultIntWidth = 32;

struct ArrayInfo {
  std::string name;
  std::uint64_t size = 1;
  std::optional<std::string> record;  // element struct, if any
  ScalarType scalar = ScalarType::kInt;
  SourceSpan span;
};

// One entry per declared array, in declaration order.
std::vector<ArrayInfo> ArrayInventory(const Program& program);

// Highest valid index of `array`.
std::int64_t LastOf(const ArrayInfo& array);

// Variables a loop may modify. Scalars include record variables by name.
struct ModSet {
  std::set<std::string> scalars;
  std::set<std::string> arrays;

  bool Contains(const std::string& name) const {
    return scalars.count(name) > 0 || arrays.count(name) > 0;
  }
  friend bool operator==(const ModSet&, const ModSet&) = default;
};

// Live variables before and after each loop. Variables are tracked by name;
// arrays and records are never killed by element or field writes.
class Liveness {
 public:
  explicit Liveness(const Program& program);

  // Live at the start of every iteration's body.
  const std::set<std::string>& BodyEntry(const Stmt& loop) const;
  // Live right after the loop exits.
  const std::set<std::string>& Exit(const Stmt& loop) const;

 private:
  std::set<std::string> LiveIn(const Stmt& stmt, std::set<std::string> out);

  std::map<const Stmt*, std::set<std::string>> body_entry_;
  std::map<const Stmt*, std::set<std::string>> exit_;
};

// Variables read by `expr` (array names for subscripts, record names for
// field reads, and every variable inside index expressions).
std::set<std::string> ReadVariables(const Expr& expr);

// True when `loop` (a For statement) traverses `array` exactly once per
// index: `i = 0; i < size (or i <= size - 1); i++`, the iterator is never
// assigned in the body, the body accesses the array at least once, and every
// access uses the iterator itself as the index.
bool FullArrayAccess(const Stmt& loop, const ArrayInfo& array);

// Variables modified in `loop`. Scalars assigned anywhere in the body are
// included unless every assignment is a literal constant and the scalar is
// dead both at body entry and after the loop; the iterator is excluded. An
// array is included when it is written at an index other than the iterator,
// or when the body also assigns the iterator.
ModSet LoopDefs(const Program& program, const Stmt& loop);
ModSet LoopDefs(const Stmt& loop, const Liveness& liveness);

// True when the body assigns the loop's iterator (directly or as the iterator
// of a nested loop).
bool BodyAssignsIterator(const For& loop);

// Arrays written anywhere in `stmt`.
std::set<std::string> WrittenArrays(const Stmt& stmt);

struct LoopFacts {
  const Stmt* loop = nullptr;
  SourceSpan span;
  std::string iterator;
  int depth = 0;  // nesting depth, 0 for top-level loops
  // Static iterator range when the header is constant.
  std::optional<std::int64_t> lower;
  std::optional<std::int64_t> upper;
  std::map<std::string, bool> full_access;  // per array
  ModSet defs;
  // Scalars left out of `defs` by the constant-assignment exception.
  std::set<std::string> constant_only;
  // Array bound to the iterator by the full-access rewrite, if any.
  std::optional<std::string> bound_array;
  // Everything the rewrite havocs around the body: `defs` plus arrays whose
  // witness cannot track this loop's writes.
  ModSet havoc;
  // The iterator is read after the loop, so it is havocked on exit too.
  bool iterator_escapes = false;
  std::set<std::string> live_body_entry;
  std::set<std::string> live_exit;

  bool full() const { return bound_array.has_value(); }
};

// Iterator range used when the body runs once on a chosen iterator value:
// the static range when known, otherwise the full range of the iterator's
// type.
std::pair<std::int64_t, std::int64_t> LoopBound(const LoopFacts& facts,
                                                ScalarType iterator_type,
                                                int width = kDefaultIntWidth);

// Facts for every loop of a program.
class ProgramFacts {
 public:
  explicit ProgramFacts(const Program& program);

  const std::vector<ArrayInfo>& arrays() const { return arrays_; }
  const std::vector<LoopFacts>& loops() const { return loops_; }
  const LoopFacts& ForLoop(const Stmt& loop) const;
  const Liveness& liveness() const { return liveness_; }
  const ArrayInfo* FindArray(const std::string& name) const;

 private:
  std::vector<ArrayInfo> arrays_;
  Liveness liveness_;
  std::vector<LoopFacts> loops_;
  std::map<const Stmt*, size_t> index_;
};

// ---- precision classification -------------------------------------------

enum class PrecisionRule { kL1, kA2, kA3, kS4, kD5, kD6 };

const char* PrecisionRuleName(PrecisionRule rule);

struct AssertionPrecision {
  int assert_id = 0;
  SourceSpan span;
  bool in_loop = false;
  bool qualifies = false;
  std::set<PrecisionRule> violated;
  // A havocked scalar was tolerated because its havocs are dead.
  bool relaxation_applied = false;
  // Loops other than the enclosing ones whose definitions reach the
  // assertion (transitively).
  std::vector<SourceSpan> defining_loops;
  std::vector<SourceSpan> enclosing_loops;
  std::set<std::string> dependent_scalars;   // V_imp, transitively
  std::vector<std::string> dependent_accesses;  // E_imp, printed
  std::vector<std::string> notes;  // one line per violation
};

struct PrecisionReport {
  std::vector<AssertionPrecision> assertions;

  bool AllQualify() const;
};

PrecisionReport ClassifyPrecision(const Program& program);

// Line-oriented `key: value` dump of loop facts and the precision report.
std::string FormatFacts(const Program& program);
// The same content as a single JSON document.
std::string FormatFactsJson(const Program& program);

}  // namespace arrayfree

#endif  // ARRAYFREE_ANALYSIS_H_
