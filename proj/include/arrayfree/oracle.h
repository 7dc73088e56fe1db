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

// Concrete execution of original programs and bounded enumeration of the
// nondeterministic choices of transformed programs.
//
// Values are fixed-width bit patterns; signedness only affects comparison,
// division and remainder. Division by zero yields all ones and remainder by
// zero yields the dividend. Assertions record a failure and let execution
// continue, so every assertion of a run is checked.
//
// Choices are resolved lazily: `u = nd()` leaves `u` pending and a value is
// picked from the domain of its origin only when `u` is read. The domain of
// an origin is every value the original run stored into that location class,
// its initial values, and {0, 1, all ones}.

#ifndef ARRAYFREE_ORACLE_H_
#define ARRAYFREE_ORACLE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arrayfree/ast.h"

namespace arrayfree {

struct OracleConfig {
  int width = 32;
  std::uint64_t fuel = 1'000'000;  // statements executed by an original run
  std::uint64_t cap = 100'000;     // executions per enumeration
  // nd(l, u) enumerates every value when u - l + 1 is at most this.
  std::uint64_t range_cap = 64;
  // Initial value of array cells; original runs are repeated per entry.
  std::vector<std::uint64_t> array_defaults = {0, 1};
  std::uint64_t scalar_default = 0;
  // Rotates the order in which domain values are tried and seeds sampling.
  std::uint64_t seed = 0;
  // Property checks first try this many random resolutions, then walk every
  // resolution; both phases count toward `cap`.
  std::uint64_t samples = 1000;
  // Memory slots a recorded trace may hold per run; a run over budget is
  // inconclusive.
  std::uint64_t trace_budget = 10'000'000;
};

enum class OutcomeStatus {
  kPass,          // every executed assertion held
  kAssertFailed,  // at least one assertion failed
  kUndefined,     // out-of-bounds array access in the original
  kInconclusive,  // fuel or enumeration cap exhausted
};

const char* OutcomeStatusName(OutcomeStatus status);

// Memory at an assertion. `pending[k]` marks a havocked slot whose value
// was never read; such a slot may still take any value of its domain.
struct AssertPoint {
  int assert_id = 0;
  std::vector<std::uint64_t> values;
  std::vector<bool> pending;
};

struct Outcome {
  OutcomeStatus status = OutcomeStatus::kPass;
  std::set<int> failed;  // every assertion id that failed at least once
  std::optional<int> first_failed;
  SourceSpan first_span;
  std::string detail;
  std::vector<AssertPoint> trace;  // filled when requested
  std::vector<std::uint64_t> choices;  // values picked, in order

  bool conclusive() const {
    return status == OutcomeStatus::kPass ||
           status == OutcomeStatus::kAssertFailed;
  }
};

// Flat slot layout in declaration order; records and array cells expand to
// one slot per field.
class MemoryLayout {
 public:
  explicit MemoryLayout(const Program& program);

  size_t size() const { return names_.size(); }
  const std::string& SlotName(size_t slot) const { return names_[slot]; }
  // Location class used for choice domains: "k", "r.f", "a", "a.f".
  const std::string& SlotClass(size_t slot) const { return classes_[slot]; }
  bool SlotUnsigned(size_t slot) const { return unsigned_[slot]; }
  bool SlotInArray(size_t slot) const { return in_array_[slot]; }
  const std::string& SlotRoot(size_t slot) const { return roots_[slot]; }

  // First slot of a variable and the number of fields per element.
  size_t Base(const std::string& name) const;
  size_t Stride(const std::string& name) const;
  std::optional<size_t> FieldOffset(const std::string& name,
                                    const std::string& field) const;
  std::optional<size_t> Find(const std::string& slot_name) const;

 private:
  struct Var {
    size_t base = 0;
    size_t stride = 1;
    std::vector<std::string> fields;
  };
  std::map<std::string, Var> vars_;
  std::vector<std::string> names_;
  std::vector<std::string> classes_;
  std::vector<std::string> roots_;
  std::vector<bool> unsigned_;
  std::vector<bool> in_array_;
  std::map<std::string, size_t> by_name_;
};

// Runs an original (loop-carrying, nd-free) program once.
Outcome RunOriginal(const Program& program, const OracleConfig& config = {},
                    std::uint64_t array_default = 0, bool record_trace = false);

struct EnumerationResult {
  std::vector<Outcome> outcomes;  // one per execution (without traces)
  std::uint64_t executions = 0;
  bool capped = false;
  std::set<int> failed;  // union over outcomes
};

// Domains for choice sites, learned from original runs.
struct ChoiceDomains {
  std::map<std::string, std::set<std::uint64_t>> by_class;
  std::set<std::uint64_t> constants;
};

ChoiceDomains DomainsFromOriginal(const Program& original,
                                  const OracleConfig& config,
                                  std::uint64_t array_default);

// Initial memory of a transformed program: witness variables start like the
// array cells they stand for.
struct InitialState {
  std::uint64_t array_default = 0;
  std::set<std::string> element_vars;
};

// Runs every resolution of the choices of a transformed program. Witness
// index initializations (the leading `v = nd(l, u)` statements) always
// enumerate their full range.
EnumerationResult EnumerateTransformed(const Program& transformed,
                                       const ChoiceDomains& domains,
                                       const OracleConfig& config = {},
                                       const InitialState& initial = {});

// Re-executes a transformed program with the recorded choice values.
Outcome ReplayTransformed(const Program& transformed,
                          const std::vector<std::uint64_t>& choices,
                          const OracleConfig& config = {},
                          const InitialState& initial = {});

enum class Property { kSoundness, kPrecision, kRepresents };
const char* PropertyName(Property property);

enum class VerdictStatus { kHolds, kViolated, kInconclusive, kOutOfClass };
const char* VerdictStatusName(VerdictStatus status);

struct Counterexample {
  std::string original;     // program text
  std::string transformed;  // program text
  InitialState initial;
  std::vector<std::uint64_t> choices;  // empty when no execution matters
  Outcome original_outcome;
  Outcome transformed_outcome;
};

struct DiffVerdict {
  Property property = Property::kSoundness;
  VerdictStatus status = VerdictStatus::kHolds;
  std::string detail;
  std::uint64_t executions = 0;
  std::optional<Counterexample> counterexample;

  bool holds() const { return status == VerdictStatus::kHolds; }
  std::string ToJson() const;
};

// Every assertion the original fails is failed by some transformed run.
DiffVerdict CheckSoundness(const Program& original,
                           const OracleConfig& config = {});

// Requires every assertion to qualify and the original to pass; then holds
// iff no transformed run fails.
DiffVerdict CheckPrecisionEmpirical(const Program& original,
                                    const OracleConfig& config = {});

// For each original state at an assertion and each array index c, some
// transformed state at that assertion has the witness index at c, the
// witness variable equal to the element, and agrees on the other
// non-array locations. With `strict` false, locations the rewrite havocs
// are exempt from agreement.
DiffVerdict CheckRepresents(const Program& original,
                            const OracleConfig& config = {},
                            bool strict = false);

// Replays a counterexample's transformed program and choices; true when the
// outcome matches the recorded one.
absl::StatusOr<bool> ReplayCounterexample(const Counterexample& cex,
                                          const OracleConfig& config = {});

// Counterexample (de)serialization as a single JSON document.
std::string CounterexampleToJson(const Counterexample& cex);
absl::StatusOr<Counterexample> CounterexampleFromJson(const std::string& text);

}  // namespace arrayfree

#endif  // ARRAYFREE_ORACLE_H_
