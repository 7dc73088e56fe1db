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

// Differential checks between an original program and its rewrite.

#include <algorithm>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "arrayfree/analysis.h"
#include "arrayfree/frontend.h"
#include "arrayfree/oracle.h"
#include "arrayfree/transform.h"
#include "interpreter.h"
#include "json.hpp"

namespace arrayfree {

using nlohmann::ordered_json;
using oracle_internal::Explore;
using oracle_internal::Exploration;

const char* PropertyName(Property property) {
  switch (property) {
    case Property::kSoundness: return "soundness";
    case Property::kPrecision: return "precision";
    case Property::kRepresents: return "represents";
  }
  return "?";
}

const char* VerdictStatusName(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::kHolds: return "holds";
    case VerdictStatus::kViolated: return "violated";
    case VerdictStatus::kInconclusive: return "inconclusive";
    case VerdictStatus::kOutOfClass: return "out_of_class";
  }
  return "?";
}

namespace {

struct Prepared {
  TransformResult result;
  InitialState initial;
  std::string original_text;
  std::string transformed_text;
};

absl::StatusOr<Prepared> Prepare(const Program& original,
                                 const OracleConfig& config) {
  TransformConfig tc;
  tc.width = config.width;
  auto result = TransformProgram(original, tc);
  if (!result.ok()) return result.status();
  Prepared out;
  out.result = *std::move(result);
  for (const WitnessPair& w : out.result.witnesses) {
    out.initial.element_vars.insert(w.value_var);
  }
  out.original_text = Emit(original);
  out.transformed_text = Emit(out.result.program);
  return out;
}

std::string IdList(const std::set<int>& ids) {
  return absl::StrJoin(ids, ",");
}

Outcome WithoutTrace(Outcome outcome) {
  outcome.trace.clear();
  return outcome;
}

Counterexample MakeCex(const Prepared& p, std::uint64_t array_default,
                       const Outcome& original, const Outcome* transformed) {
  Counterexample cex;
  cex.original = p.original_text;
  cex.transformed = p.transformed_text;
  cex.initial = p.initial;
  cex.initial.array_default = array_default;
  cex.original_outcome = WithoutTrace(original);
  if (transformed != nullptr) {
    cex.choices = transformed->choices;
    cex.transformed_outcome = WithoutTrace(*transformed);
  }
  return cex;
}

// Shared prologue: the original run for one probe. Returns false and fills
// `verdict` when the run is not conclusive.
bool RunProbe(const Program& original, const OracleConfig& config,
              std::uint64_t d, bool trace, Outcome* out, DiffVerdict* verdict) {
  *out = RunOriginal(original, config, d, trace);
  if (out->conclusive()) return true;
  verdict->status = VerdictStatus::kInconclusive;
  verdict->detail = absl::StrCat("original run with array cells at ", d, ": ",
                                 OutcomeStatusName(out->status), " (",
                                 out->detail, ")");
  return false;
}

DiffVerdict CannotTransform(Property property, const absl::Status& status) {
  DiffVerdict v;
  v.property = property;
  v.status = VerdictStatus::kInconclusive;
  v.detail = absl::StrCat("transformation failed: ",
                          std::string(status.message()));
  return v;
}

}  // namespace

DiffVerdict CheckSoundness(const Program& original,
                           const OracleConfig& config) {
  auto prepared = Prepare(original, config);
  if (!prepared.ok()) {
    return CannotTransform(Property::kSoundness, prepared.status());
  }
  DiffVerdict verdict;
  verdict.property = Property::kSoundness;
  for (std::uint64_t d : config.array_defaults) {
    Outcome orig;
    if (!RunProbe(original, config, d, false, &orig, &verdict)) return verdict;
    if (orig.failed.empty()) continue;
    ChoiceDomains domains = DomainsFromOriginal(original, config, d);
    InitialState initial = prepared->initial;
    initial.array_default = d;
    std::set<int> covered;
    std::optional<Outcome> first;
    Exploration e = Explore(
        prepared->result.program, domains, config, initial, false,
        config.samples, [&](Outcome& o) {
          if (!first) first = o;
          covered.insert(o.failed.begin(), o.failed.end());
          return !std::includes(covered.begin(), covered.end(),
                                orig.failed.begin(), orig.failed.end());
        });
    verdict.executions += e.executions;
    if (e.stopped) continue;
    std::set<int> missing;
    std::set_difference(orig.failed.begin(), orig.failed.end(),
                        covered.begin(), covered.end(),
                        std::inserter(missing, missing.end()));
    if (e.capped) {
      verdict.status = VerdictStatus::kInconclusive;
      verdict.detail = absl::StrCat("enumeration cap of ", config.cap,
                                    " reached before assertion(s) ",
                                    IdList(missing), " failed");
      return verdict;
    }
    verdict.status = VerdictStatus::kViolated;
    verdict.detail = absl::StrCat(
        "with array cells at ", d, " the original fails assertion(s) ",
        IdList(orig.failed), " but no transformed run fails ",
        IdList(missing));
    verdict.counterexample =
        MakeCex(*prepared, d, orig, first ? &*first : nullptr);
    return verdict;
  }
  verdict.detail = "every assertion failed by the original is reachable";
  return verdict;
}

DiffVerdict CheckPrecisionEmpirical(const Program& original,
                                    const OracleConfig& config) {
  DiffVerdict verdict;
  verdict.property = Property::kPrecision;
  PrecisionReport report = ClassifyPrecision(original);
  if (!report.AllQualify()) {
    std::vector<std::string> ids;
    for (const AssertionPrecision& a : report.assertions) {
      if (!a.qualifies) ids.push_back(absl::StrCat(a.assert_id));
    }
    verdict.status = VerdictStatus::kOutOfClass;
    verdict.detail = absl::StrCat("assertion(s) ", absl::StrJoin(ids, ","),
                                  " do not qualify");
    return verdict;
  }
  auto prepared = Prepare(original, config);
  if (!prepared.ok()) {
    return CannotTransform(Property::kPrecision, prepared.status());
  }
  for (std::uint64_t d : config.array_defaults) {
    Outcome orig;
    if (!RunProbe(original, config, d, false, &orig, &verdict)) return verdict;
    if (!orig.failed.empty()) {
      verdict.status = VerdictStatus::kOutOfClass;
      verdict.detail = absl::StrCat("the original fails assertion(s) ",
                                    IdList(orig.failed),
                                    " with array cells at ", d);
      return verdict;
    }
    ChoiceDomains domains = DomainsFromOriginal(original, config, d);
    InitialState initial = prepared->initial;
    initial.array_default = d;
    std::optional<Outcome> failing;
    Exploration e = Explore(prepared->result.program, domains, config, initial,
                            false, config.samples, [&](Outcome& o) {
                              if (o.failed.empty()) return true;
                              failing = o;
                              return false;
                            });
    verdict.executions += e.executions;
    if (failing) {
      verdict.status = VerdictStatus::kViolated;
      verdict.detail = absl::StrCat(
          "the original passes but a transformed run fails assertion(s) ",
          IdList(failing->failed), " with array cells at ", d);
      verdict.counterexample = MakeCex(*prepared, d, orig, &*failing);
      return verdict;
    }
    if (e.capped) {
      verdict.status = VerdictStatus::kInconclusive;
      verdict.detail = absl::StrCat("enumeration cap of ", config.cap,
                                    " reached without a failing run");
      return verdict;
    }
  }
  verdict.detail = "no transformed run fails";
  return verdict;
}

namespace {

// Loops around each assertion, innermost first.
std::map<int, std::vector<const Stmt*>> EnclosingLoops(const Program& program) {
  std::map<int, std::vector<const Stmt*>> out;
  std::vector<const Stmt*> stack;
  std::function<void(const StmtPtr&)> walk = [&](const StmtPtr& s) {
    if (s == nullptr) return;
    std::visit(Overloaded{
                   [&](const For& n) {
                     stack.push_back(s.get());
                     walk(n.body);
                     stack.pop_back();
                   },
                   [&](const If& n) {
                     walk(n.then);
                     walk(n.otherwise);
                   },
                   [&](const Block& n) {
                     for (const StmtPtr& c : n.stmts) walk(c);
                   },
                   [&](const Assert& n) {
                     out[n.id] = std::vector<const Stmt*>(stack.rbegin(),
                                                          stack.rend());
                   },
                   [](const auto&) {},
               },
               s->node);
  };
  walk(program.body);
  return out;
}

std::int64_t SignedValue(std::uint64_t v, int width) {
  if (width < 64 && (v & (std::uint64_t{1} << (width - 1)))) {
    v |= ~oracle_internal::WidthMask(width);
  }
  return static_cast<std::int64_t>(v);
}

struct WitnessSlots {
  const WitnessPair* pair;
  size_t index_slot;                 // in the transformed layout
  std::vector<size_t> value_slots;   // in the transformed layout, per field
  size_t original_base;              // first cell in the original layout
  size_t stride;
};

}  // namespace

DiffVerdict CheckRepresents(const Program& original, const OracleConfig& config,
                            bool strict) {
  auto prepared = Prepare(original, config);
  if (!prepared.ok()) {
    return CannotTransform(Property::kRepresents, prepared.status());
  }
  DiffVerdict verdict;
  verdict.property = Property::kRepresents;
  const Program& transformed = prepared->result.program;
  ProgramFacts facts(original);
  MemoryLayout from(original);
  MemoryLayout to(transformed);

  std::set<std::string> exempt;
  if (!strict) {
    for (const LoopFacts& f : facts.loops()) {
      exempt.insert(f.havoc.scalars.begin(), f.havoc.scalars.end());
      exempt.insert(f.constant_only.begin(), f.constant_only.end());
      exempt.insert(f.iterator);
    }
  }
  // Non-array slots that must agree: (original slot, transformed slot).
  std::vector<std::pair<size_t, size_t>> agree;
  for (size_t slot = 0; slot < from.size(); ++slot) {
    if (from.SlotInArray(slot) || exempt.count(from.SlotRoot(slot))) continue;
    if (auto t = to.Find(from.SlotName(slot))) agree.emplace_back(slot, *t);
  }
  std::vector<WitnessSlots> witnesses;
  for (const WitnessPair& w : prepared->result.witnesses) {
    WitnessSlots ws{&w, to.Base(w.index_var), {}, from.Base(w.array),
                    from.Stride(w.array)};
    for (size_t k = 0; k < ws.stride; ++k) {
      ws.value_slots.push_back(to.Base(w.value_var) + k);
    }
    witnesses.push_back(std::move(ws));
  }
  auto enclosing = EnclosingLoops(original);

  for (std::uint64_t d : config.array_defaults) {
    Outcome orig;
    if (!RunProbe(original, config, d, true, &orig, &verdict)) return verdict;
    // open[point][witness] = indices still without a matching state.
    std::vector<std::vector<std::set<std::uint64_t>>> open(orig.trace.size());
    std::map<int, std::vector<size_t>> points_by_id;
    size_t remaining = 0;
    for (size_t p = 0; p < orig.trace.size(); ++p) {
      const AssertPoint& point = orig.trace[p];
      points_by_id[point.assert_id].push_back(p);
      open[p].resize(witnesses.size());
      for (size_t w = 0; w < witnesses.size(); ++w) {
        const WitnessPair& pair = *witnesses[w].pair;
        std::optional<std::uint64_t> pinned;
        for (const Stmt* loop : enclosing[point.assert_id]) {
          const LoopFacts& f = facts.ForLoop(*loop);
          if (f.bound_array != pair.array) continue;
          std::int64_t c = SignedValue(
              point.values[from.Base(f.iterator)], config.width);
          pinned = c;
          if (c >= 0 && static_cast<std::uint64_t>(c) < pair.size) {
            open[p][w].insert(static_cast<std::uint64_t>(c));
          }
          break;
        }
        if (!pinned) {
          for (std::uint64_t c = 0; c < pair.size; ++c) open[p][w].insert(c);
        }
        remaining += open[p][w].size();
      }
    }
    if (remaining == 0) continue;

    InitialState initial = prepared->initial;
    initial.array_default = d;
    ChoiceDomains domains = DomainsFromOriginal(original, config, d);
    auto matches = [&](const AssertPoint& sigma, const AssertPoint& s) {
      for (auto [o, t] : agree) {
        if (!s.pending[t] && s.values[t] != sigma.values[o]) return false;
      }
      return true;
    };
    Exploration e = Explore(
        transformed, domains, config, initial, true, config.samples,
        [&](Outcome& o) {
          for (const AssertPoint& s : o.trace) {
            auto ids = points_by_id.find(s.assert_id);
            if (ids == points_by_id.end()) continue;
            for (size_t p : ids->second) {
              const AssertPoint& sigma = orig.trace[p];
              bool agreed = false;
              bool checked = false;
              for (size_t w = 0; w < witnesses.size(); ++w) {
                auto& todo = open[p][w];
                if (todo.empty()) continue;
                const WitnessSlots& ws = witnesses[w];
                std::vector<std::uint64_t> candidates;
                if (s.pending[ws.index_slot]) {
                  candidates.assign(todo.begin(), todo.end());
                } else if (todo.count(s.values[ws.index_slot])) {
                  candidates.push_back(s.values[ws.index_slot]);
                }
                for (std::uint64_t c : candidates) {
                  if (!checked) {
                    agreed = matches(sigma, s);
                    checked = true;
                  }
                  if (!agreed) break;
                  bool equal = true;
                  for (size_t k = 0; k < ws.stride && equal; ++k) {
                    size_t t = ws.value_slots[k];
                    equal = s.pending[t] ||
                            s.values[t] ==
                                sigma.values[ws.original_base + c * ws.stride + k];
                  }
                  if (equal) {
                    todo.erase(c);
                    --remaining;
                  }
                }
              }
            }
          }
          return remaining > 0;
        });
    verdict.executions += e.executions;
    if (remaining == 0) continue;
    if (e.capped) {
      verdict.status = VerdictStatus::kInconclusive;
      verdict.detail = absl::StrCat("enumeration cap of ", config.cap,
                                    " reached with ", remaining,
                                    " state(s) unmatched");
      return verdict;
    }
    for (size_t p = 0; p < open.size(); ++p) {
      for (size_t w = 0; w < witnesses.size(); ++w) {
        if (open[p][w].empty()) continue;
        const AssertPoint& sigma = orig.trace[p];
        std::uint64_t c = *open[p][w].begin();
        std::vector<std::string> state;
        for (auto [o, t] : agree) {
          state.push_back(
              absl::StrCat(from.SlotName(o), "=",
                           SignedValue(sigma.values[o], config.width)));
        }
        verdict.status = VerdictStatus::kViolated;
        verdict.detail = absl::StrCat(
            "with array cells at ", d, ", no transformed state at assertion ",
            sigma.assert_id, " has ", witnesses[w].pair->index_var, " = ", c,
            ", ", witnesses[w].pair->value_var, " = ",
            witnesses[w].pair->array, "[", c, "] and {",
            absl::StrJoin(state, ", "), "}");
        verdict.counterexample = MakeCex(*prepared, d, orig, nullptr);
        return verdict;
      }
    }
  }
  verdict.detail = strict ? "every state is represented exactly"
                          : "every state is represented";
  return verdict;
}

namespace {

ordered_json OutcomeJson(const Outcome& o) {
  ordered_json j;
  j["status"] = OutcomeStatusName(o.status);
  j["failed"] = o.failed;
  j["first_failed"] = o.first_failed ? ordered_json(*o.first_failed)
                                     : ordered_json(nullptr);
  j["detail"] = o.detail;
  return j;
}

absl::StatusOr<Outcome> OutcomeFromJson(const ordered_json& j) {
  Outcome o;
  std::string status = j.at("status").get<std::string>();
  bool known = false;
  for (OutcomeStatus s :
       {OutcomeStatus::kPass, OutcomeStatus::kAssertFailed,
        OutcomeStatus::kUndefined, OutcomeStatus::kInconclusive}) {
    if (status == OutcomeStatusName(s)) {
      o.status = s;
      known = true;
    }
  }
  if (!known) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown outcome status '", status, "'"));
  }
  o.failed = j.at("failed").get<std::set<int>>();
  if (j.contains("first_failed") && !j["first_failed"].is_null()) {
    o.first_failed = j["first_failed"].get<int>();
  }
  if (j.contains("detail")) o.detail = j["detail"].get<std::string>();
  return o;
}

ordered_json CexJson(const Counterexample& cex) {
  ordered_json j;
  j["original"] = cex.original;
  j["transformed"] = cex.transformed;
  j["array_default"] = cex.initial.array_default;
  j["element_vars"] = cex.initial.element_vars;
  j["choices"] = cex.choices;
  j["original_outcome"] = OutcomeJson(cex.original_outcome);
  j["transformed_outcome"] = OutcomeJson(cex.transformed_outcome);
  return j;
}

}  // namespace

std::string DiffVerdict::ToJson() const {
  ordered_json j;
  j["property"] = PropertyName(property);
  j["verdict"] = VerdictStatusName(status);
  j["detail"] = detail;
  j["executions"] = executions;
  if (counterexample) j["counterexample"] = CexJson(*counterexample);
  return j.dump(2) + "\n";
}

std::string CounterexampleToJson(const Counterexample& cex) {
  return CexJson(cex).dump(2) + "\n";
}

absl::StatusOr<Counterexample> CounterexampleFromJson(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("counterexample is not a JSON object");
  }
  try {
    Counterexample cex;
    cex.original = j.at("original").get<std::string>();
    cex.transformed = j.at("transformed").get<std::string>();
    cex.initial.array_default = j.at("array_default").get<std::uint64_t>();
    cex.initial.element_vars =
        j.at("element_vars").get<std::set<std::string>>();
    cex.choices = j.at("choices").get<std::vector<std::uint64_t>>();
    auto original = OutcomeFromJson(j.at("original_outcome"));
    if (!original.ok()) return original.status();
    auto transformed = OutcomeFromJson(j.at("transformed_outcome"));
    if (!transformed.ok()) return transformed.status();
    cex.original_outcome = *std::move(original);
    cex.transformed_outcome = *std::move(transformed);
    return cex;
  } catch (const ordered_json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed counterexample: ", e.what()));
  }
}

absl::StatusOr<bool> ReplayCounterexample(const Counterexample& cex,
                                          const OracleConfig& config) {
  auto program = ParseProgram(cex.transformed);
  if (!program.ok()) return program.status();
  Outcome replay =
      ReplayTransformed(*program, cex.choices, config, cex.initial);
  return replay.status == cex.transformed_outcome.status &&
         replay.failed == cex.transformed_outcome.failed;
}

}  // namespace arrayfree
