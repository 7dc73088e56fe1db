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

// The witness rewrite: every array becomes a witness index, ranging over the
// array's indices, and a witness variable holding the element at that index.
// Loops disappear: a loop that traverses an array runs its body once with the
// iterator bound to the witness index; any other loop runs its body at most
// once for an arbitrary iterator value. Variables the loop may modify are
// havocked around the body.

#ifndef ARRAYFREE_TRANSFORM_H_
#define ARRAYFREE_TRANSFORM_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "arrayfree/analysis.h"
#include "arrayfree/ast.h"
#include "arrayfree/frontend.h"

namespace arrayfree {

struct WitnessPair {
  std::string array;
  std::string index_var;  // i_a
  std::string value_var;  // x_a, typed as the element
  std::uint64_t size = 1;
  std::optional<std::string> record;
  ScalarType scalar = ScalarType::kInt;
};

enum class Rule {
  kE1,
  kE2,
  kE3,
  kS1,
  kS2,
  kS3,
  kS4,
  kS5,
  kS6,
  kS7,
  kS8,
  kS9,
  kP,
};
inline constexpr int kRuleCount = 13;

const char* RuleName(Rule rule);

struct TransformReport {
  std::array<int, kRuleCount> counts{};
  std::vector<std::string> fresh_names;

  int Count(Rule rule) const { return counts[static_cast<int>(rule)]; }
  void Add(Rule rule) { ++counts[static_cast<int>(rule)]; }
  int loops_full() const { return Count(Rule::kS3); }
  int loops_partial() const { return Count(Rule::kS4); }
  std::string ToJson() const;
};

struct TransformConfig {
  NdNaming nd;
  int width = kDefaultIntWidth;
};

struct TransformContext {
  const Program* program = nullptr;
  const ProgramFacts* facts = nullptr;
  std::map<std::string, WitnessPair> witnesses;  // keyed by array name
  const LoopFacts* loop = nullptr;  // innermost enclosing loop
  TransformConfig config;
  TransformReport* report = nullptr;

  // Builds the witnesses for `program`; `program` and `facts` must outlive
  // the context.
  static TransformContext Create(const Program& program,
                                 const ProgramFacts& facts,
                                 const TransformConfig& config,
                                 TransformReport* report);
};

struct TransformResult {
  Program program;
  TransformReport report;
  std::vector<WitnessPair> witnesses;  // declaration order
};

// Rejects programs that already contain transformed-only forms.
absl::StatusOr<TransformResult> TransformProgram(
    const Program& program, const TransformConfig& config = {});

// A statement of the input program (rules S1-S9). Loops come back as a
// Block of the statements that replace them.
StmtPtr TransformStmt(const StmtPtr& stmt, TransformContext& ctx);

// Rules E1-E3.
ExprPtr TransformExpr(const ExprPtr& expr, TransformContext& ctx);

}  // namespace arrayfree

#endif  // ARRAYFREE_TRANSFORM_H_
