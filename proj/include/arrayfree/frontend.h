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

// Parsing, printing and output-grammar validation.
//
// Accepted input is a restricted C: global scalar, struct and 1-D array
// declarations followed by a statement list, optionally wrapped in `main`.
// Statements are `if`/`else`, `for (i = E; E; step)`, assignments and
// `assert`. The transformed-program forms (`nd()`, `nd(l, u)`, `c ? x : y`
// and `(c) ? x = e : e;`) parse as well so that emitted output round-trips.

#ifndef ARRAYFREE_FRONTEND_H_
#define ARRAYFREE_FRONTEND_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "arrayfree/ast.h"

namespace arrayfree {

enum class DiagnosticKind { kSyntax, kType, kUnsupported };

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::kSyntax;
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;  // expected tokens for syntax errors

  std::string ToString() const;
};

// Spelling of the nondeterministic-choice helpers. The defaults print
// `nd()` and `nd(l, u)`; C targets need two distinct names.
struct NdNaming {
  std::string unbounded = "nd";
  std::string ranged = "nd";

  // `NAME()` and `NAME_range(l, u)`.
  static NdNaming FromPrefix(const std::string& prefix);
};

struct ParseOptions {
  NdNaming nd;
};

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return program.has_value(); }
};

ParseResult Parse(std::string_view source, const ParseOptions& options = {});

// Parse() with the diagnostics folded into an InvalidArgument (syntax, type)
// or Unimplemented (unsupported construct) status.
absl::StatusOr<Program> ParseProgram(std::string_view source,
                                     const ParseOptions& options = {});

struct EmitOptions {
  NdNaming nd;
  // Text placed verbatim before the program (helper definitions for a
  // verifier).
  std::string prelude;
};

std::string Emit(const Program& program, const EmitOptions& options = {});
std::string EmitExpr(const Expr& expr, const EmitOptions& options = {});
// A single statement; compound statements span several lines.
std::string EmitStmt(const Stmt& stmt, const EmitOptions& options = {});

enum class ViolationKind { kLoop, kArrayAccess, kBadNdRange };

struct Violation {
  ViolationKind kind;
  SourceSpan span;
  std::string detail;
};

struct ConformanceReport {
  std::vector<Violation> violations;

  bool conformant() const { return violations.empty(); }
  int Count(ViolationKind kind) const;
};

// Checks a program against the loop-free, array-free output grammar.
ConformanceReport ValidateTransformed(const Program& program);

}  // namespace arrayfree

#endif  // ARRAYFREE_FRONTEND_H_
