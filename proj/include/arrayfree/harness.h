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

// Driving an external bounded model checker, generating corpus programs and
// aggregating suite verdicts.

#ifndef ARRAYFREE_HARNESS_H_
#define ARRAYFREE_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "arrayfree/ast.h"
#include "arrayfree/frontend.h"

namespace arrayfree {

inline constexpr char kFilePlaceholder[] = "{file}";

// Helper definitions for a verifier with a nondet-and-assume idiom (CBMC).
std::string CbmcPrelude(const NdNaming& nd);
// Pseudo-random helpers for plain compilation; never used for verdicts.
std::string StubPrelude(const NdNaming& nd);

struct BmcConfig {
  // Executable and arguments; exactly one argument contains "{file}".
  std::vector<std::string> command;
  double timeout_seconds = 60;
  // Time between the termination request and the forced kill.
  double grace_seconds = 1;
  std::string success_marker = "VERIFICATION SUCCESSFUL";
  std::string failure_marker = "VERIFICATION FAILED";
  NdNaming nd = NdNaming::FromPrefix("__nd");
  std::string prelude = CbmcPrelude(NdNaming::FromPrefix("__nd"));

  absl::Status Validate() const;
  // Splits a template such as "cbmc {file} --unwind 2" on blanks.
  static absl::StatusOr<BmcConfig> FromTemplate(const std::string& text);
};

enum class BmcMode { kTransformed, kOriginal };

enum class VerdictKind { kSafe, kUnsafe, kTimeout, kToolError };
const char* VerdictKindName(VerdictKind kind);
std::optional<VerdictKind> VerdictKindFromName(const std::string& name);

struct Verdict {
  VerdictKind kind = VerdictKind::kToolError;
  double seconds = 0;
  // Every assertion qualifies, so an unsafe verdict is not a false alarm of
  // the rewrite. Always true in original mode.
  bool precise = false;
  std::string output;  // captured tool output (or the failure reason)

  // Unsafe on a precise program, or unsafe in original mode.
  bool confirmed() const { return kind == VerdictKind::kUnsafe && precise; }
};

// Result of one external process.
struct ToolRun {
  bool launched = false;
  bool timed_out = false;
  int exit_code = -1;  // -1 when killed by a signal or not launched
  double seconds = 0;
  std::string output;  // stdout and stderr interleaved
};

// Runs `argv` in its own process group. On timeout the group receives
// SIGTERM, then SIGKILL after `grace_seconds`.
ToolRun RunTool(const std::vector<std::string>& argv, double timeout_seconds,
                double grace_seconds);

// Maps a tool run to a verdict by the configured markers.
Verdict ClassifyToolRun(const ToolRun& run, const BmcConfig& config,
                        bool precise);

// The program text handed to the tool: the prelude plus the transformed (or
// original) program.
absl::StatusOr<std::string> PrepareForBmc(const Program& program,
                                          const BmcConfig& config,
                                          BmcMode mode);

// Parses `file`, prepares it, writes it to a temporary file, runs the tool
// and classifies the output. Parse errors are returned as a status.
absl::StatusOr<Verdict> VerifyWithBmc(const std::string& file,
                                      const BmcConfig& config, BmcMode mode);

// ---- suites ---------------------------------------------------------------

enum class Expectation { kSafe, kUnsafe, kUnknown };
const char* ExpectationName(Expectation e);

// Two columns per line: program name and safe|unsafe. '#' starts a comment.
absl::StatusOr<std::map<std::string, Expectation>> ParseManifest(
    const std::string& text);

// Verdict categories.
enum class Category {
  kCorrectTrue,
  kCorrectFalse,
  kIncorrectTrue,
  kIncorrectFalse,
  kNoResult,
};
const char* CategoryName(Category c);

// Safe and unsafe verdicts against the expectation; anything else, or an
// unknown expectation, is no-result.
Category Categorize(Expectation expected, VerdictKind verdict);

struct SuiteRow {
  std::string name;
  Expectation expected = Expectation::kUnknown;
  std::string expectation_source;  // "manifest", "oracle" or ""
  std::optional<VerdictKind> verdict;  // empty for no-result rows
  double seconds = 0;
  bool precise = false;
  Category category = Category::kNoResult;
  std::string detail;
};

struct SuiteReport {
  std::vector<SuiteRow> rows;  // sorted by name
  std::map<Category, int> counts;

  int Count(Category c) const;
  std::string ToCsv() const;
  std::string ToJson() const;
};

struct SuiteOptions {
  BmcConfig bmc;
  BmcMode mode = BmcMode::kTransformed;
  std::map<std::string, Expectation> expectations;
  // Programs missing from the manifest get their expectation from a
  // concrete run of the original.
  bool oracle_expectations = true;
  int jobs = 1;
  // Read tool runs from "<dir>/<name>.json" instead of running the tool.
  std::optional<std::string> replay_dir;
  // Write every tool run to "<dir>/<name>.json".
  std::optional<std::string> record_dir;
};

// Runs every "*.c" file of `dir`.
absl::StatusOr<SuiteReport> RunSuite(const std::string& dir,
                                     const SuiteOptions& options);

// ---- generator ------------------------------------------------------------

struct GenWeights {
  int assign = 3;
  int array_write = 3;
  int full_loop = 3;
  int partial_loop = 1;
  int branch = 1;
  int assertion = 2;
};

struct GenLimits {
  int max_array_size = 4;
  int max_loop_bound = 4;
  int max_constant = 3;
  int max_statements = 12;
  GenWeights weights;
  bool records = true;
  std::uint64_t seed = 0;

  absl::Status Validate() const;
};

// A closed program with at least one assertion whose original run is
// conclusive; a pure function of `limits`.
Program GenProgram(const GenLimits& limits);

}  // namespace arrayfree

#endif  // ARRAYFREE_HARNESS_H_
