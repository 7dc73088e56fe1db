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

// Acceptance suite: one PASS, FAIL or SKIP line per criterion. Exits nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "arrayfree/analysis.h"
#include "arrayfree/frontend.h"
#include "arrayfree/harness.h"
#include "arrayfree/oracle.h"
#include "arrayfree/transform.h"

namespace arrayfree {
namespace {

// Tolerances.
constexpr double kGoldenSeconds = 1.0;
constexpr int kConformancePrograms = 1000;
constexpr double kConformanceSeconds = 60.0;
constexpr int kUnsafePrograms = 500;
constexpr std::uint64_t kExecutionsPerEnumeration = 100'000;
constexpr double kSoundnessSeconds = 600.0;
constexpr int kQualifyingPrograms = 200;
constexpr double kPrecisionSeconds = 600.0;
constexpr int kRoundTripPrograms = 1000;
constexpr double kBmcTransformedSeconds = 30.0;
constexpr double kBmcOriginalTimeout = 60.0;

struct Result {
  enum Kind { kPass, kFail, kSkip } kind = kPass;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<Program> ParseOrNull(const std::string& text) {
  auto p = ParseProgram(text);
  if (!p.ok()) return std::nullopt;
  return *std::move(p);
}

Program Generated(std::uint64_t seed) {
  GenLimits limits;  // arrays of at most 4 cells, bounds at most 4, 12 stmts
  limits.seed = seed;
  return GenProgram(limits);
}

Result Check(bool ok, std::string detail) {
  return {ok ? Result::kPass : Result::kFail, std::move(detail)};
}

Result GoldenTransform() {
  std::string records_text = ReadFile(ARRAYFREE_TEST_DATA_DIR "/records.c");
  Timer timer;
  auto records = ParseOrNull(records_text);
  if (!records) return Check(false, "the records example does not parse");
  auto result = TransformProgram(*records);
  double seconds = timer.seconds();
  if (!result.ok()) return Check(false, std::string(result.status().message()));
  auto expected = ParseOrNull(ReadFile(ARRAYFREE_TEST_DATA_DIR "/records_rewritten.c"));
  if (!expected) return Check(false, "expected rewrite does not parse");
  std::map<std::string, std::string> renaming;
  bool equal = StructurallyEqual(result->program, *expected, &renaming);
  return Check(equal && seconds < kGoldenSeconds,
               absl::StrFormat("structurally equal: %s, %.3f s (limit %.0f s)",
                               equal ? "yes" : "no", seconds, kGoldenSeconds));
}

Result Conformance() {
  Timer timer;
  int bad = 0;
  for (int seed = 0; seed < kConformancePrograms; ++seed) {
    auto result = TransformProgram(Generated(seed));
    if (!result.ok() || !ValidateTransformed(result->program).conformant()) {
      ++bad;
    }
  }
  double seconds = timer.seconds();
  return Check(bad == 0 && seconds < kConformanceSeconds,
               absl::StrFormat("%d programs, %d non-conformant, %.1f s "
                               "(limit %.0f s)",
                               kConformancePrograms, bad, seconds,
                               kConformanceSeconds));
}

Result Soundness() {
  Timer timer;
  OracleConfig config;
  config.cap = kExecutionsPerEnumeration;
  int checked = 0, holds = 0;
  std::uint64_t max_executions = 0;
  std::string first_problem;
  for (std::uint64_t seed = 0; checked < kUnsafePrograms && seed < 100'000;
       ++seed) {
    Program p = Generated(seed);
    if (RunOriginal(p, config, 0).failed.empty()) continue;
    ++checked;
    DiffVerdict v = CheckSoundness(p, config);
    max_executions = std::max(max_executions, v.executions);
    if (v.holds()) {
      ++holds;
    } else if (first_problem.empty()) {
      first_problem = absl::StrCat(", seed ", seed, ": ",
                                   VerdictStatusName(v.status), " ", v.detail);
    }
  }
  double seconds = timer.seconds();
  return Check(checked >= kUnsafePrograms && holds == checked &&
                   seconds < kSoundnessSeconds,
               absl::StrFormat("%d/%d unsafe programs hold, at most %d "
                               "executions per program (cap %d per "
                               "enumeration), %.1f s (limit %.0f s)%s",
                               holds, checked, max_executions,
                               kExecutionsPerEnumeration, seconds,
                               kSoundnessSeconds, first_problem));
}

Result Precision() {
  Timer timer;
  int checked = 0, holds = 0;
  std::string first_problem;
  for (std::uint64_t seed = 0; checked < kQualifyingPrograms && seed < 100'000;
       ++seed) {
    Program p = Generated(seed);
    if (!ClassifyPrecision(p).AllQualify()) continue;
    if (!RunOriginal(p, {}, 0).failed.empty() ||
        !RunOriginal(p, {}, 1).failed.empty()) {
      continue;
    }
    ++checked;
    DiffVerdict v = CheckPrecisionEmpirical(p);
    if (v.holds()) {
      ++holds;
    } else if (first_problem.empty()) {
      first_problem = absl::StrCat(", seed ", seed, ": ",
                                   VerdictStatusName(v.status), " ", v.detail);
    }
  }
  double seconds = timer.seconds();
  return Check(checked >= kQualifyingPrograms && holds == checked &&
                   seconds < kPrecisionSeconds,
               absl::StrFormat("%d/%d qualifying safe programs hold, %.1f s "
                               "(limit %.0f s)%s",
                               holds, checked, seconds, kPrecisionSeconds,
                               first_problem));
}

// Straight-line and full-traversal programs over arrays of at most 3 cells.
const char* const kTinyPrograms[] = {
    "int a[1]; int x; main() { a[0] = 5; x = a[0]; assert(x == 5); }",
    "int a[2]; int x; main() { a[1] = 3; assert(a[1] == 3); }",
    "int a[3]; int x; main() { a[0] = 1; a[2] = 2; x = a[0] + a[2]; "
    "assert(x == 3); }",
    "int a[3]; int i; main() { for (i = 0; i < 3; i++) { a[i] = i; } "
    "for (i = 0; i < 3; i++) { assert(a[i] == i); } }",
    "int a[2]; int i; main() { for (i = 0; i < 2; i++) { a[i] = 7; } "
    "for (i = 0; i < 2; i++) { assert(a[i] == 7); } }",
    "int a[3]; int i, k; main() { for (i = 0; i < 3; i++) { k = i + 1; "
    "a[i] = k; } for (i = 0; i <= 2; i++) { assert(a[i] > 0); } }",
    "struct S { int p; int q; } a[2]; int i; main() { for (i = 0; i < 2; i++) "
    "{ a[i].p = i; a[i].q = i * i; } for (i = 0; i < 2; i++) "
    "{ assert(a[i].q == a[i].p * a[i].p); } }",
    "int a[3]; int x, y; main() { x = 2; a[x] = 4; y = a[2]; assert(y == 4); }",
    "int a[2]; int x; main() { x = 1; if (x == 1) { a[0] = 9; } else "
    "{ a[1] = 9; } assert(a[0] == 9); }",
    "int a[3]; int i; main() { for (i = 0; i < 3; i++) { a[i] = 0; } "
    "a[1] = 1; assert(a[1] == 1); }",
    "unsigned int a[2]; unsigned int u; main() { a[0] = 4294967295u; "
    "u = a[0] + 1u; assert(u == 0u); }",
    "int a[2], b[2]; int i; main() { for (i = 0; i < 2; i++) { a[i] = i; } "
    "for (i = 0; i < 2; i++) { b[i] = a[i] + 1; } "
    "for (i = 0; i < 2; i++) { assert(b[i] == a[i] + 1); } }",
    "int a[3]; int s, i; main() { s = 0; for (i = 0; i < 3; i++) "
    "{ a[i] = 2; } for (i = 0; i < 3; i++) { assert(a[i] == 2); } s = 1; }",
    "int a[1]; int i; main() { for (i = 0; i < 1; i++) { a[i] = 3; "
    "assert(a[i] == 3); } }",
    "int a[3]; int i; main() { for (i = 0; i < 3; i++) { if (i > 0) "
    "{ a[i] = 1; } else { a[i] = 2; } } for (i = 0; i < 3; i++) "
    "{ assert(a[i] >= 1); } }",
    "int a[2]; int x; main() { a[0] = 1; a[1] = a[0] + 1; x = a[1]; "
    "assert(x == 2); }",
    "int a[3]; int i, t; main() { for (i = 0; i < 3; i++) { t = i * 2; "
    "a[i] = t; } for (i = 0; i < 3; i++) { assert(a[i] % 2 == 0); } }",
    "int a[2]; int i; main() { for (i = 0; i < 2; i++) { a[i] = i; } "
    "for (i = 0; i < 2; i++) { assert(a[i] < 2); } }",
    "int a[3]; int x; main() { x = 0; a[0] = x; a[1] = x; a[2] = x; "
    "assert(a[0] == a[2]); }",
    "struct S { unsigned int p; int q; } a[3]; int i; main() "
    "{ for (i = 0; i < 3; i++) { a[i].p = 1u; a[i].q = 0 - 1; } "
    "for (i = 0; i < 3; i++) { assert(a[i].q < 0); } }",
};

Result Represents() {
  int total = 0, holds = 0;
  std::string first_problem;
  for (const char* text : kTinyPrograms) {
    ++total;
    auto p = ParseOrNull(text);
    if (!p) {
      if (first_problem.empty()) first_problem = absl::StrCat(", parse: ", text);
      continue;
    }
    DiffVerdict v = CheckRepresents(*p);
    if (v.holds()) {
      ++holds;
    } else if (first_problem.empty()) {
      first_problem = absl::StrCat(", program ", total, ": ",
                                   VerdictStatusName(v.status), " ", v.detail);
    }
  }
  return Check(total == 20 && holds == total,
               absl::StrCat(holds, "/", total, " programs hold",
                            first_problem));
}

Result RoundTrip() {
  int mismatches = 0;
  for (int seed = 0; seed < kRoundTripPrograms; ++seed) {
    std::string text = Emit(Generated(seed));
    auto once = ParseOrNull(text);
    if (!once) {
      ++mismatches;
      continue;
    }
    std::string again_text = Emit(*once);
    auto twice = ParseOrNull(again_text);
    if (!twice || again_text != text || !StructurallyEqual(*once, *twice)) {
      ++mismatches;
    }
  }
  return Check(mismatches == 0, absl::StrCat(kRoundTripPrograms,
                                             " programs, ", mismatches,
                                             " mismatches"));
}

Result ClassifierSanity() {
  std::string records_text = ReadFile(ARRAYFREE_TEST_DATA_DIR "/records.c");
  auto records = ParseOrNull(records_text);
  std::string mutated_text = records_text;
  size_t at = mutated_text.find("i < 100000");
  if (!records || at == std::string::npos) return Check(false, "bad fixture");
  mutated_text.replace(at, 10, "i < 50000");
  auto mutated = ParseOrNull(mutated_text);
  if (!mutated) return Check(false, "mutated fixture does not parse");
  PrecisionReport before = ClassifyPrecision(*records);
  PrecisionReport after = ClassifyPrecision(*mutated);
  bool qualifies = before.assertions.size() == 1 &&
                   before.assertions[0].violated.empty() &&
                   before.assertions[0].qualifies &&
                   before.assertions[0].relaxation_applied;
  bool flips = after.assertions.size() == 1 &&
               after.assertions[0].violated.count(PrecisionRule::kL1) > 0;
  return Check(qualifies && flips,
               absl::StrCat("records example qualifies with relaxation: ",
                            qualifies ? "yes" : "no",
                            ", bound 50000 violates l1: ",
                            flips ? "yes" : "no"));
}

std::optional<std::string> BmcCommand() {
  if (const char* env = std::getenv("ARRAYFREE_BMC"); env && *env) return env;
  if (std::system("command -v cbmc > /dev/null 2>&1") == 0) {
    return std::string("cbmc {file}");
  }
  return std::nullopt;
}

Result BmcSmoke() {
  std::optional<std::string> command = BmcCommand();
  if (!command) {
    return {Result::kSkip, "no BMC configured (set ARRAYFREE_BMC or put "
                           "cbmc on PATH)"};
  }
  auto config = BmcConfig::FromTemplate(*command);
  if (!config.ok()) return Check(false, std::string(config.status().message()));
  std::string records = ARRAYFREE_TEST_DATA_DIR "/records.c";
  config->timeout_seconds = kBmcTransformedSeconds;
  auto transformed = VerifyWithBmc(records, *config, BmcMode::kTransformed);
  config->timeout_seconds = kBmcOriginalTimeout;
  auto original = VerifyWithBmc(records, *config, BmcMode::kOriginal);
  if (!transformed.ok() || !original.ok()) {
    return Check(false, "cannot run the BMC on the records example");
  }
  bool ok = transformed->kind == VerdictKind::kSafe &&
            transformed->seconds < kBmcTransformedSeconds &&
            original->kind == VerdictKind::kTimeout;
  return Check(ok, absl::StrFormat(
                       "transformed: %s in %.1f s (limit %.0f s), original: "
                       "%s (timeout %.0f s)",
                       VerdictKindName(transformed->kind), transformed->seconds,
                       kBmcTransformedSeconds,
                       VerdictKindName(original->kind), kBmcOriginalTimeout));
}

int Main() {
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const Criterion criteria[] = {
      {"golden transform", GoldenTransform},
      {"grammar conformance", Conformance},
      {"soundness property", Soundness},
      {"precision property", Precision},
      {"represents relation", Represents},
      {"round trip", RoundTrip},
      {"precision classifier sanity", ClassifierSanity},
      {"BMC smoke test", BmcSmoke},
  };
  int failures = 0;
  int n = 0;
  for (const Criterion& c : criteria) {
    Result r = c.run();
    const char* tag = r.kind == Result::kPass   ? "PASS"
                      : r.kind == Result::kFail ? "FAIL"
                                                : "SKIP";
    failures += r.kind == Result::kFail;
    std::printf("[%s] %d %s: %s\n", tag, ++n, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace arrayfree

int main() { return arrayfree::Main(); }
