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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "arrayfree/analysis.h"
#include "arrayfree/harness.h"
#include "arrayfree/transform.h"
#include "internal.h"

namespace arrayfree {

std::string CbmcPrelude(const NdNaming& nd) {
  return absl::StrCat(
      "#include <assert.h>\n"
      "int nondet_int(void);\n"
      "int ", nd.unbounded, "(void) { return nondet_int(); }\n"
      "int ", nd.ranged, "(int l, int u)\n"
      "{\n"
      "  int v = nondet_int();\n"
      "  __CPROVER_assume(l <= v && v <= u);\n"
      "  return v;\n"
      "}\n\n");
}

std::string StubPrelude(const NdNaming& nd) {
  return absl::StrCat(
      "#include <assert.h>\n"
      "#include <stdlib.h>\n"
      "int ", nd.unbounded, "(void) { return rand(); }\n"
      "int ", nd.ranged, "(int l, int u)\n"
      "{\n"
      "  unsigned span = (unsigned)u - (unsigned)l + 1u;\n"
      "  unsigned r = (unsigned)rand();\n"
      "  return span ? (int)((unsigned)l + r % span) : (int)r;\n"
      "}\n\n");
}

absl::Status BmcConfig::Validate() const {
  if (command.empty()) return absl::InvalidArgumentError("empty BMC command");
  int placeholders = 0;
  for (const std::string& arg : command) {
    size_t pos = 0;
    while ((pos = arg.find(kFilePlaceholder, pos)) != std::string::npos) {
      ++placeholders;
      pos += 1;
    }
  }
  if (placeholders != 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "BMC command must contain exactly one ", kFilePlaceholder,
        " placeholder, found ", placeholders));
  }
  if (!(timeout_seconds > 0)) {
    return absl::InvalidArgumentError("BMC timeout must be positive");
  }
  if (grace_seconds < 0) {
    return absl::InvalidArgumentError("grace period must not be negative");
  }
  if (nd.unbounded == nd.ranged) {
    return absl::InvalidArgumentError(
        "C targets need distinct names for nd() and nd(l, u)");
  }
  return absl::OkStatus();
}

absl::StatusOr<BmcConfig> BmcConfig::FromTemplate(const std::string& text) {
  BmcConfig config;
  config.command = absl::StrSplit(text, absl::ByAnyChar(" \t"),
                                  absl::SkipEmpty());
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  return config;
}

const char* VerdictKindName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kSafe: return "safe";
    case VerdictKind::kUnsafe: return "unsafe";
    case VerdictKind::kTimeout: return "timeout";
    case VerdictKind::kToolError: return "tool-error";
  }
  return "?";
}

std::optional<VerdictKind> VerdictKindFromName(const std::string& name) {
  for (VerdictKind k : {VerdictKind::kSafe, VerdictKind::kUnsafe,
                        VerdictKind::kTimeout, VerdictKind::kToolError}) {
    if (name == VerdictKindName(k)) return k;
  }
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

ToolRun RunTool(const std::vector<std::string>& argv, double timeout_seconds,
                double grace_seconds) {
  ToolRun run;
  if (argv.empty()) {
    run.output = "empty command";
    return run;
  }
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    run.output = "pipe failed";
    return run;
  }
  // Reports a failed exec to the parent.
  int status_fds[2];
  if (pipe2(status_fds, O_CLOEXEC) != 0) {
    close(fds[0]);
    close(fds[1]);
    run.output = "pipe failed";
    return run;
  }
  std::vector<char*> args;
  for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  Clock::time_point start = Clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {fds[0], fds[1], status_fds[0], status_fds[1]}) close(fd);
    run.output = "fork failed";
    return run;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    execvp(args[0], args.data());
    int err = errno;
    ssize_t ignored = write(status_fds[1], &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);
  close(status_fds[1]);
  int exec_errno = 0;
  bool exec_failed =
      read(status_fds[0], &exec_errno, sizeof(exec_errno)) ==
      static_cast<ssize_t>(sizeof(exec_errno));
  close(status_fds[0]);

  std::string output;
  bool terminated = false;
  bool killed = false;
  Clock::time_point term_at;
  char buffer[4096];
  while (true) {
    double elapsed = Since(start);
    if (!terminated && elapsed >= timeout_seconds) {
      kill(-pid, SIGTERM);
      terminated = true;
      run.timed_out = true;
      term_at = Clock::now();
    }
    if (terminated && !killed && Since(term_at) >= grace_seconds) {
      kill(-pid, SIGKILL);
      killed = true;
    }
    double wait = terminated ? grace_seconds - Since(term_at)
                             : timeout_seconds - elapsed;
    int wait_ms = killed ? 100 : std::max(1, static_cast<int>(wait * 1000));
    pollfd pfd{fds[0], POLLIN, 0};
    int ready = poll(&pfd, 1, std::min(wait_ms, 100));
    if (ready > 0) {
      ssize_t n = read(fds[0], buffer, sizeof(buffer));
      if (n > 0) {
        output.append(buffer, n);
        continue;
      }
      if (n == 0) break;  // every writer is gone
    }
    int status;
    if (waitpid(pid, &status, WNOHANG) == pid) {
      // Drain what the tool wrote before exiting.
      while (true) {
        pollfd drain{fds[0], POLLIN, 0};
        if (poll(&drain, 1, 0) <= 0) break;
        ssize_t n = read(fds[0], buffer, sizeof(buffer));
        if (n <= 0) break;
        output.append(buffer, n);
      }
      close(fds[0]);
      if (terminated) kill(-pid, SIGKILL);
      run.seconds = Since(start);
      run.launched = !exec_failed;
      run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      run.output = exec_failed ? absl::StrCat("cannot execute '", argv[0],
                                              "': ", strerror(exec_errno))
                               : std::move(output);
      return run;
    }
  }
  close(fds[0]);
  // Output closed; collect the exit status, still honouring the timeout.
  int status = 0;
  while (waitpid(pid, &status, WNOHANG) != pid) {
    if (!terminated && Since(start) >= timeout_seconds) {
      kill(-pid, SIGTERM);
      terminated = true;
      run.timed_out = true;
      term_at = Clock::now();
    }
    if (terminated && !killed && Since(term_at) >= grace_seconds) {
      kill(-pid, SIGKILL);
      killed = true;
    }
    usleep(2000);
  }
  if (terminated) kill(-pid, SIGKILL);
  run.seconds = Since(start);
  run.launched = !exec_failed;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.output = exec_failed ? absl::StrCat("cannot execute '", argv[0],
                                          "': ", strerror(exec_errno))
                           : std::move(output);
  return run;
}

Verdict ClassifyToolRun(const ToolRun& run, const BmcConfig& config,
                        bool precise) {
  Verdict v;
  v.seconds = run.seconds;
  v.precise = precise;
  v.output = run.output;
  if (!run.launched) {
    v.kind = VerdictKind::kToolError;
  } else if (run.timed_out) {
    v.kind = VerdictKind::kTimeout;
  } else if (absl::StrContains(run.output, config.failure_marker)) {
    v.kind = VerdictKind::kUnsafe;
  } else if (absl::StrContains(run.output, config.success_marker)) {
    v.kind = VerdictKind::kSafe;
  } else {
    v.kind = VerdictKind::kToolError;
  }
  return v;
}

absl::StatusOr<std::string> PrepareForBmc(const Program& program,
                                          const BmcConfig& config,
                                          BmcMode mode) {
  EmitOptions emit;
  emit.nd = config.nd;
  emit.prelude = config.prelude;
  if (mode == BmcMode::kOriginal) return Emit(program, emit);
  TransformConfig tc;
  tc.nd = config.nd;
  auto result = TransformProgram(program, tc);
  if (!result.ok()) return result.status();
  return Emit(result->program, emit);
}

absl::StatusOr<Verdict> VerifyWithBmc(const std::string& file,
                                      const BmcConfig& config, BmcMode mode) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  std::ifstream in(file);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", file));
  std::stringstream source;
  source << in.rdbuf();
  auto program = ParseProgram(source.str());
  if (!program.ok()) return program.status();
  auto text = PrepareForBmc(*program, config, mode);
  if (!text.ok()) return text.status();
  bool precise =
      mode == BmcMode::kOriginal || ClassifyPrecision(*program).AllQualify();
  auto run = harness_internal::RunBmcOnText(*text, config);
  if (!run.ok()) return run.status();
  return ClassifyToolRun(*run, config, precise);
}

namespace harness_internal {

absl::StatusOr<ToolRun> RunBmcOnText(const std::string& text,
                                     const BmcConfig& config) {
  std::string path =
      (std::filesystem::temp_directory_path() / "arrayfree_XXXXXX.c").string();
  int fd = mkstemps(path.data(), 2);
  if (fd < 0) return absl::InternalError("cannot create a temporary file");
  {
    std::ofstream out(path);
    out << text;
  }
  close(fd);
  std::vector<std::string> argv;
  for (const std::string& arg : config.command) {
    argv.push_back(absl::StrReplaceAll(arg, {{kFilePlaceholder, path}}));
  }
  ToolRun run = RunTool(argv, config.timeout_seconds, config.grace_seconds);
  std::filesystem::remove(path);
  return run;
}

}  // namespace harness_internal

}  // namespace arrayfree
