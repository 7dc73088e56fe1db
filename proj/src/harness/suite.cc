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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "arrayfree/analysis.h"
#include "arrayfree/harness.h"
#include "arrayfree/oracle.h"
#include "internal.h"
#include "json.hpp"

namespace arrayfree {

using nlohmann::ordered_json;

const char* ExpectationName(Expectation e) {
  switch (e) {
    case Expectation::kSafe: return "safe";
    case Expectation::kUnsafe: return "unsafe";
    case Expectation::kUnknown: return "unknown";
  }
  return "?";
}

const char* CategoryName(Category c) {
  switch (c) {
    case Category::kCorrectTrue: return "correct-true";
    case Category::kCorrectFalse: return "correct-false";
    case Category::kIncorrectTrue: return "incorrect-true";
    case Category::kIncorrectFalse: return "incorrect-false";
    case Category::kNoResult: return "no-result";
  }
  return "?";
}

absl::StatusOr<std::map<std::string, Expectation>> ParseManifest(
    const std::string& text) {
  std::map<std::string, Expectation> out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::vector<std::string> cols =
        absl::StrSplit(line, absl::ByAnyChar(" \t,\r"), absl::SkipEmpty());
    if (cols.empty()) continue;
    if (cols.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("manifest line ", line_no, ": expected two columns"));
    }
    std::string verdict = absl::AsciiStrToLower(cols[1]);
    if (verdict == "safe" || verdict == "true") {
      out[cols[0]] = Expectation::kSafe;
    } else if (verdict == "unsafe" || verdict == "false") {
      out[cols[0]] = Expectation::kUnsafe;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "manifest line ", line_no, ": unknown verdict '", cols[1], "'"));
    }
  }
  return out;
}

Category Categorize(Expectation expected, VerdictKind verdict) {
  if (expected == Expectation::kUnknown) return Category::kNoResult;
  if (verdict == VerdictKind::kSafe) {
    return expected == Expectation::kSafe ? Category::kCorrectTrue
                                          : Category::kIncorrectTrue;
  }
  if (verdict == VerdictKind::kUnsafe) {
    return expected == Expectation::kUnsafe ? Category::kCorrectFalse
                                            : Category::kIncorrectFalse;
  }
  return Category::kNoResult;
}

int SuiteReport::Count(Category c) const {
  auto it = counts.find(c);
  return it == counts.end() ? 0 : it->second;
}

std::string SuiteReport::ToCsv() const {
  std::string out = "name,expected,verdict,seconds,precise\n";
  for (const SuiteRow& r : rows) {
    absl::StrAppendFormat(&out, "%s,%s,%s,%.3f,%s\n", r.name,
                          ExpectationName(r.expected),
                          r.verdict ? VerdictKindName(*r.verdict) : "none",
                          r.seconds, r.precise ? "true" : "false");
  }
  return out;
}

std::string SuiteReport::ToJson() const {
  ordered_json doc;
  doc["programs"] = rows.size();
  for (Category c : {Category::kCorrectTrue, Category::kCorrectFalse,
                     Category::kIncorrectTrue, Category::kIncorrectFalse,
                     Category::kNoResult}) {
    std::string key = CategoryName(c);
    std::replace(key.begin(), key.end(), '-', '_');
    doc[key] = Count(c);
  }
  doc["rows"] = ordered_json::array();
  for (const SuiteRow& r : rows) {
    ordered_json row;
    row["name"] = r.name;
    row["expected"] = ExpectationName(r.expected);
    row["expectation_source"] = r.expectation_source;
    row["verdict"] = r.verdict ? VerdictKindName(*r.verdict) : "none";
    row["seconds"] = std::stod(absl::StrFormat("%.3f", r.seconds));
    row["precise"] = r.precise;
    row["category"] = CategoryName(r.category);
    row["detail"] = r.detail;
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

namespace {

std::optional<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::StatusOr<ToolRun> LoadRecording(const std::filesystem::path& path) {
  auto text = ReadFile(path);
  if (!text) {
    return absl::NotFoundError(
        absl::StrCat("no recorded output at ", path.string()));
  }
  ordered_json j = ordered_json::parse(*text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed recording ", path.string()));
  }
  ToolRun run;
  run.launched = j.value("launched", false);
  run.timed_out = j.value("timed_out", false);
  run.exit_code = j.value("exit_code", -1);
  run.seconds = j.value("seconds", 0.0);
  run.output = j.value("output", std::string());
  return run;
}

void SaveRecording(const std::filesystem::path& path, const ToolRun& run) {
  ordered_json j;
  j["launched"] = run.launched;
  j["timed_out"] = run.timed_out;
  j["exit_code"] = run.exit_code;
  j["seconds"] = run.seconds;
  j["output"] = run.output;
  std::ofstream(path) << j.dump(2) << "\n";
}

SuiteRow RunOne(const std::filesystem::path& file, const SuiteOptions& options) {
  SuiteRow row;
  row.name = file.filename().string();
  std::string stem = file.stem().string();
  for (const std::string& key : {row.name, stem}) {
    auto it = options.expectations.find(key);
    if (it != options.expectations.end()) {
      row.expected = it->second;
      row.expectation_source = "manifest";
      break;
    }
  }
  auto source = ReadFile(file);
  if (!source) {
    row.detail = "cannot read file";
    return row;
  }
  auto program = ParseProgram(*source);
  if (!program.ok()) {
    row.detail = std::string(program.status().message());
    return row;
  }
  row.precise = options.mode == BmcMode::kOriginal ||
                ClassifyPrecision(*program).AllQualify();
  if (row.expected == Expectation::kUnknown && options.oracle_expectations) {
    Outcome outcome = RunOriginal(*program);
    if (outcome.conclusive()) {
      row.expected = outcome.failed.empty() ? Expectation::kSafe
                                            : Expectation::kUnsafe;
      row.expectation_source = "oracle";
    }
  }

  absl::StatusOr<ToolRun> run;
  if (options.replay_dir) {
    run = LoadRecording(std::filesystem::path(*options.replay_dir) /
                        (row.name + ".json"));
  } else {
    auto text = PrepareForBmc(*program, options.bmc, options.mode);
    if (!text.ok()) {
      row.detail = std::string(text.status().message());
      return row;
    }
    run = harness_internal::RunBmcOnText(*text, options.bmc);
    if (run.ok() && options.record_dir) {
      SaveRecording(std::filesystem::path(*options.record_dir) /
                        (row.name + ".json"),
                    *run);
    }
  }
  if (!run.ok()) {
    row.detail = std::string(run.status().message());
    return row;
  }
  Verdict verdict = ClassifyToolRun(*run, options.bmc, row.precise);
  row.verdict = verdict.kind;
  row.seconds = verdict.seconds;
  row.category = Categorize(row.expected, verdict.kind);
  if (verdict.kind == VerdictKind::kToolError) {
    row.detail = verdict.output.substr(0, 200);
  } else if (verdict.kind == VerdictKind::kUnsafe && !row.precise) {
    row.detail = "possible false alarm: some assertion does not qualify";
  }
  return row;
}

}  // namespace

absl::StatusOr<SuiteReport> RunSuite(const std::string& dir,
                                     const SuiteOptions& options) {
  if (!options.replay_dir) {
    if (absl::Status s = options.bmc.Validate(); !s.ok()) return s;
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    return absl::NotFoundError(absl::StrCat("not a directory: ", dir));
  }
  if (options.record_dir) {
    std::filesystem::create_directories(*options.record_dir, ec);
    if (ec) {
      return absl::InternalError(
          absl::StrCat("cannot create ", *options.record_dir));
    }
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".c") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  SuiteReport report;
  report.rows.resize(files.size());
  std::mutex mu;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < files.size(); k = next++) {
      SuiteRow row = RunOne(files[k], options);
      std::lock_guard<std::mutex> lock(mu);
      ++report.counts[row.category];
      report.rows[k] = std::move(row);
    }
  };
  int jobs = std::max(1, std::min<int>(options.jobs, files.size()));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return report;
}

}  // namespace arrayfree
