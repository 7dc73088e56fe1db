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

// Command-line front end. Talks to the toolkit only through the C API.
//
// Exit codes: 0 success, 1 property violation or unsafe verdict, 2 usage,
// input or tool errors.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arrayfree/arrayfree.h"
#include "json.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kError = 2;

struct ProgramDeleter {
  void operator()(af_program* p) const { af_program_free(p); }
};
using ProgramPtr = std::unique_ptr<af_program, ProgramDeleter>;

struct StringDeleter {
  void operator()(char* s) const { af_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

std::string Take(char* s) {
  OwnedString owned(s);
  return s == nullptr ? std::string() : std::string(s);
}

int Report(af_status status) {
  std::cerr << "error: " << af_last_error() << "\n";
  return status == AF_OK ? kOk : kError;
}

bool WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::optional<std::string> ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Global {
  int width = 32;
  std::string nd_prefix;
  bool verbose = false;
};

const char* Prefix(const std::string& p) { return p.empty() ? nullptr : p.c_str(); }

int Load(const std::string& path, const Global& g, ProgramPtr* out) {
  af_program* p = nullptr;
  af_status s = af_program_load(path.c_str(), Prefix(g.nd_prefix), &p);
  if (s != AF_OK) return Report(s);
  out->reset(p);
  return kOk;
}

// ---- transform --------------------------------------------------------------

struct TransformArgs {
  std::string input;
  std::string output;
  std::string report;
};

int RunTransform(const TransformArgs& a, const Global& g) {
  ProgramPtr program;
  if (int rc = Load(a.input, g, &program)) return rc;
  af_transform_options options;
  af_transform_options_init(&options);
  options.width = g.width;
  options.nd_prefix = Prefix(g.nd_prefix);
  af_program* out = nullptr;
  char* report = nullptr;
  af_status s = af_transform(program.get(), &options, &out,
                             a.report.empty() ? nullptr : &report);
  if (s != AF_OK) return Report(s);
  ProgramPtr transformed(out);
  std::string report_text = Take(report);
  char* text = nullptr;
  s = af_program_emit(transformed.get(), Prefix(g.nd_prefix), nullptr, &text);
  if (s != AF_OK) return Report(s);
  if (!WriteText(a.output, Take(text))) return kError;
  if (!a.report.empty() && !WriteText(a.report, report_text)) return kError;
  return kOk;
}

// ---- facts / validate ---------------------------------------------------------

struct FactsArgs {
  std::string input;
  std::string output;
  bool json = false;
};

int RunFacts(const FactsArgs& a, const Global& g) {
  ProgramPtr program;
  if (int rc = Load(a.input, g, &program)) return rc;
  char* text = nullptr;
  af_status s = af_facts(program.get(), a.json ? 1 : 0, &text);
  if (s != AF_OK) return Report(s);
  return WriteText(a.output, Take(text)) ? kOk : kError;
}

int RunValidate(const std::string& input, const Global& g) {
  ProgramPtr program;
  if (int rc = Load(input, g, &program)) return rc;
  int conformant = 0;
  char* report = nullptr;
  af_status s = af_validate_transformed(program.get(), &conformant, &report);
  if (s != AF_OK) return Report(s);
  std::cout << Take(report);
  return conformant ? kOk : kViolation;
}

// ---- oracle -------------------------------------------------------------------

struct OracleArgs {
  std::string property;
  std::string input;
  std::string output;
  std::string cex_prefix;
  af_oracle_options options;
};

bool WriteCounterexample(const std::string& prefix, const std::string& json) {
  nlohmann::json doc = nlohmann::json::parse(json);
  std::string choices;
  for (const auto& v : doc["choices"]) {
    choices += std::to_string(v.get<std::uint64_t>()) + "\n";
  }
  return WriteText(prefix + ".json", json) &&
         WriteText(prefix + ".original.c",
                   doc["original"].get<std::string>()) &&
         WriteText(prefix + ".transformed.c",
                   doc["transformed"].get<std::string>()) &&
         WriteText(prefix + ".choices", choices);
}

int RunOracle(OracleArgs a, const Global& g) {
  ProgramPtr program;
  if (int rc = Load(a.input, g, &program)) return rc;
  af_property property = a.property == "soundness" ? AF_PROPERTY_SOUNDNESS
                         : a.property == "precision"
                             ? AF_PROPERTY_PRECISION
                             : AF_PROPERTY_REPRESENTS;
  a.options.width = g.width;
  af_verdict verdict;
  char* json = nullptr;
  char* cex = nullptr;
  af_status s = af_oracle_check(program.get(), property, &a.options, &verdict,
                                &json, &cex);
  if (s != AF_OK) return Report(s);
  std::string cex_text = Take(cex);
  if (!WriteText(a.output, Take(json))) return kError;
  if (!a.cex_prefix.empty() && !cex_text.empty()) {
    if (!WriteCounterexample(a.cex_prefix, cex_text)) return kError;
    if (g.verbose) std::cerr << "counterexample written to " << a.cex_prefix << ".*\n";
  }
  switch (verdict) {
    case AF_VERDICT_HOLDS:
    case AF_VERDICT_OUT_OF_CLASS:
      return kOk;
    case AF_VERDICT_VIOLATED:
    case AF_VERDICT_INCONCLUSIVE:
      return kViolation;
  }
  return kError;
}

int RunReplay(const std::string& path, const Global& g) {
  auto text = ReadText(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kError;
  }
  af_oracle_options options;
  af_oracle_options_init(&options);
  options.width = g.width;
  int matches = 0;
  af_status s = af_counterexample_replay(text->c_str(), &options, &matches);
  if (s != AF_OK) return Report(s);
  std::cout << (matches ? "reproduced\n" : "not reproduced\n");
  return matches ? kOk : kViolation;
}

// ---- verify / suite -------------------------------------------------------------

struct BmcArgs {
  std::string command;
  double timeout = 60;
  double grace = 1;
  std::string success_marker;
  std::string failure_marker;
  bool original = false;
};

// Fills the C options; the strings stay owned by `a`.
bool BmcOptions(const BmcArgs& a, af_bmc_options* o, bool required) {
  af_bmc_options_init(o);
  if (!a.command.empty()) {
    o->command = a.command.c_str();
  } else if (const char* env = std::getenv("ARRAYFREE_BMC")) {
    o->command = env;
  } else if (required) {
    std::cerr << "error: no BMC command: pass --bmc or set ARRAYFREE_BMC\n";
    return false;
  }
  o->timeout_seconds = a.timeout;
  o->grace_seconds = a.grace;
  if (!a.success_marker.empty()) o->success_marker = a.success_marker.c_str();
  if (!a.failure_marker.empty()) o->failure_marker = a.failure_marker.c_str();
  o->original_mode = a.original ? 1 : 0;
  return true;
}

int RunVerify(const std::string& input, const BmcArgs& bmc,
              const std::string& output) {
  af_bmc_options options;
  if (!BmcOptions(bmc, &options, true)) return kError;
  af_bmc_verdict verdict;
  char* json = nullptr;
  af_status s = af_bmc_verify(input.c_str(), &options, &verdict, &json);
  if (s != AF_OK) return Report(s);
  if (!WriteText(output, Take(json))) return kError;
  switch (verdict) {
    case AF_BMC_SAFE: return kOk;
    case AF_BMC_UNSAFE:
    case AF_BMC_TIMEOUT: return kViolation;
    case AF_BMC_TOOL_ERROR: return kError;
  }
  return kError;
}

struct SuiteArgs {
  std::string dir;
  BmcArgs bmc;
  std::string manifest;
  std::vector<std::string> outputs;
  std::string replay;
  std::string record;
  int jobs = 1;
  bool no_oracle = false;
};

int RunSuiteCommand(const SuiteArgs& a) {
  af_suite_options options;
  af_suite_options_init(&options);
  if (!BmcOptions(a.bmc, &options.bmc, a.replay.empty())) return kError;
  if (!a.manifest.empty()) options.manifest_path = a.manifest.c_str();
  if (!a.replay.empty()) options.replay_dir = a.replay.c_str();
  if (!a.record.empty()) options.record_dir = a.record.c_str();
  options.jobs = a.jobs;
  options.oracle_expectations = a.no_oracle ? 0 : 1;
  char* csv = nullptr;
  char* json = nullptr;
  af_suite_counts counts;
  af_status s = af_suite_run(a.dir.c_str(), &options, &csv, &json, &counts);
  if (s != AF_OK) return Report(s);
  std::string csv_text = Take(csv);
  std::string json_text = Take(json);
  if (a.outputs.empty()) {
    std::cout << csv_text;
  }
  for (const std::string& path : a.outputs) {
    bool is_json = std::filesystem::path(path).extension() == ".json";
    if (!WriteText(path, is_json ? json_text : csv_text)) return kError;
  }
  std::cerr << "programs " << counts.programs << ": correct-true "
            << counts.correct_true << ", correct-false " << counts.correct_false
            << ", incorrect-true " << counts.incorrect_true
            << ", incorrect-false " << counts.incorrect_false
            << ", no-result " << counts.no_result << "\n";
  return counts.incorrect_true + counts.incorrect_false > 0 ? kViolation : kOk;
}

// ---- gen ------------------------------------------------------------------------

struct GenArgs {
  std::string out;
  int count = 1;
  std::string manifest = "expected.txt";
  af_gen_limits limits;
};

int RunGen(GenArgs a, const Global& g) {
  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) {
    std::cerr << "error: cannot create " << a.out << "\n";
    return kError;
  }
  std::string manifest;
  std::uint64_t first = a.limits.seed;
  for (int k = 0; k < a.count; ++k) {
    a.limits.seed = first + static_cast<std::uint64_t>(k);
    af_program* raw = nullptr;
    af_status s = af_gen_program(&a.limits, &raw);
    if (s != AF_OK) return Report(s);
    ProgramPtr program(raw);
    char* text = nullptr;
    s = af_program_emit(program.get(), Prefix(g.nd_prefix), nullptr, &text);
    if (s != AF_OK) return Report(s);
    std::string name = "gen_" + std::to_string(a.limits.seed) + ".c";
    if (!WriteText((std::filesystem::path(a.out) / name).string(), Take(text))) {
      return kError;
    }
    int expectation = -1;
    s = af_program_expectation(program.get(), &expectation);
    if (s != AF_OK) return Report(s);
    if (expectation >= 0) {
      manifest += name + (expectation ? " safe\n" : " unsafe\n");
    }
  }
  if (!a.manifest.empty() &&
      !WriteText((std::filesystem::path(a.out) / a.manifest).string(),
                 manifest)) {
    return kError;
  }
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Rewrites array programs into array-free, loop-free programs "
               "and checks the rewrite.",
               "arrayfree"};
  app.set_version_flag("--version", std::string("arrayfree ") + af_version());
  Global g;
  app.add_option("--width", g.width, "Integer width in bits")
      ->check(CLI::Range(2, 64));
  app.add_option("--nd-prefix", g.nd_prefix,
                 "Spell choices as PREFIX() and PREFIX_range(l, u)");
  app.add_flag("-v,--verbose", g.verbose, "Extra diagnostics on stderr");
  app.require_subcommand(1);

  TransformArgs transform;
  auto* t = app.add_subcommand("transform", "Rewrite a program");
  t->add_option("input", transform.input, "Input program")
      ->required()
      ->check(CLI::ExistingFile);
  t->add_option("-o,--output", transform.output, "Output file (default stdout)");
  t->add_option("--report", transform.report, "Write rule counts as JSON");

  FactsArgs facts;
  auto* f = app.add_subcommand("facts", "Print loop facts and precision");
  f->add_option("input", facts.input, "Input program")
      ->required()
      ->check(CLI::ExistingFile);
  f->add_option("-o,--output", facts.output, "Output file (default stdout)");
  f->add_flag("--json", facts.json, "JSON instead of text records");

  std::string validate_input;
  auto* v = app.add_subcommand(
      "validate", "Check a program against the transformed-program grammar");
  v->add_option("input", validate_input, "Program")
      ->required()
      ->check(CLI::ExistingFile);

  OracleArgs oracle;
  af_oracle_options_init(&oracle.options);
  bool strict = false;
  auto* o = app.add_subcommand("oracle", "Differential check of a property");
  o->add_option("property", oracle.property,
                "soundness, precision or represents")
      ->required()
      ->check(CLI::IsMember({"soundness", "precision", "represents"}));
  o->add_option("input", oracle.input, "Original program")
      ->required()
      ->check(CLI::ExistingFile);
  o->add_option("--cap", oracle.options.cap, "Executions per enumeration")
      ->check(CLI::PositiveNumber);
  o->add_option("--fuel", oracle.options.fuel, "Statements per original run")
      ->check(CLI::PositiveNumber);
  o->add_option("--seed", oracle.options.seed, "Enumeration order seed");
  o->add_option("--range-cap", oracle.options.range_cap,
                "Widest nd(l, u) enumerated in full");
  o->add_option("--samples", oracle.options.samples,
                "Random resolutions tried before the exhaustive walk");
  o->add_flag("--strict", strict, "represents: no exemption for havocs");
  o->add_option("--cex", oracle.cex_prefix,
                "Write a counterexample to PREFIX.{json,original.c,"
                "transformed.c,choices}");
  o->add_option("-o,--output", oracle.output, "Verdict file (default stdout)");

  std::string replay_input;
  auto* r = app.add_subcommand("replay", "Replay a counterexample");
  r->add_option("counterexample", replay_input, "Counterexample JSON")
      ->required()
      ->check(CLI::ExistingFile);

  BmcArgs verify_bmc;
  std::string verify_input;
  std::string verify_output;
  auto add_bmc = [](CLI::App* cmd, BmcArgs* b) {
    cmd->add_option("--bmc", b->command,
                    "Verifier command with a {file} placeholder "
                    "(default $ARRAYFREE_BMC)");
    cmd->add_option("--timeout", b->timeout, "Seconds per program")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grace", b->grace, "Seconds between SIGTERM and SIGKILL")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--success-marker", b->success_marker,
                    "Output text of a safe verdict");
    cmd->add_option("--failure-marker", b->failure_marker,
                    "Output text of an unsafe verdict");
    cmd->add_flag("--original", b->original, "Verify without rewriting");
  };
  auto* vb = app.add_subcommand("verify", "Run a verifier on one program");
  vb->add_option("input", verify_input, "Program")
      ->required()
      ->check(CLI::ExistingFile);
  vb->add_option("-o,--output", verify_output, "Verdict file (default stdout)");
  add_bmc(vb, &verify_bmc);

  SuiteArgs suite;
  auto* su = app.add_subcommand("suite", "Verify every program of a directory");
  su->add_option("dir", suite.dir, "Corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_bmc(su, &suite.bmc);
  su->add_option("--expect", suite.manifest, "Manifest: name safe|unsafe")
      ->check(CLI::ExistingFile);
  su->add_option("--out", suite.outputs,
                 "Report file(s); .json for JSON, anything else CSV");
  su->add_option("--replay", suite.replay, "Recorded tool outputs")
      ->check(CLI::ExistingDirectory);
  su->add_option("--record", suite.record, "Record tool outputs here");
  su->add_option("--jobs", suite.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  su->add_flag("--no-oracle-expectations", suite.no_oracle,
               "Do not derive missing expectations from a concrete run");

  GenArgs gen;
  af_gen_limits_init(&gen.limits);
  auto* ge = app.add_subcommand("gen", "Generate random programs");
  ge->add_option("--out", gen.out, "Output directory")->required();
  ge->add_option("--seed", gen.limits.seed, "First seed");
  ge->add_option("--count", gen.count, "Number of programs")
      ->check(CLI::PositiveNumber);
  ge->add_option("--max-array-size", gen.limits.max_array_size)
      ->check(CLI::PositiveNumber);
  ge->add_option("--max-loop-bound", gen.limits.max_loop_bound)
      ->check(CLI::PositiveNumber);
  ge->add_option("--max-constant", gen.limits.max_constant)
      ->check(CLI::PositiveNumber);
  ge->add_option("--max-statements", gen.limits.max_statements)
      ->check(CLI::PositiveNumber);
  ge->add_option("--loop-weight", gen.limits.weight_full_loop,
                 "Weight of full traversals")
      ->check(CLI::NonNegativeNumber);
  ge->add_option("--partial-loop-weight", gen.limits.weight_partial_loop)
      ->check(CLI::NonNegativeNumber);
  ge->add_option("--manifest", gen.manifest,
                 "Manifest file name inside --out (empty to skip)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    app.exit(e, std::cerr, std::cerr);
    return kError;
  }

  oracle.options.strict = strict ? 1 : 0;
  if (t->parsed()) return RunTransform(transform, g);
  if (f->parsed()) return RunFacts(facts, g);
  if (v->parsed()) return RunValidate(validate_input, g);
  if (o->parsed()) return RunOracle(oracle, g);
  if (r->parsed()) return RunReplay(replay_input, g);
  if (vb->parsed()) return RunVerify(verify_input, verify_bmc, verify_output);
  if (su->parsed()) return RunSuiteCommand(suite);
  if (ge->parsed()) return RunGen(gen, g);
  return kError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
