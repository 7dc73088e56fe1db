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

#include "arrayfree/arrayfree.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "arrayfree/analysis.h"
#include "arrayfree/frontend.h"
#include "arrayfree/harness.h"
#include "arrayfree/oracle.h"
#include "arrayfree/transform.h"
#include "json.hpp"

struct af_program {
  arrayfree::Program program;
};

namespace {

using arrayfree::Program;

thread_local std::string last_error;

af_status Fail(af_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

af_status FromStatus(const absl::Status& s, af_status fallback) {
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
      return Fail(fallback, std::string(s.message()));
    case absl::StatusCode::kUnimplemented:
      return Fail(AF_ERR_UNSUPPORTED, std::string(s.message()));
    case absl::StatusCode::kNotFound:
      return Fail(AF_ERR_IO, std::string(s.message()));
    default:
      return Fail(AF_ERR_INTERNAL, std::string(s.message()));
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Put(char** out, const std::string& s) {
  if (out != nullptr) *out = Dup(s);
}

arrayfree::NdNaming Naming(const char* prefix) {
  if (prefix == nullptr || *prefix == '\0') return {};
  return arrayfree::NdNaming::FromPrefix(prefix);
}

// Runs `body`, turning escaped exceptions into AF_ERR_INTERNAL.
template <typename Fn>
af_status Guard(Fn&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const std::exception& e) {
    return Fail(AF_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(AF_ERR_INTERNAL, "unknown error");
  }
}

af_status Wrap(absl::StatusOr<Program> program, af_program** out,
               af_status fallback) {
  if (!program.ok()) return FromStatus(program.status(), fallback);
  *out = new af_program{*std::move(program)};
  return AF_OK;
}

arrayfree::OracleConfig OracleConfigFrom(const af_oracle_options* o) {
  af_oracle_options defaults;
  af_oracle_options_init(&defaults);
  if (o == nullptr) o = &defaults;
  arrayfree::OracleConfig c;
  c.width = o->width;
  c.fuel = o->fuel;
  c.cap = o->cap;
  c.range_cap = o->range_cap;
  c.samples = o->samples;
  c.seed = o->seed;
  return c;
}

absl::StatusOr<arrayfree::BmcConfig> BmcConfigFrom(const af_bmc_options* o) {
  if (o->command == nullptr) {
    return absl::InvalidArgumentError("no BMC command configured");
  }
  auto config = arrayfree::BmcConfig::FromTemplate(o->command);
  if (!config.ok()) return config;
  config->timeout_seconds = o->timeout_seconds;
  config->grace_seconds = o->grace_seconds;
  if (o->success_marker != nullptr) config->success_marker = o->success_marker;
  if (o->failure_marker != nullptr) config->failure_marker = o->failure_marker;
  if (o->nd_prefix != nullptr) {
    config->nd = arrayfree::NdNaming::FromPrefix(o->nd_prefix);
    config->prelude = arrayfree::CbmcPrelude(config->nd);
  }
  if (absl::Status s = config->Validate(); !s.ok()) return s;
  return config;
}

}  // namespace

extern "C" {

const char* af_version(void) { return ARRAYFREE_VERSION; }

const char* af_last_error(void) { return last_error.c_str(); }

void af_string_free(char* s) { std::free(s); }

af_status af_program_parse(const char* source, const char* nd_prefix,
                           af_program** out) {
  return Guard([&] {
    if (source == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::ParseOptions options;
    options.nd = Naming(nd_prefix);
    return Wrap(arrayfree::ParseProgram(source, options), out, AF_ERR_SYNTAX);
  });
}

af_status af_program_load(const char* path, const char* nd_prefix,
                          af_program** out) {
  return Guard([&] {
    if (path == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    std::ifstream in(path);
    if (!in) return Fail(AF_ERR_IO, absl::StrCat("cannot read ", path));
    std::stringstream buffer;
    buffer << in.rdbuf();
    arrayfree::ParseOptions options;
    options.nd = Naming(nd_prefix);
    auto program = arrayfree::ParseProgram(buffer.str(), options);
    if (!program.ok()) {
      return FromStatus(
          absl::Status(program.status().code(),
                       absl::StrCat(path, ":", program.status().message())),
          AF_ERR_SYNTAX);
    }
    return Wrap(std::move(program), out, AF_ERR_SYNTAX);
  });
}

void af_program_free(af_program* program) { delete program; }

af_status af_program_emit(const af_program* program, const char* nd_prefix,
                          const char* prelude, char** out) {
  return Guard([&] {
    if (program == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::EmitOptions options;
    options.nd = Naming(nd_prefix);
    if (prelude != nullptr) options.prelude = prelude;
    Put(out, arrayfree::Emit(program->program, options));
    return AF_OK;
  });
}

void af_transform_options_init(af_transform_options* options) {
  options->width = arrayfree::kDefaultIntWidth;
  options->nd_prefix = nullptr;
}

af_status af_transform(const af_program* input,
                       const af_transform_options* options, af_program** out,
                       char** report_json) {
  return Guard([&] {
    if (input == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::TransformConfig config;
    if (options != nullptr) {
      config.width = options->width;
      config.nd = Naming(options->nd_prefix);
    }
    auto result = arrayfree::TransformProgram(input->program, config);
    if (!result.ok()) return FromStatus(result.status(), AF_ERR_TRANSFORM);
    Put(report_json, result->report.ToJson());
    *out = new af_program{std::move(result->program)};
    return AF_OK;
  });
}

af_status af_validate_transformed(const af_program* program, int* conformant,
                                  char** report_json) {
  return Guard([&] {
    if (program == nullptr || conformant == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::ConformanceReport report =
        arrayfree::ValidateTransformed(program->program);
    *conformant = report.conformant() ? 1 : 0;
    if (report_json != nullptr) {
      nlohmann::ordered_json j;
      j["conformant"] = report.conformant();
      j["loops"] = report.Count(arrayfree::ViolationKind::kLoop);
      j["array_accesses"] = report.Count(arrayfree::ViolationKind::kArrayAccess);
      j["bad_ranges"] = report.Count(arrayfree::ViolationKind::kBadNdRange);
      j["violations"] = nlohmann::ordered_json::array();
      for (const auto& v : report.violations) {
        j["violations"].push_back(
            {{"span", absl::StrCat(v.span.line, ":", v.span.column)},
             {"detail", v.detail}});
      }
      Put(report_json, j.dump(2) + "\n");
    }
    return AF_OK;
  });
}

af_status af_facts(const af_program* program, int json, char** out) {
  return Guard([&] {
    if (program == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    Put(out, json ? arrayfree::FormatFactsJson(program->program)
                  : arrayfree::FormatFacts(program->program));
    return AF_OK;
  });
}

af_status af_precision_all_qualify(const af_program* program,
                                   int* all_qualify) {
  return Guard([&] {
    if (program == nullptr || all_qualify == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    *all_qualify =
        arrayfree::ClassifyPrecision(program->program).AllQualify() ? 1 : 0;
    return AF_OK;
  });
}

void af_oracle_options_init(af_oracle_options* options) {
  arrayfree::OracleConfig c;
  options->width = c.width;
  options->fuel = c.fuel;
  options->cap = c.cap;
  options->range_cap = c.range_cap;
  options->samples = c.samples;
  options->seed = c.seed;
  options->strict = 0;
}

af_status af_oracle_check(const af_program* original, af_property property,
                          const af_oracle_options* options, af_verdict* verdict,
                          char** verdict_json, char** counterexample_json) {
  return Guard([&] {
    if (original == nullptr || verdict == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::OracleConfig config = OracleConfigFrom(options);
    if (config.width < 2 || config.width > 64 || config.cap == 0) {
      return Fail(AF_ERR_INVALID_ARGUMENT,
                  "width must be in 2..64 and cap positive");
    }
    arrayfree::DiffVerdict v;
    switch (property) {
      case AF_PROPERTY_SOUNDNESS:
        v = arrayfree::CheckSoundness(original->program, config);
        break;
      case AF_PROPERTY_PRECISION:
        v = arrayfree::CheckPrecisionEmpirical(original->program, config);
        break;
      case AF_PROPERTY_REPRESENTS:
        v = arrayfree::CheckRepresents(original->program, config,
                                       options != nullptr && options->strict);
        break;
      default:
        return Fail(AF_ERR_INVALID_ARGUMENT, "unknown property");
    }
    *verdict = static_cast<af_verdict>(v.status);
    Put(verdict_json, v.ToJson());
    if (counterexample_json != nullptr) {
      *counterexample_json =
          v.counterexample
              ? Dup(arrayfree::CounterexampleToJson(*v.counterexample))
              : nullptr;
    }
    return AF_OK;
  });
}

af_status af_counterexample_replay(const char* counterexample_json,
                                   const af_oracle_options* options,
                                   int* matches) {
  return Guard([&] {
    if (counterexample_json == nullptr || matches == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto cex = arrayfree::CounterexampleFromJson(counterexample_json);
    if (!cex.ok()) return FromStatus(cex.status(), AF_ERR_INVALID_ARGUMENT);
    auto replay =
        arrayfree::ReplayCounterexample(*cex, OracleConfigFrom(options));
    if (!replay.ok()) return FromStatus(replay.status(), AF_ERR_SYNTAX);
    *matches = *replay ? 1 : 0;
    return AF_OK;
  });
}

void af_gen_limits_init(af_gen_limits* limits) {
  arrayfree::GenLimits l;
  limits->max_array_size = l.max_array_size;
  limits->max_loop_bound = l.max_loop_bound;
  limits->max_constant = l.max_constant;
  limits->max_statements = l.max_statements;
  limits->weight_assign = l.weights.assign;
  limits->weight_array_write = l.weights.array_write;
  limits->weight_full_loop = l.weights.full_loop;
  limits->weight_partial_loop = l.weights.partial_loop;
  limits->weight_branch = l.weights.branch;
  limits->weight_assertion = l.weights.assertion;
  limits->records = l.records ? 1 : 0;
  limits->seed = l.seed;
}

af_status af_gen_program(const af_gen_limits* limits, af_program** out) {
  return Guard([&] {
    if (limits == nullptr || out == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::GenLimits l;
    l.max_array_size = limits->max_array_size;
    l.max_loop_bound = limits->max_loop_bound;
    l.max_constant = limits->max_constant;
    l.max_statements = limits->max_statements;
    l.weights = {limits->weight_assign,       limits->weight_array_write,
                 limits->weight_full_loop,    limits->weight_partial_loop,
                 limits->weight_branch,       limits->weight_assertion};
    l.records = limits->records != 0;
    l.seed = limits->seed;
    if (absl::Status s = l.Validate(); !s.ok()) {
      return FromStatus(s, AF_ERR_INVALID_ARGUMENT);
    }
    *out = new af_program{arrayfree::GenProgram(l)};
    return AF_OK;
  });
}

af_status af_program_expectation(const af_program* program, int* expectation) {
  return Guard([&] {
    if (program == nullptr || expectation == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::Outcome outcome = arrayfree::RunOriginal(program->program);
    *expectation = !outcome.conclusive() ? -1 : outcome.failed.empty() ? 1 : 0;
    return AF_OK;
  });
}

void af_bmc_options_init(af_bmc_options* options) {
  arrayfree::BmcConfig c;
  options->command = nullptr;
  options->timeout_seconds = c.timeout_seconds;
  options->grace_seconds = c.grace_seconds;
  options->success_marker = nullptr;
  options->failure_marker = nullptr;
  options->nd_prefix = nullptr;
  options->original_mode = 0;
}

af_status af_bmc_verify(const char* path, const af_bmc_options* options,
                        af_bmc_verdict* verdict, char** verdict_json) {
  return Guard([&] {
    if (path == nullptr || options == nullptr || verdict == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    auto config = BmcConfigFrom(options);
    if (!config.ok()) {
      return FromStatus(config.status(), AF_ERR_INVALID_ARGUMENT);
    }
    auto v = arrayfree::VerifyWithBmc(path,
                                      *config, options->original_mode
                                                   ? arrayfree::BmcMode::kOriginal
                                                   : arrayfree::BmcMode::kTransformed);
    if (!v.ok()) return FromStatus(v.status(), AF_ERR_SYNTAX);
    *verdict = static_cast<af_bmc_verdict>(v->kind);
    if (verdict_json != nullptr) {
      nlohmann::ordered_json j;
      j["file"] = path;
      j["mode"] = options->original_mode ? "original" : "transformed";
      j["verdict"] = arrayfree::VerdictKindName(v->kind);
      j["seconds"] = v->seconds;
      j["precise"] = v->precise;
      j["confirmed"] = v->confirmed();
      j["output"] = v->output;
      Put(verdict_json, j.dump(2) + "\n");
    }
    return AF_OK;
  });
}

void af_suite_options_init(af_suite_options* options) {
  af_bmc_options_init(&options->bmc);
  options->manifest_path = nullptr;
  options->replay_dir = nullptr;
  options->record_dir = nullptr;
  options->jobs = 1;
  options->oracle_expectations = 1;
}

af_status af_suite_run(const char* dir, const af_suite_options* options,
                       char** csv, char** json, af_suite_counts* counts) {
  return Guard([&] {
    if (dir == nullptr || options == nullptr) {
      return Fail(AF_ERR_INVALID_ARGUMENT, "null argument");
    }
    arrayfree::SuiteOptions suite;
    if (options->bmc.command != nullptr || options->replay_dir == nullptr) {
      auto config = BmcConfigFrom(&options->bmc);
      if (!config.ok()) {
        return FromStatus(config.status(), AF_ERR_INVALID_ARGUMENT);
      }
      suite.bmc = *std::move(config);
    }
    suite.mode = options->bmc.original_mode ? arrayfree::BmcMode::kOriginal
                                            : arrayfree::BmcMode::kTransformed;
    if (options->manifest_path != nullptr) {
      std::ifstream in(options->manifest_path);
      if (!in) {
        return Fail(AF_ERR_IO,
                    absl::StrCat("cannot read ", options->manifest_path));
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      auto manifest = arrayfree::ParseManifest(buffer.str());
      if (!manifest.ok()) {
        return FromStatus(manifest.status(), AF_ERR_INVALID_ARGUMENT);
      }
      suite.expectations = *std::move(manifest);
    }
    if (options->replay_dir != nullptr) suite.replay_dir = options->replay_dir;
    if (options->record_dir != nullptr) suite.record_dir = options->record_dir;
    suite.jobs = options->jobs;
    suite.oracle_expectations = options->oracle_expectations != 0;
    auto report = arrayfree::RunSuite(dir, suite);
    if (!report.ok()) return FromStatus(report.status(), AF_ERR_INVALID_ARGUMENT);
    Put(csv, report->ToCsv());
    Put(json, report->ToJson());
    if (counts != nullptr) {
      using arrayfree::Category;
      counts->programs = static_cast<int>(report->rows.size());
      counts->correct_true = report->Count(Category::kCorrectTrue);
      counts->correct_false = report->Count(Category::kCorrectFalse);
      counts->incorrect_true = report->Count(Category::kIncorrectTrue);
      counts->incorrect_false = report->Count(Category::kIncorrectFalse);
      counts->no_result = report->Count(Category::kNoResult);
    }
    return AF_OK;
  });
}

}  // extern "C"
