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

/* C interface to the toolkit.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every function returns an af_status; on failure af_last_error() describes
 * the problem until the next call on the same thread. Strings returned
 * through `char**` parameters are owned by the caller and released with
 * af_string_free(). */

#ifndef ARRAYFREE_ARRAYFREE_H_
#define ARRAYFREE_ARRAYFREE_H_

#include <stdint.h>

#if defined(__GNUC__)
#define AF_API __attribute__((visibility("default")))
#else
#define AF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum af_status {
  AF_OK = 0,
  AF_ERR_INVALID_ARGUMENT = 1,
  AF_ERR_SYNTAX = 2,      /* syntax or type error in a program */
  AF_ERR_UNSUPPORTED = 3, /* construct outside the accepted subset */
  AF_ERR_IO = 4,
  AF_ERR_TRANSFORM = 5,
  AF_ERR_INTERNAL = 6,
} af_status;

typedef struct af_program af_program;

AF_API const char* af_version(void);
AF_API const char* af_last_error(void);
AF_API void af_string_free(char* s);

/* `nd_prefix` selects the spelling of the choice helpers: NULL or "" for
 * `nd()` / `nd(l, u)`, otherwise `PREFIX()` / `PREFIX_range(l, u)`. */
AF_API af_status af_program_parse(const char* source, const char* nd_prefix,
                                  af_program** out);
AF_API af_status af_program_load(const char* path, const char* nd_prefix,
                                 af_program** out);
AF_API void af_program_free(af_program* program);
/* `prelude` may be NULL. */
AF_API af_status af_program_emit(const af_program* program,
                                 const char* nd_prefix, const char* prelude,
                                 char** out);

typedef struct af_transform_options {
  int width;             /* integer width in bits, default 32 */
  const char* nd_prefix; /* spelling used in the result */
} af_transform_options;

AF_API void af_transform_options_init(af_transform_options* options);
/* `report_json` may be NULL. */
AF_API af_status af_transform(const af_program* input,
                              const af_transform_options* options,
                              af_program** out, char** report_json);
/* Sets `*conformant` to 1 when the program has no loops and no array
 * accesses and every nd(l, u) is non-empty. `report_json` may be NULL. */
AF_API af_status af_validate_transformed(const af_program* program,
                                         int* conformant, char** report_json);
/* Static facts and precision classification, as text records or JSON. */
AF_API af_status af_facts(const af_program* program, int json, char** out);
AF_API af_status af_precision_all_qualify(const af_program* program,
                                          int* all_qualify);

typedef enum af_property {
  AF_PROPERTY_SOUNDNESS = 0,
  AF_PROPERTY_PRECISION = 1,
  AF_PROPERTY_REPRESENTS = 2,
} af_property;

typedef enum af_verdict {
  AF_VERDICT_HOLDS = 0,
  AF_VERDICT_VIOLATED = 1,
  AF_VERDICT_INCONCLUSIVE = 2,
  AF_VERDICT_OUT_OF_CLASS = 3,
} af_verdict;

typedef struct af_oracle_options {
  int width;
  uint64_t fuel;
  uint64_t cap;
  uint64_t range_cap;
  uint64_t samples;
  uint64_t seed;
  int strict; /* represents: no exemption for havocked locations */
} af_oracle_options;

AF_API void af_oracle_options_init(af_oracle_options* options);
/* `verdict_json` and `counterexample_json` may be NULL; the latter is set to
 * NULL when the verdict carries no counterexample. */
AF_API af_status af_oracle_check(const af_program* original,
                                 af_property property,
                                 const af_oracle_options* options,
                                 af_verdict* verdict, char** verdict_json,
                                 char** counterexample_json);
/* Replays a counterexample document; `*matches` is 1 when the recorded
 * outcome is reproduced. */
AF_API af_status af_counterexample_replay(const char* counterexample_json,
                                          const af_oracle_options* options,
                                          int* matches);

typedef struct af_gen_limits {
  int max_array_size;
  int max_loop_bound;
  int max_constant;
  int max_statements;
  int weight_assign;
  int weight_array_write;
  int weight_full_loop;
  int weight_partial_loop;
  int weight_branch;
  int weight_assertion;
  int records;
  uint64_t seed;
} af_gen_limits;

AF_API void af_gen_limits_init(af_gen_limits* limits);
AF_API af_status af_gen_program(const af_gen_limits* limits, af_program** out);
/* Expected verdict of a closed program from one concrete run: 1 safe,
 * 0 unsafe, -1 when the run is not conclusive. */
AF_API af_status af_program_expectation(const af_program* program,
                                        int* expectation);

typedef struct af_bmc_options {
  const char* command; /* template with one {file} placeholder */
  double timeout_seconds;
  double grace_seconds;
  const char* success_marker; /* NULL keeps the default */
  const char* failure_marker; /* NULL keeps the default */
  const char* nd_prefix;      /* NULL keeps "__nd" */
  int original_mode;          /* verify the program without rewriting */
} af_bmc_options;

AF_API void af_bmc_options_init(af_bmc_options* options);

typedef enum af_bmc_verdict {
  AF_BMC_SAFE = 0,
  AF_BMC_UNSAFE = 1,
  AF_BMC_TIMEOUT = 2,
  AF_BMC_TOOL_ERROR = 3,
} af_bmc_verdict;

/* `verdict_json` may be NULL. */
AF_API af_status af_bmc_verify(const char* path, const af_bmc_options* options,
                               af_bmc_verdict* verdict, char** verdict_json);

typedef struct af_suite_options {
  af_bmc_options bmc;
  const char* manifest_path; /* may be NULL */
  const char* replay_dir;    /* may be NULL */
  const char* record_dir;    /* may be NULL */
  int jobs;
  int oracle_expectations;
} af_suite_options;

typedef struct af_suite_counts {
  int programs;
  int correct_true;
  int correct_false;
  int incorrect_true;
  int incorrect_false;
  int no_result;
} af_suite_counts;

AF_API void af_suite_options_init(af_suite_options* options);
/* `csv`, `json` and `counts` may be NULL. */
AF_API af_status af_suite_run(const char* dir, const af_suite_options* options,
                              char** csv, char** json, af_suite_counts* counts);

#ifdef __cplusplus
}
#endif

#endif /* ARRAYFREE_ARRAYFREE_H_ */
