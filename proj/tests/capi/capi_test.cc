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

// Exercises the C interface through the shared library only.

#include "arrayfree/arrayfree.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

const char* kRecordsExamplePath = ARRAYFREE_TEST_DATA_DIR "/records.c";

const char* kToy =
    "int a[2]; int i;\n"
    "int main() { for (i = 0; i < 2; i++) { a[i] = i; }\n"
    "  for (i = 0; i < 2; i++) { assert(a[i] == 0); } }\n";

// Owns a string returned by the library.
struct Text {
  char* s = nullptr;
  ~Text() { af_string_free(s); }
  std::string str() const { return s == nullptr ? "" : s; }
};

struct Handle {
  af_program* p = nullptr;
  ~Handle() { af_program_free(p); }
};

TEST(CApiTest, VersionIsSet) {
  EXPECT_STREQ(af_version(), "0.1.0");
}

TEST(CApiTest, ParseErrorsAreReported) {
  Handle h;
  EXPECT_EQ(af_program_parse("int main( {", nullptr, &h.p), AF_ERR_SYNTAX);
  EXPECT_EQ(h.p, nullptr);
  EXPECT_NE(std::string(af_last_error()), "");
  EXPECT_EQ(af_program_parse(nullptr, nullptr, &h.p),
            AF_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(af_program_load("/nonexistent/file.c", nullptr, &h.p), AF_ERR_IO);
}

TEST(CApiTest, TransformRecordsExample) {
  Handle in, out;
  ASSERT_EQ(af_program_load(kRecordsExamplePath, nullptr, &in.p), AF_OK)
      << af_last_error();
  af_transform_options options;
  af_transform_options_init(&options);
  Text report;
  ASSERT_EQ(af_transform(in.p, &options, &out.p, &report.s), AF_OK)
      << af_last_error();
  EXPECT_NE(report.str().find("\"S3\": 2"), std::string::npos) << report.str();
  int conformant = 0;
  ASSERT_EQ(af_validate_transformed(out.p, &conformant, nullptr), AF_OK);
  EXPECT_EQ(conformant, 1);
  ASSERT_EQ(af_validate_transformed(in.p, &conformant, nullptr), AF_OK);
  EXPECT_EQ(conformant, 0);
  Text text;
  ASSERT_EQ(af_program_emit(out.p, nullptr, nullptr, &text.s), AF_OK);
  EXPECT_NE(text.str().find("i_a = nd(0, 99999);"), std::string::npos);
  EXPECT_EQ(text.str().find("for"), std::string::npos);
}

TEST(CApiTest, TransformRefusesTransformedInput) {
  Handle in, out;
  ASSERT_EQ(af_program_parse("int x; int main() { x = nd(); }", nullptr, &in.p),
            AF_OK);
  EXPECT_EQ(af_transform(in.p, nullptr, &out.p, nullptr), AF_ERR_TRANSFORM);
}

TEST(CApiTest, FactsAndPrecision) {
  Handle in;
  ASSERT_EQ(af_program_load(kRecordsExamplePath, nullptr, &in.p), AF_OK);
  Text json;
  ASSERT_EQ(af_facts(in.p, 1, &json.s), AF_OK);
  EXPECT_NE(json.str().find("\"qualifies\": true"), std::string::npos);
  int qualifies = 0;
  ASSERT_EQ(af_precision_all_qualify(in.p, &qualifies), AF_OK);
  EXPECT_EQ(qualifies, 1);
}

TEST(CApiTest, OracleVerdictsAndReplay) {
  Handle in;
  ASSERT_EQ(af_program_parse(kToy, nullptr, &in.p), AF_OK);
  af_oracle_options options;
  af_oracle_options_init(&options);
  af_verdict verdict;
  Text json, cex;
  ASSERT_EQ(af_oracle_check(in.p, AF_PROPERTY_SOUNDNESS, &options, &verdict,
                            &json.s, &cex.s),
            AF_OK);
  EXPECT_EQ(verdict, AF_VERDICT_HOLDS);
  EXPECT_EQ(cex.s, nullptr);
  EXPECT_NE(json.str().find("\"verdict\": \"holds\""), std::string::npos)
      << json.str();
  ASSERT_EQ(af_oracle_check(in.p, AF_PROPERTY_PRECISION, &options, &verdict,
                            nullptr, nullptr),
            AF_OK);
  EXPECT_EQ(verdict, AF_VERDICT_OUT_OF_CLASS);
  int matches = 0;
  EXPECT_EQ(af_counterexample_replay("{", &options, &matches),
            AF_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, GeneratorAndExpectation) {
  af_gen_limits limits;
  af_gen_limits_init(&limits);
  limits.seed = 7;
  Handle a, b;
  ASSERT_EQ(af_gen_program(&limits, &a.p), AF_OK);
  ASSERT_EQ(af_gen_program(&limits, &b.p), AF_OK);
  Text ta, tb;
  ASSERT_EQ(af_program_emit(a.p, nullptr, nullptr, &ta.s), AF_OK);
  ASSERT_EQ(af_program_emit(b.p, nullptr, nullptr, &tb.s), AF_OK);
  EXPECT_EQ(ta.str(), tb.str());
  int expectation = 5;
  ASSERT_EQ(af_program_expectation(a.p, &expectation), AF_OK);
  EXPECT_TRUE(expectation == 0 || expectation == 1);
  limits.max_array_size = 0;
  Handle c;
  EXPECT_EQ(af_gen_program(&limits, &c.p), AF_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, BmcOptionsAreValidated) {
  af_bmc_options options;
  af_bmc_options_init(&options);
  options.command = "verifier --no-file";
  af_bmc_verdict verdict;
  EXPECT_EQ(af_bmc_verify(kRecordsExamplePath, &options, &verdict, nullptr),
            AF_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, BmcAndSuiteWithFakeVerifier) {
  if (std::system("cc --version > /dev/null 2>&1") != 0) {
    GTEST_SKIP() << "no C compiler";
  }
  std::string command =
      std::string(ARRAYFREE_TEST_TOOLS_DIR) + "/fake_bmc.sh {file}";
  af_bmc_options options;
  af_bmc_options_init(&options);
  options.command = command.c_str();
  options.timeout_seconds = 30;
  af_bmc_verdict verdict;
  Text json;
  ASSERT_EQ(af_bmc_verify(kRecordsExamplePath, &options, &verdict, &json.s), AF_OK)
      << af_last_error();
  EXPECT_EQ(verdict, AF_BMC_SAFE) << json.str();

  fs::path dir = fs::path(::testing::TempDir()) / "arrayfree_capi_suite";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "toy.c") << kToy;
  fs::copy_file(kRecordsExamplePath, dir / "records.c");
  af_suite_options suite;
  af_suite_options_init(&suite);
  suite.bmc = options;
  af_suite_counts counts;
  Text csv;
  ASSERT_EQ(af_suite_run(dir.c_str(), &suite, &csv.s, nullptr, &counts), AF_OK)
      << af_last_error();
  EXPECT_EQ(counts.programs, 2);
  EXPECT_EQ(counts.correct_true, 1);
  EXPECT_EQ(counts.correct_false, 1);
  EXPECT_EQ(csv.str().rfind("name,expected,verdict,seconds,precise\n", 0), 0u);
}

}  // namespace
