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

#ifndef ARRAYFREE_SRC_HARNESS_INTERNAL_H_
#define ARRAYFREE_SRC_HARNESS_INTERNAL_H_

#include <string>

#include "absl/status/statusor.h"
#include "arrayfree/harness.h"

namespace arrayfree::harness_internal {

// Writes `text` to a temporary C file, runs the configured tool on it and
// removes the file.
absl::StatusOr<ToolRun> RunBmcOnText(const std::string& text,
                                     const BmcConfig& config);

}  // namespace arrayfree::harness_internal

#endif  // ARRAYFREE_SRC_HARNESS_INTERNAL_H_
