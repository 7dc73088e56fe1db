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

// Interpreter shared by the oracle entry points.

#ifndef ARRAYFREE_SRC_ORACLE_INTERPRETER_H_
#define ARRAYFREE_SRC_ORACLE_INTERPRETER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "arrayfree/oracle.h"

namespace arrayfree::oracle_internal {

// Picks one value of a non-empty domain.
class Chooser {
 public:
  virtual ~Chooser() = default;
  virtual std::uint64_t Choose(const std::vector<std::uint64_t>& domain) = 0;
};

// Depth-first walk over every sequence of choices, one run at a time.
class DfsChooser : public Chooser {
 public:
  explicit DfsChooser(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t Choose(const std::vector<std::uint64_t>& domain) override;
  void BeginRun() { depth_ = 0; }
  // Moves to the next unexplored sequence; false when none is left.
  bool Advance();

 private:
  struct Point {
    size_t index;
    size_t size;
  };
  std::uint64_t seed_;
  std::vector<Point> path_;
  size_t depth_ = 0;
};

// Returns recorded values in order, then the first domain value.
class ReplayChooser : public Chooser {
 public:
  explicit ReplayChooser(const std::vector<std::uint64_t>& values)
      : values_(values) {}
  std::uint64_t Choose(const std::vector<std::uint64_t>& domain) override;

 private:
  const std::vector<std::uint64_t>& values_;
  size_t next_ = 0;
};

// Uniformly random picks.
class RandomChooser : public Chooser {
 public:
  explicit RandomChooser(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t Choose(const std::vector<std::uint64_t>& domain) override {
    return domain[std::uniform_int_distribution<size_t>(
        0, domain.size() - 1)(rng_)];
  }

 private:
  std::mt19937_64 rng_;
};

struct RunOptions {
  Chooser* chooser = nullptr;  // required when the program has choices
  const ChoiceDomains* domains = nullptr;
  std::uint64_t array_default = 0;
  std::set<std::string> element_vars;
  std::uint64_t fuel = 0;
  bool record_trace = false;
  // Receives (slot, value) for the initial memory and every store.
  std::function<void(size_t, std::uint64_t)> observe;
};

class Interpreter {
 public:
  Interpreter(const Program& program, const OracleConfig& config);

  const MemoryLayout& layout() const { return layout_; }
  Outcome Run(const RunOptions& options);

 private:
  struct Frame;
  friend struct Frame;

  const std::vector<std::uint64_t>& ClassDomain(const std::string& cls,
                                                const RunOptions& options);
  // Values tried for `nd(l, u)` when its result is stored in a location of
  // class `target` (empty when it is not stored).
  const std::vector<std::uint64_t>& RangeDomain(const Expr& expr,
                                                const std::string& target,
                                                bool full,
                                                const RunOptions& options);
  bool ClassUnsigned(const std::string& cls) const;
  bool ComputeUnsigned(const Expr& expr);

  const Program& program_;
  OracleConfig config_;
  MemoryLayout layout_;
  std::uint64_t mask_;
  std::unordered_map<const Expr*, bool> unsigned_;
  std::set<const Stmt*> witness_inits_;
  std::set<std::uint64_t> constants_;
  std::map<std::string, std::vector<std::uint64_t>> class_domains_;
  std::map<std::pair<const Expr*, std::string>, std::vector<std::uint64_t>>
      range_domains_;
  const ChoiceDomains* cached_for_ = nullptr;
};

struct Exploration {
  std::uint64_t executions = 0;
  bool capped = false;   // cap reached with sequences left
  bool stopped = false;  // the callback asked to stop
};

// Runs `program` on `samples` random choice sequences, then once per choice
// sequence, until every sequence is explored, the cap is reached or `visit`
// returns false.
Exploration Explore(const Program& program, const ChoiceDomains& domains,
                    const OracleConfig& config, const InitialState& initial,
                    bool record_trace, std::uint64_t samples,
                    const std::function<bool(Outcome&)>& visit);

std::uint64_t WidthMask(int width);

}  // namespace arrayfree::oracle_internal

#endif  // ARRAYFREE_SRC_ORACLE_INTERPRETER_H_
