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

// Random program generator.
//
// Programs are built as text from a small grammar that keeps loops
// terminating (iterators are never assigned in their bodies) and, where
// possible, array indices in bounds. About half of the programs follow an
// initialize-then-check shape, two full traversals of the same array, so
// that qualifying safe programs are common. A candidate whose original run
// is not conclusive is replaced by the next candidate of the same seed.

#include <algorithm>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "arrayfree/harness.h"
#include "arrayfree/oracle.h"

namespace arrayfree {

absl::Status GenLimits::Validate() const {
  if (max_array_size < 1 || max_loop_bound < 1 || max_constant < 1 ||
      max_statements < 1) {
    return absl::InvalidArgumentError("generator limits must be at least 1");
  }
  const GenWeights& w = weights;
  for (int v : {w.assign, w.array_write, w.full_loop, w.partial_loop,
                w.branch, w.assertion}) {
    if (v < 0) return absl::InvalidArgumentError("weights must be >= 0");
  }
  if (w.assign + w.array_write + w.full_loop + w.partial_loop + w.branch +
          w.assertion ==
      0) {
    return absl::InvalidArgumentError("at least one weight must be positive");
  }
  return absl::OkStatus();
}

namespace {

struct ArrayVar {
  std::string name;
  int size;
  bool record;
  bool is_unsigned;
};

struct ActiveLoop {
  std::string iterator;
  int lo;  // inclusive range of the iterator inside the body
  int hi;
};

class Generator {
 public:
  Generator(const GenLimits& limits, std::uint64_t stream)
      : limits_(limits), rng_(MakeRng(limits.seed, stream)) {}

  std::string Generate() {
    Declare();
    budget_ = limits_.max_statements;
    std::vector<std::string> body;
    if (Chance(1, 2) && limits_.weights.full_loop > 0) {
      InitThenCheck(&body);
    } else {
      while (budget_ > 0 && (body.empty() || Chance(5, 6))) {
        body.push_back(Statement(0));
      }
    }
    if (asserts_ == 0) body.push_back(Assertion());
    std::string out = decls_;
    out += "\nint main()\n{\n";
    for (const std::string& s : body) Indent(s, 1, &out);
    out += "}\n";
    return out;
  }

 private:
  static std::mt19937_64 MakeRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
  }

  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool Chance(int num, int den) { return Uniform(1, den) <= num; }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[Uniform(0, static_cast<int>(v.size()) - 1)];
  }

  static void Indent(const std::string& text, int level, std::string* out) {
    size_t start = 0;
    while (start < text.size()) {
      size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      out->append(2 * level, ' ');
      out->append(text, start, end - start);
      out->push_back('\n');
      start = end + 1;
    }
  }

  void Declare() {
    int n_arrays = Uniform(1, 2);
    bool have_struct = false;
    for (int k = 0; k < n_arrays; ++k) {
      ArrayVar a{k == 0 ? "a" : "b", Uniform(1, limits_.max_array_size),
                 limits_.records && Chance(1, 3), Chance(1, 4)};
      if (a.record && !have_struct) {
        absl::StrAppend(&decls_, "struct S {\n  ",
                        a.is_unsigned ? "unsigned int" : "int", " p;\n  int q;\n};\n");
        have_struct = true;
        struct_unsigned_p_ = a.is_unsigned;
      }
      if (a.record) a.is_unsigned = struct_unsigned_p_;
      arrays_.push_back(a);
    }
    for (const ArrayVar& a : arrays_) {
      absl::StrAppend(&decls_,
                      a.record ? "struct S"
                               : (a.is_unsigned ? "unsigned int" : "int"),
                      " ", a.name, "[", a.size, "];\n");
    }
    scalars_ = {"s", "t", "k"};
    absl::StrAppend(&decls_, "int i, j, s, t, k;\n");
    if (Chance(1, 3)) {
      scalars_.push_back("w");
      absl::StrAppend(&decls_, "unsigned int w;\n");
    }
  }

  std::string Const() { return absl::StrCat(Uniform(0, limits_.max_constant)); }

  // An index into `a` that stays in bounds inside the active loops, or
  // occasionally a scalar.
  std::string IndexFor(const ArrayVar& a) {
    std::vector<std::string> options;
    for (const ActiveLoop& l : loops_) {
      for (int shift = -1; shift <= 1; ++shift) {
        if (l.lo + shift < 0 || l.hi + shift >= a.size) continue;
        if (shift == 0) {
          options.push_back(l.iterator);
          options.push_back(l.iterator);
        } else {
          options.push_back(absl::StrCat(l.iterator, shift > 0 ? " + " : " - ",
                                         1));
        }
      }
    }
    if (!options.empty() && Chance(3, 4)) return Pick(options);
    if (Chance(1, 12)) return Pick(scalars_);
    return absl::StrCat(Uniform(0, a.size - 1));
  }

  std::string Element(const ArrayVar& a, const std::string& index) {
    std::string cell = absl::StrCat(a.name, "[", index, "]");
    if (a.record) absl::StrAppend(&cell, Chance(1, 2) ? ".p" : ".q");
    return cell;
  }

  std::string Leaf() {
    switch (Uniform(0, 3)) {
      case 0: return Const();
      case 1: return Pick(scalars_);
      case 2:
        if (!loops_.empty()) return Pick(loops_).iterator;
        return Const();
      default: {
        const ArrayVar& a = Pick(arrays_);
        return Element(a, IndexFor(a));
      }
    }
  }

  std::string Expr(int depth) {
    if (depth <= 0 || Chance(1, 2)) return Leaf();
    static const std::vector<std::string> ops = {"+", "+", "-", "*"};
    return absl::StrCat(Expr(depth - 1), " ", Pick(ops), " ", Expr(depth - 1));
  }

  std::string Relation() {
    static const std::vector<std::string> ops = {"==", "!=", "<",
                                                 "<=", ">",  ">="};
    return absl::StrCat(Expr(1), " ", Pick(ops), " ", Expr(1));
  }

  std::string Assertion() {
    ++asserts_;
    return absl::StrCat("assert(", Relation(), ");");
  }

  std::string Block(int depth, int max_len) {
    std::string out = "{\n";
    int n = Uniform(1, max_len);
    for (int k = 0; k < n && (k == 0 || budget_ > 0); ++k) {
      Indent(Statement(depth), 1, &out);
    }
    return out + "}";
  }

  std::string Statement(int depth) {
    --budget_;
    const GenWeights& w = limits_.weights;
    bool nest = depth < 2 && budget_ > 1;
    bool free_iterator = loops_.size() < 2;
    std::vector<int> weights = {
        w.assign, w.array_write, nest && free_iterator ? w.full_loop : 0,
        nest && free_iterator ? w.partial_loop : 0, nest ? w.branch : 0,
        w.assertion};
    if (std::all_of(weights.begin(), weights.end(),
                    [](int v) { return v == 0; })) {
      weights = {w.assign, w.array_write, 0, 0, 0, w.assertion};
      if (std::all_of(weights.begin(), weights.end(),
                      [](int v) { return v == 0; })) {
        weights[0] = 1;
      }
    }
    std::discrete_distribution<int> kind(weights.begin(), weights.end());
    switch (kind(rng_)) {
      case 0:
        return absl::StrCat(Pick(scalars_), " = ", Expr(2), ";");
      case 1: {
        const ArrayVar& a = Pick(arrays_);
        return absl::StrCat(Element(a, IndexFor(a)), " = ", Expr(2), ";");
      }
      case 2: {
        const ArrayVar& a = Pick(arrays_);
        std::string it = NextIterator();
        loops_.push_back({it, 0, a.size - 1});
        std::string head = absl::StrCat("for (", it, " = 0; ", it, " < ",
                                        a.size, "; ", it, "++)\n");
        std::string body = "{\n";
        Indent(absl::StrCat(Element(a, it), " = ", Expr(2), ";"), 1, &body);
        --budget_;
        if (budget_ > 0 && Chance(2, 3)) {
          std::string rest = Block(depth + 1, 2);
          body += rest.substr(2, rest.size() - 3);
        }
        body += "}";
        loops_.pop_back();
        return head + body;
      }
      case 3: {
        std::string it = NextIterator();
        int lo = Uniform(0, limits_.max_loop_bound - 1);
        int hi = Uniform(lo, limits_.max_loop_bound - 1);
        loops_.push_back({it, lo, hi});
        std::string head =
            Chance(1, 2)
                ? absl::StrCat("for (", it, " = ", lo, "; ", it, " <= ", hi,
                               "; ", it, "++)\n")
                : absl::StrCat("for (", it, " = ", hi, "; ", it, " >= ", lo,
                               "; ", it, "--)\n");
        std::string body = Block(depth + 1, 2);
        loops_.pop_back();
        return head + body;
      }
      case 4: {
        std::string out =
            absl::StrCat("if (", Relation(), ")\n", Block(depth + 1, 2));
        if (budget_ > 0 && Chance(1, 2)) {
          absl::StrAppend(&out, "\nelse\n", Block(depth + 1, 1));
        }
        return out;
      }
      default:
        return Assertion();
    }
  }

  std::string NextIterator() {
    for (const char* name : {"i", "j"}) {
      bool used = false;
      for (const ActiveLoop& l : loops_) used |= l.iterator == name;
      if (!used) return name;
    }
    return "i";
  }

  // Two full traversals of one array: the first fills it, the second
  // asserts a relation per element.
  void InitThenCheck(std::vector<std::string>* body) {
    const ArrayVar& a = arrays_[0];
    if (Chance(1, 3)) body->push_back(absl::StrCat(Pick(scalars_), " = ", Const(), ";"));
    loops_.push_back({"i", 0, a.size - 1});
    std::string fill = "{\n";
    std::string value = Chance(1, 2) ? "i" : absl::StrCat("i + ", Const());
    if (Chance(1, 2)) {
      Indent(absl::StrCat("k = ", value, ";"), 1, &fill);
      value = "k";
    }
    auto field_value = [&]() {
      switch (Uniform(0, 3)) {
        case 0: return value;
        case 1: return absl::StrCat(value, " * ", value);
        case 2: return absl::StrCat(value, " + ", Const());
        default: return Const();
      }
    };
    if (a.record) {
      Indent(absl::StrCat("a[i].p = ", field_value(), ";"), 1, &fill);
      Indent(absl::StrCat("a[i].q = ", field_value(), ";"), 1, &fill);
    } else {
      Indent(absl::StrCat("a[i] = ", field_value(), ";"), 1, &fill);
    }
    fill += "}";
    body->push_back(absl::StrCat("for (i = 0; i < ", a.size, "; i++)\n", fill));

    static const std::vector<std::string> ops = {"==", "!=", "<",
                                                 "<=", ">",  ">="};
    auto operand = [&]() -> std::string {
      std::vector<std::string> terms;
      if (a.record) {
        terms = {"a[i].p", "a[i].q", "a[i].p * a[i].p", "i", Const()};
      } else {
        terms = {"a[i]", "a[i] * a[i]", "i", Const(), "i + 1"};
      }
      return Pick(terms);
    };
    std::string lhs = a.record ? (Chance(1, 2) ? "a[i].q" : "a[i].p") : "a[i]";
    ++asserts_;
    body->push_back(absl::StrCat("for (i = 0; i < ", a.size,
                                 "; i++)\n{\n  assert(", lhs, " ", Pick(ops),
                                 " ", operand(), ");\n}"));
    loops_.pop_back();
  }

  const GenLimits& limits_;
  std::mt19937_64 rng_;
  std::string decls_;
  std::vector<ArrayVar> arrays_;
  std::vector<std::string> scalars_;
  std::vector<ActiveLoop> loops_;
  bool struct_unsigned_p_ = false;
  int budget_ = 0;
  int asserts_ = 0;
};

}  // namespace

Program GenProgram(const GenLimits& limits) {
  for (std::uint64_t stream = 0;; ++stream) {
    std::string text = Generator(limits, stream).Generate();
    auto program = ParseProgram(text);
    if (!program.ok()) continue;
    bool conclusive = true;
    for (std::uint64_t d : {0, 1}) {
      conclusive = conclusive && RunOriginal(*program, {}, d).conclusive();
    }
    if (conclusive) return *std::move(program);
  }
}

}  // namespace arrayfree
