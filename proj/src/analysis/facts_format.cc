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

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "arrayfree/analysis.h"
#include "json.hpp"

namespace arrayfree {
namespace {

using nlohmann::ordered_json;

std::string SpanText(const SourceSpan& span) {
  return absl::StrCat(span.line, ":", span.column);
}

ordered_json FactsDocument(const Program& program) {
  ProgramFacts facts(program);
  ordered_json doc;
  doc["arrays"] = ordered_json::array();
  for (const ArrayInfo& a : facts.arrays()) {
    ordered_json entry;
    entry["name"] = a.name;
    entry["size"] = a.size;
    entry["lastof"] = LastOf(a);
    entry["element"] = a.record ? "struct " + *a.record
                                : (a.scalar == ScalarType::kUnsigned
                                       ? "unsigned int"
                                       : "int");
    entry["span"] = SpanText(a.span);
    doc["arrays"].push_back(std::move(entry));
  }
  doc["loops"] = ordered_json::array();
  for (const LoopFacts& f : facts.loops()) {
    ordered_json entry;
    entry["span"] = SpanText(f.span);
    entry["iterator"] = f.iterator;
    entry["depth"] = f.depth;
    entry["lower"] = f.lower ? ordered_json(*f.lower) : ordered_json("unknown");
    entry["upper"] = f.upper ? ordered_json(*f.upper) : ordered_json("unknown");
    ordered_json full = ordered_json::object();
    for (const auto& [name, value] : f.full_access) full[name] = value;
    entry["full_access"] = std::move(full);
    entry["rule"] = f.full() ? "S3" : "S4";
    entry["bound_array"] = f.bound_array ? *f.bound_array : "";
    entry["defs_scalars"] = f.defs.scalars;
    entry["defs_arrays"] = f.defs.arrays;
    entry["constant_only"] = f.constant_only;
    entry["havoc_scalars"] = f.havoc.scalars;
    entry["havoc_arrays"] = f.havoc.arrays;
    entry["iterator_escapes"] = f.iterator_escapes;
    doc["loops"].push_back(std::move(entry));
  }
  doc["assertions"] = ordered_json::array();
  for (const AssertionPrecision& a : ClassifyPrecision(program).assertions) {
    ordered_json entry;
    entry["id"] = a.assert_id;
    entry["span"] = SpanText(a.span);
    entry["in_loop"] = a.in_loop;
    entry["qualifies"] = a.qualifies;
    std::vector<std::string> rules;
    for (PrecisionRule r : a.violated) rules.push_back(PrecisionRuleName(r));
    entry["violated_rules"] = rules;
    entry["relaxation_applied"] = a.relaxation_applied;
    std::vector<std::string> spans;
    for (const SourceSpan& s : a.enclosing_loops) spans.push_back(SpanText(s));
    entry["enclosing_loops"] = spans;
    spans.clear();
    for (const SourceSpan& s : a.defining_loops) spans.push_back(SpanText(s));
    entry["defining_loops"] = spans;
    entry["v_imp"] = a.dependent_scalars;
    entry["e_imp"] = a.dependent_accesses;
    entry["notes"] = a.notes;
    doc["assertions"].push_back(std::move(entry));
  }
  return doc;
}

std::string Scalar(const ordered_json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::vector<std::string> parts;
    for (const ordered_json& v : value) parts.push_back(Scalar(v));
    return absl::StrJoin(parts, ",");
  }
  if (value.is_object()) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : value.items()) {
      parts.push_back(absl::StrCat(k, "=", Scalar(v)));
    }
    return absl::StrJoin(parts, ",");
  }
  return value.dump();
}

}  // namespace

std::string FormatFacts(const Program& program) {
  ordered_json doc = FactsDocument(program);
  std::string out;
  for (const char* section : {"arrays", "loops", "assertions"}) {
    std::string kind(section);
    kind.pop_back();
    if (kind == "assertion") kind = "assert";
    for (const ordered_json& record : doc[section]) {
      absl::StrAppend(&out, "record: ", kind, "\n");
      for (const auto& [key, value] : record.items()) {
        absl::StrAppend(&out, key, ": ", Scalar(value), "\n");
      }
      out.append("\n");
    }
  }
  return out;
}

std::string FormatFactsJson(const Program& program) {
  return FactsDocument(program).dump(2) + "\n";
}

}  // namespace arrayfree
