/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trinity::postprocess {

// Filterable view of a cluster polygon or a segment score.
struct FilterItem {
  std::map<std::string, double> numbers;  // score, area_px, weight_sum
  std::map<std::string, std::string> attributes;
};

enum class CompareOp { kLt, kLe, kGt, kGe, kEq, kNe };

struct PredicateAtom {
  std::string field;  // score | area_px | weight_sum | attr:<key>
  CompareOp op = CompareOp::kGe;
  std::string value;
};

// Conjunction of "field op value" atoms joined by "&&" or ",". Numeric fields
// take any comparison; attr:<key> takes == or != against a string. Unknown
// fields throw ValidationError. Empty text is the empty conjunction.
std::vector<PredicateAtom> ParsePredicate(std::string_view text);

// Throws ValidationError when a numeric field is absent from the item. A
// missing attribute equals no value, so only != matches it.
bool Matches(const FilterItem& item, const std::vector<PredicateAtom>& atoms);

// Indices of the items that satisfy every atom, in input order.
std::vector<std::size_t> PredicateFilter(const std::vector<FilterItem>& items,
                                         const std::vector<PredicateAtom>& atoms);

}  // namespace trinity::postprocess
