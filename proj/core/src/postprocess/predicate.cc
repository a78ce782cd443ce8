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

#include "trinity/postprocess/predicate.hpp"

#include <array>
#include <charconv>

#include "trinity/error.hpp"

namespace trinity::postprocess {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool IsNumericField(std::string_view f) {
  return f == "score" || f == "area_px" || f == "weight_sum";
}

double ParseNumber(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("'" + text + "' is not a number");
  }
  return v;
}

PredicateAtom ParseAtom(std::string_view text) {
  // Two-character operators first so "<=" is not read as "<".
  static constexpr std::array<std::pair<std::string_view, CompareOp>, 6> kOps = {{
      {"<=", CompareOp::kLe},
      {">=", CompareOp::kGe},
      {"==", CompareOp::kEq},
      {"!=", CompareOp::kNe},
      {"<", CompareOp::kLt},
      {">", CompareOp::kGt},
  }};
  for (const auto& [tok, op] : kOps) {
    const auto pos = text.find(tok);
    if (pos == std::string_view::npos) continue;
    PredicateAtom atom{std::string(Trim(text.substr(0, pos))), op,
                       std::string(Trim(text.substr(pos + tok.size())))};
    if (atom.field.rfind("attr:", 0) == 0 && atom.field.size() > 5) {
      if (op != CompareOp::kEq && op != CompareOp::kNe) {
        throw ValidationError("attribute '" + atom.field + "' supports only == and !=");
      }
    } else if (IsNumericField(atom.field)) {
      ParseNumber(atom.value);
    } else {
      throw ValidationError("unknown predicate field '" + atom.field + "'");
    }
    return atom;
  }
  throw ValidationError("predicate atom '" + std::string(text) + "' has no comparison operator");
}

template <typename V>
bool Compare(const V& a, CompareOp op, const V& b) {
  switch (op) {
    case CompareOp::kLt: return a < b;
    case CompareOp::kLe: return a <= b;
    case CompareOp::kGt: return a > b;
    case CompareOp::kGe: return a >= b;
    case CompareOp::kEq: return a == b;
    case CompareOp::kNe: return a != b;
  }
  return false;
}

}  // namespace

std::vector<PredicateAtom> ParsePredicate(std::string_view text) {
  std::vector<PredicateAtom> atoms;
  bool after_separator = false;
  while (true) {
    const auto amp = text.find("&&");
    const auto comma = text.find(',');
    const auto cut = std::min(amp, comma);
    const std::string_view part = Trim(text.substr(0, cut));
    if (!part.empty()) atoms.push_back(ParseAtom(part));
    else if (cut != std::string_view::npos || after_separator) {
      throw ValidationError("empty predicate atom");
    }
    if (cut == std::string_view::npos) break;
    after_separator = true;
    text.remove_prefix(cut + (cut == amp ? 2 : 1));
  }
  return atoms;
}

bool Matches(const FilterItem& item, const std::vector<PredicateAtom>& atoms) {
  for (const auto& a : atoms) {
    if (a.field.rfind("attr:", 0) == 0) {
      const auto it = item.attributes.find(a.field.substr(5));
      // A missing attribute equals nothing.
      const bool eq = it != item.attributes.end() && it->second == a.value;
      if (eq != (a.op == CompareOp::kEq)) return false;
    } else {
      const auto it = item.numbers.find(a.field);
      if (it == item.numbers.end()) {
        throw ValidationError("field '" + a.field + "' is not available on these items");
      }
      if (!Compare(it->second, a.op, ParseNumber(a.value))) return false;
    }
  }
  return true;
}

std::vector<std::size_t> PredicateFilter(const std::vector<FilterItem>& items,
                                         const std::vector<PredicateAtom>& atoms) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (Matches(items[i], atoms)) out.push_back(i);
  }
  return out;
}

}  // namespace trinity::postprocess
