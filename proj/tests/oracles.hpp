// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference implementations used only by tests. Each is written
// independently of the library path it checks: the grammar oracle is a
// recursive-descent parser, the scoring oracles are brute force, and the
// counting oracle is a plain hash fold.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/text.hpp"
#include "forge/types.hpp"

namespace oracle {

// ---- reference grammar parser (recursive descent) ----

struct RefCursor {
  std::string_view s;
  size_t i = 0;

  bool at_end() const { return i >= s.size(); }
  char peek() const { return s[i]; }
  void skip_ws() {
    while (!at_end() && forge::is_space(s[i])) ++i;
  }
};

inline bool ref_parse_string(RefCursor& c, std::string& out) {
  char quote = c.peek();
  ++c.i;
  out.clear();
  while (!c.at_end()) {
    char ch = c.peek();
    if (ch == '\\') {
      if (c.i + 1 >= c.s.size()) return false;
      char esc = c.s[c.i + 1];
      switch (esc) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"':
        case '\'':
        case '\\': out.push_back(esc); break;
        default:
          out.push_back('\\');
          out.push_back(esc);
      }
      c.i += 2;
      continue;
    }
    ++c.i;
    if (ch == quote) return true;
    out.push_back(ch);
  }
  return false;
}

struct RefTupleResult {
  bool ok = false;
  std::vector<std::pair<std::string, std::string>> tuples;
  std::string reason;
};

inline bool ref_parse_tuple(RefCursor& c, std::vector<std::string>& fields,
                            std::string& reason) {
  ++c.i;  // consume '('
  fields.clear();
  c.skip_ws();
  if (!c.at_end() && c.peek() == ')') {
    reason = "ArityNot2";
    return false;
  }
  while (true) {
    c.skip_ws();
    if (c.at_end()) {
      reason = "UnbalancedBrackets";
      return false;
    }
    if (c.peek() != '"' && c.peek() != '\'') {
      reason = "NonTupleElement";
      return false;
    }
    std::string field;
    if (!ref_parse_string(c, field)) {
      reason = "UnbalancedBrackets";
      return false;
    }
    fields.push_back(field);
    c.skip_ws();
    if (c.at_end()) {
      reason = "UnbalancedBrackets";
      return false;
    }
    if (c.peek() == ',') {
      ++c.i;
      continue;
    }
    if (c.peek() == ')') {
      ++c.i;
      if (fields.size() != 2) {
        reason = "ArityNot2";
        return false;
      }
      if (forge::trim(fields[0]).empty() || forge::trim(fields[1]).empty()) {
        reason = "EmptyField";
        return false;
      }
      return true;
    }
    reason = "NonTupleElement";
    return false;
  }
}

inline RefTupleResult ref_parse_tuple_list(std::string_view text) {
  RefTupleResult result;
  size_t open = text.find('[');
  if (open == std::string_view::npos) {
    result.reason = "UnbalancedBrackets";
    return result;
  }
  RefCursor c{text, open + 1};
  c.skip_ws();
  if (c.at_end()) {
    result.reason = "UnbalancedBrackets";
    return result;
  }
  if (c.peek() == ']') {
    result.ok = true;
    return result;
  }
  while (true) {
    c.skip_ws();
    if (c.at_end()) {
      result.reason = "UnbalancedBrackets";
      result.tuples.clear();
      return result;
    }
    if (c.peek() == ']') {  // reachable after a trailing comma
      result.ok = true;
      return result;
    }
    if (c.peek() != '(') {
      result.reason = "NonTupleElement";
      result.tuples.clear();
      return result;
    }
    std::vector<std::string> fields;
    if (!ref_parse_tuple(c, fields, result.reason)) {
      result.tuples.clear();
      return result;
    }
    result.tuples.emplace_back(fields[0], fields[1]);
    c.skip_ws();
    if (c.at_end()) {
      result.reason = "UnbalancedBrackets";
      result.tuples.clear();
      return result;
    }
    if (c.peek() == ',') {
      ++c.i;
      continue;
    }
    if (c.peek() == ']') {
      result.ok = true;
      return result;
    }
    result.reason = "NonTupleElement";
    result.tuples.clear();
    return result;
  }
}

struct RefListResult {
  bool ok = false;
  std::vector<std::string> mentions;
};

inline RefListResult ref_parse_string_list(std::string_view text) {
  RefListResult result;
  size_t open = text.find('[');
  if (open == std::string_view::npos) return result;
  RefCursor c{text, open + 1};
  c.skip_ws();
  if (c.at_end()) return result;
  if (c.peek() == ']') {
    result.ok = true;
    return result;
  }
  while (true) {
    c.skip_ws();
    if (c.at_end()) return result;
    if (c.peek() == ']') {  // trailing comma
      result.ok = true;
      return result;
    }
    if (c.peek() != '"' && c.peek() != '\'') {
      result.mentions.clear();
      return result;
    }
    std::string mention;
    if (!ref_parse_string(c, mention)) {
      result.mentions.clear();
      return result;
    }
    result.mentions.push_back(mention);
    c.skip_ws();
    if (c.at_end()) {
      result.mentions.clear();
      return result;
    }
    if (c.peek() == ',') {
      ++c.i;
      continue;
    }
    if (c.peek() == ']') {
      result.ok = true;
      return result;
    }
    result.mentions.clear();
    return result;
  }
}

// ---- brute-force scoring oracles ----

// Strict credit by per-key multiset min counts.
inline uint64_t ref_strict_tp(
    const std::vector<forge::GoldEntity>& gold,
    const std::vector<std::pair<std::string, std::string>>& preds) {
  std::map<std::pair<std::string, std::string>, uint64_t> gold_counts;
  std::map<std::pair<std::string, std::string>, uint64_t> pred_counts;
  for (const auto& g : gold) ++gold_counts[{g.entity_type, g.mention}];
  for (const auto& p : preds) ++pred_counts[p];
  uint64_t tp = 0;
  for (const auto& [key, gc] : gold_counts) {
    auto it = pred_counts.find(key);
    if (it != pred_counts.end()) tp += std::min(gc, it->second);
  }
  return tp;
}

// Maximum total credit over all gold/prediction pairings, where an exact
// pair is worth 1.0 and a same-type token-overlap pair 0.5. Exhaustive
// recursion; intended for records with at most ~6 items per side.
inline uint64_t ref_max_pairing_credit_x2(
    const std::vector<forge::GoldEntity>& gold,
    const std::vector<std::pair<std::string, std::string>>& preds) {
  std::vector<bool> gold_used(gold.size(), false);

  std::function<uint64_t(size_t)> best = [&](size_t p) -> uint64_t {
    if (p >= preds.size()) return 0;
    uint64_t result = best(p + 1);  // leave prediction p unpaired
    for (size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g]) continue;
      uint64_t weight_x2 = 0;
      bool type_match = gold[g].entity_type == preds[p].first;
      if (type_match && gold[g].mention == preds[p].second)
        weight_x2 = 2;
      else if (type_match &&
               forge::tokens_overlap(gold[g].mention, preds[p].second))
        weight_x2 = 1;
      if (weight_x2 == 0) continue;
      gold_used[g] = true;
      result = std::max(result, weight_x2 + best(p + 1));
      gold_used[g] = false;
    }
    return result;
  };
  return best(0);
}

// ---- counting oracle ----

inline std::map<std::string, uint64_t> ref_count_types(
    const std::vector<forge::AnnotatedPassage>& annotated) {
  std::map<std::string, uint64_t> counts;
  for (const auto& ap : annotated) {
    if (ap.status != forge::AnnotationStatus::Ok) continue;
    for (const auto& e : ap.entities) ++counts[e.entity_type];
  }
  return counts;
}

// ---- subset-enumeration oracle for uniform sampling ----

// Expected inclusion probability of each item when drawing k of n uniformly
// without replacement, computed by enumerating all C(n, k) subsets.
inline std::vector<double> ref_inclusion_probabilities(size_t n, size_t k) {
  std::vector<uint64_t> member_counts(n, 0);
  uint64_t subsets = 0;
  for (uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    if (static_cast<size_t>(__builtin_popcountll(mask)) != k) continue;
    ++subsets;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ULL << i)) ++member_counts[i];
  }
  std::vector<double> probs(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    probs[i] = subsets == 0
                   ? 0.0
                   : static_cast<double>(member_counts[i]) /
                         static_cast<double>(subsets);
  return probs;
}

// Chi-square statistic against given expected counts.
inline double chi_square(const std::vector<uint64_t>& observed,
                         const std::vector<double>& expected) {
  double stat = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

// chi-square 0.999 quantiles (p > 0.001 acceptance thresholds) by dof.
inline double chi_square_crit_999(size_t dof) {
  static const double table[] = {0,      10.828, 13.816, 16.266, 18.467,
                                 20.515, 22.458, 24.322, 26.124, 27.877};
  return table[dof];
}

}  // namespace oracle
