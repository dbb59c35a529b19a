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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/types.hpp"

namespace forge {

// Entity-type frequency distribution over an annotation set. Counts are
// mention occurrences (a type seen twice in one passage counts twice),
// type strings are raw and case-sensitive. Empty input is the sole case
// with total 0.
struct TypeFrequencyTable {
  std::map<std::string, uint64_t> entries;
  uint64_t total = 0;

  void add(const std::string& entity_type, uint64_t n = 1) {
    entries[entity_type] += n;
    total += n;
  }

  // Partial tables merged by addition equal the sequential fold.
  void merge(const TypeFrequencyTable& other) {
    for (const auto& [type, count] : other.entries) add(type, count);
  }
};

inline void validate(const TypeFrequencyTable& t) {
  uint64_t sum = 0;
  for (const auto& [type, count] : t.entries) {
    if (count == 0)
      raise(ErrorCode::InvariantError,
            "TypeFrequencyTable has zero-count entry '" + type + "'");
    sum += count;
  }
  if (sum != t.total)
    raise(ErrorCode::InvariantError,
          "TypeFrequencyTable.total does not equal the sum of counts");
}

template <typename Iterable>
TypeFrequencyTable count_types(const Iterable& annotated) {
  TypeFrequencyTable table;
  for (const AnnotatedPassage& ap : annotated) {
    if (ap.status != AnnotationStatus::Ok) continue;
    for (const auto& e : ap.entities) table.add(e.entity_type);
  }
  return table;
}

// Types ranked by descending count, ties broken lexicographically.
inline std::vector<std::pair<std::string, uint64_t>> ranked_types(
    const TypeFrequencyTable& table) {
  std::vector<std::pair<std::string, uint64_t>> ranked(table.entries.begin(),
                                                       table.entries.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

struct FrequencyBucket {
  std::string label;                    // "top 1%", "1-10%", "10-100%"
  uint64_t type_count = 0;
  uint64_t frequency = 0;               // summed counts in this bucket
  double share = 0.0;                   // frequency / total
  std::vector<std::string> top_types;   // up to 10 most frequent members
};

struct BucketReport {
  std::vector<FrequencyBucket> buckets;  // exactly 3
};

// Heavy-tail report over type ranks: the top ceil(1% of |types|) types, the
// next ranks through ceil(10%), and the rest. Shares sum to 1 over the
// 3 buckets.
inline BucketReport bucket_report(const TypeFrequencyTable& table) {
  if (table.entries.empty() || table.total == 0)
    raise(ErrorCode::EmptyTable, "bucket_report requires a non-empty table");
  auto ranked = ranked_types(table);
  size_t n = ranked.size();
  size_t b1 = static_cast<size_t>(
      std::ceil(0.01 * static_cast<double>(n)));
  size_t b2 = static_cast<size_t>(
      std::ceil(0.10 * static_cast<double>(n)));
  b1 = std::max<size_t>(b1, 1);
  b2 = std::max(b2, b1);

  BucketReport report;
  const struct {
    const char* label;
    size_t begin, end;
  } ranges[3] = {{"top 1%", 0, b1}, {"1-10%", b1, b2}, {"10-100%", b2, n}};
  for (const auto& range : ranges) {
    FrequencyBucket bucket;
    bucket.label = range.label;
    for (size_t i = range.begin; i < range.end && i < n; ++i) {
      bucket.type_count += 1;
      bucket.frequency += ranked[i].second;
      if (bucket.top_types.size() < 10) bucket.top_types.push_back(ranked[i].first);
    }
    bucket.share =
        static_cast<double>(bucket.frequency) / static_cast<double>(table.total);
    report.buckets.push_back(std::move(bucket));
  }
  return report;
}

}  // namespace forge
