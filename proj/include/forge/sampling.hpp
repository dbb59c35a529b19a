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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/rng.hpp"
#include "forge/stats.hpp"

namespace forge {

enum class NegativeSampling { None, Uniform, Frequency };

inline const char* to_string(NegativeSampling s) {
  switch (s) {
    case NegativeSampling::None: return "none";
    case NegativeSampling::Uniform: return "uniform";
    case NegativeSampling::Frequency: return "frequency";
  }
  return "none";
}

inline NegativeSampling negative_sampling_from(const std::string& s) {
  if (s == "none") return NegativeSampling::None;
  if (s == "uniform") return NegativeSampling::Uniform;
  if (s == "frequency") return NegativeSampling::Frequency;
  raise(ErrorCode::ConfigError, "unknown negative sampling strategy '" + s + "'");
}

struct NegativeSamplingStrategy {
  NegativeSampling strategy = NegativeSampling::Frequency;
  uint32_t k = 2;                  // negatives per example
  TypeFrequencyTable vocabulary;   // frequency source for Frequency draws
  uint64_t seed = 0;
};

// Draws negative types from a candidate pool, without replacement.
// Frequency weights each candidate by its vocabulary count (renormalizing
// after every draw); candidates absent from the vocabulary weigh 1 so a
// restricted pool is always fully reachable. Uniform weighs every candidate
// equally. Returns min(k, |pool|) types in draw order; short pools clamp
// rather than fail.
inline std::vector<std::string> sample_negatives_from_pool(
    const std::vector<std::string>& pool, const NegativeSamplingStrategy& neg,
    Rng& rng) {
  if (neg.strategy == NegativeSampling::None) return {};

  std::vector<std::string> candidates = pool;
  std::vector<double> weights;
  weights.reserve(candidates.size());
  for (const auto& type : candidates) {
    if (neg.strategy == NegativeSampling::Uniform) {
      weights.push_back(1.0);
    } else {
      auto it = neg.vocabulary.entries.find(type);
      weights.push_back(
          it != neg.vocabulary.entries.end() && it->second > 0
              ? static_cast<double>(it->second)
              : 1.0);
    }
  }

  size_t draws = std::min<size_t>(neg.k, candidates.size());
  std::vector<std::string> picked;
  picked.reserve(draws);
  for (size_t d = 0; d < draws; ++d) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = rng.unit() * total;
    size_t chosen = candidates.size() - 1;
    double cumulative = 0.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      cumulative += weights[i];
      if (x < cumulative) {
        chosen = i;
        break;
      }
    }
    picked.push_back(candidates[chosen]);
    candidates.erase(candidates.begin() + static_cast<ptrdiff_t>(chosen));
    weights.erase(weights.begin() + static_cast<ptrdiff_t>(chosen));
  }
  return picked;
}

// Zero-shot pool: every vocabulary type that is not a positive, in
// lexicographic order (std::map iteration) so draws are reproducible.
inline std::vector<std::string> negative_pool(
    const std::set<std::string>& positives,
    const TypeFrequencyTable& vocabulary) {
  std::vector<std::string> pool;
  for (const auto& [type, count] : vocabulary.entries) {
    (void)count;
    if (!positives.count(type)) pool.push_back(type);
  }
  return pool;
}

inline std::vector<std::string> sample_negatives(
    const std::set<std::string>& positives,
    const NegativeSamplingStrategy& neg, const std::string& example_id) {
  if (neg.strategy == NegativeSampling::None) return {};
  if (neg.vocabulary.entries.empty())
    raise(ErrorCode::ConfigError,
          "negative sampling requires a non-empty type vocabulary");
  Rng rng(derive_seed(neg.seed, example_id));
  return sample_negatives_from_pool(negative_pool(positives, neg.vocabulary),
                                    neg, rng);
}

}  // namespace forge
