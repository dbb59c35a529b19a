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
#include <cstdint>
#include <vector>

#include "forge/chunker.hpp"
#include "forge/rng.hpp"
#include "forge/types.hpp"

namespace forge {

// Single-pass uniform sample without replacement (Waterman's algorithm R):
// the first k items fill the reservoir; item i (0-based) then replaces a
// uniformly chosen slot with probability k/(i+1). Identical (stream order,
// seed) gives identical output.
template <typename T>
class ReservoirSampler {
 public:
  ReservoirSampler(uint64_t capacity, uint64_t seed)
      : capacity_(capacity), rng_(seed) {}

  void add(T item) {
    if (capacity_ == 0) {
      ++seen_;
      return;
    }
    if (reservoir_.size() < capacity_) {
      reservoir_.push_back(std::move(item));
    } else {
      uint64_t j = rng_.below(seen_ + 1);
      if (j < capacity_) reservoir_[static_cast<size_t>(j)] = std::move(item);
    }
    ++seen_;
  }

  uint64_t seen() const { return seen_; }

  std::vector<T> take() { return std::move(reservoir_); }

 private:
  uint64_t capacity_;
  Rng rng_;
  uint64_t seen_ = 0;
  std::vector<T> reservoir_;
};

// Draws min(sample_size, population) passages uniformly without replacement.
// The reservoir is draw-deterministic per (stream order, seed); the result
// is emitted in stable id order.
inline std::vector<Passage> sample_passages(const std::vector<Passage>& chunks,
                                            const ChunkConfig& cfg) {
  ReservoirSampler<Passage> sampler(cfg.sample_size, cfg.seed);
  for (const auto& p : chunks) sampler.add(p);
  auto sample = sampler.take();
  std::sort(sample.begin(), sample.end(),
            [](const Passage& a, const Passage& b) { return a.id < b.id; });
  return sample;
}

}  // namespace forge
