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
#include <cstdio>
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/text.hpp"
#include "forge/types.hpp"

namespace forge {

struct ChunkConfig {
  uint64_t max_tokens = 256;
  uint64_t sample_size = 50000;
  uint64_t seed = 0;
};

inline void validate(const ChunkConfig& cfg) {
  if (cfg.max_tokens < 1)
    raise(ErrorCode::ConfigError, "max_tokens must be >= 1");
}

// Splits an article into passages of at most max_tokens whitespace tokens.
// Boundaries fall only between tokens, never mid-word; every chunk except
// possibly the last is exactly max_tokens long, so concatenating the chunk
// token sequences reproduces the article's token sequence. Chunk text is
// the tokens joined by single spaces. A whitespace-only article yields no
// chunks.
//
// Passage ids are "<source>#<index>"; start_index lets a caller keep one
// running counter per source across many articles of the same subset.
inline std::vector<Passage> chunk_article(const std::string& article_text,
                                          const std::string& source,
                                          const ChunkConfig& cfg,
                                          uint64_t start_index = 0) {
  validate(cfg);
  std::string normalized = nfc(article_text);
  auto tokens = split_tokens(normalized);
  std::vector<Passage> chunks;
  if (tokens.empty()) return chunks;
  size_t n_chunks = (tokens.size() + cfg.max_tokens - 1) / cfg.max_tokens;
  chunks.reserve(n_chunks);
  for (size_t c = 0; c < n_chunks; ++c) {
    size_t begin = c * cfg.max_tokens;
    size_t end = std::min(tokens.size(), begin + cfg.max_tokens);
    char idx[24];
    std::snprintf(idx, sizeof(idx), "%06llu",
                  static_cast<unsigned long long>(start_index + c));
    chunks.push_back(make_passage(source + "#" + idx, source,
                                  join_tokens(tokens, begin, end)));
  }
  return chunks;
}

}  // namespace forge
