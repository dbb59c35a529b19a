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

#include <string>
#include <string_view>
#include <vector>

#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include "forge/error.hpp"

namespace forge {

// A token is a maximal run of non-whitespace bytes. Whitespace is the ASCII
// set {' ', '\t', '\n', '\v', '\f', '\r'}; all of these are single bytes that
// never occur inside a UTF-8 multi-byte sequence, so tokenization is UTF-8
// safe without decoding.
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

inline std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

inline uint64_t count_tokens(std::string_view text) {
  return split_tokens(text).size();
}

inline std::string_view trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline std::string join_tokens(const std::vector<std::string_view>& tokens,
                               size_t begin, size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out.append(tokens[i]);
  }
  return out;
}

// True when the two strings share at least one whitespace token. Comparison
// is exact and case-sensitive; inputs are expected to be NFC-normalized
// already (all ingestion paths normalize).
inline bool tokens_overlap(std::string_view a, std::string_view b) {
  auto ta = split_tokens(a);
  auto tb = split_tokens(b);
  for (auto x : ta)
    for (auto y : tb)
      if (x == y) return true;
  return false;
}

// Unicode NFC normalization via ICU. Invalid UTF-8 is passed through
// untouched rather than rejected; comparisons on such strings degrade to
// byte equality.
inline std::string nfc(std::string_view input) {
  if (input.empty()) return std::string();
  UErrorCode ec = U_ZERO_ERROR;
  const UNormalizer2* norm = unorm2_getNFCInstance(&ec);
  if (U_FAILURE(ec)) raise(ErrorCode::IoError, "ICU NFC instance unavailable");

  std::vector<UChar> u16(input.size() + 1);
  int32_t u16_len = 0;
  u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16_len,
                input.data(), static_cast<int32_t>(input.size()), &ec);
  if (U_FAILURE(ec)) return std::string(input);

  // Fast path: already normalized (the overwhelmingly common case).
  UErrorCode qec = U_ZERO_ERROR;
  if (unorm2_isNormalized(norm, u16.data(), u16_len, &qec) && U_SUCCESS(qec))
    return std::string(input);

  std::vector<UChar> out16(static_cast<size_t>(u16_len) * 3 + 16);
  ec = U_ZERO_ERROR;
  int32_t out16_len =
      unorm2_normalize(norm, u16.data(), u16_len, out16.data(),
                       static_cast<int32_t>(out16.size()), &ec);
  if (U_FAILURE(ec)) return std::string(input);

  std::string out(static_cast<size_t>(out16_len) * 4 + 4, '\0');
  int32_t out_len = 0;
  ec = U_ZERO_ERROR;
  u_strToUTF8(out.data(), static_cast<int32_t>(out.size()), &out_len,
              out16.data(), out16_len, &ec);
  if (U_FAILURE(ec)) return std::string(input);
  out.resize(static_cast<size_t>(out_len));
  return out;
}

}  // namespace forge
