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
#include <string>

#include <nlohmann/json.hpp>

namespace forge {

// Locale-independent fixed-point rendering (no %f: the decimal separator
// must stay '.' whatever the process locale says).
inline std::string format_fixed(double value, int digits) {
  uint64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  uint64_t scaled =
      static_cast<uint64_t>(value * static_cast<double>(scale) + 0.5);
  std::string integral = std::to_string(scaled / scale);
  if (digits == 0) return integral;
  std::string frac = std::to_string(scaled % scale);
  return integral + "." +
         std::string(static_cast<size_t>(digits) - frac.size(), '0') + frac;
}

inline std::string json_quote(const std::string& s) {
  return nlohmann::json(s).dump();
}

}  // namespace forge
