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

#include <fstream>
#include <map>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"

namespace forge {

// Per-dataset label policy: a raw label is either renamed to a natural
// lowercase name or dropped. The map lives in a JSON config file so users
// can extend it without touching code:
//
//   { "conll03": { "per": "person", "misc": null }, ... }
//
// where a string value renames and null drops.
struct LabelAction {
  bool drop = false;
  std::string natural;  // valid when !drop

  bool operator==(const LabelAction&) const = default;
};

struct LabelMap {
  std::map<std::string, std::map<std::string, LabelAction>> datasets;

  const std::map<std::string, LabelAction>& for_dataset(
      const std::string& dataset) const {
    auto it = datasets.find(dataset);
    if (it == datasets.end())
      raise(ErrorCode::UnknownDataset,
            "dataset '" + dataset + "' is not in the label map");
    return it->second;
  }

  // All natural names a dataset's records may carry.
  std::set<std::string> allowed_types(const std::string& dataset) const {
    std::set<std::string> allowed;
    for (const auto& [raw, action] : for_dataset(dataset))
      if (!action.drop) allowed.insert(action.natural);
    return allowed;
  }
};

inline bool is_natural_label(const std::string& name) {
  if (name.empty() || name.front() == ' ' || name.back() == ' ') return false;
  bool prev_space = false;
  for (char c : name) {
    if (c == ' ') {
      if (prev_space) return false;
      prev_space = true;
      continue;
    }
    prev_space = false;
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

inline LabelMap parse_label_map(const nlohmann::json& j) {
  if (!j.is_object())
    raise(ErrorCode::ConfigError, "label map must be a JSON object");
  LabelMap map;
  for (const auto& [dataset, labels] : j.items()) {
    if (!labels.is_object())
      raise(ErrorCode::ConfigError,
            "label map for dataset '" + dataset + "' must be an object");
    for (const auto& [raw, action] : labels.items()) {
      LabelAction a;
      if (action.is_null()) {
        a.drop = true;
      } else if (action.is_string()) {
        a.natural = action.get<std::string>();
        if (!is_natural_label(a.natural))
          raise(ErrorCode::ConfigError,
                "label map target '" + a.natural +
                    "' is not a lowercase space-separated name");
      } else {
        raise(ErrorCode::ConfigError, "label map entry '" + dataset + "." +
                                          raw + "' must be a string or null");
      }
      map.datasets[dataset][raw] = a;
    }
  }
  return map;
}

inline LabelMap load_label_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open label map " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    raise(ErrorCode::ConfigError, "label map " + path + " is not valid JSON");
  return parse_label_map(j);
}

}  // namespace forge
