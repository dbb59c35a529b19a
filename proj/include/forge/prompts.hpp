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
#include <utility>

#include "forge/types.hpp"

namespace forge {

enum class PromptVariant { TypeName, Definition };

struct ConstructionPrompt {
  std::string system_message;
  std::string user_message;
};

// The two data-construction prompts are fixed byte-for-byte; the passage is
// the single substitution point and is inserted literally (no further
// templating, braces and all).
inline constexpr const char* kConstructionSystemMessage =
    "You are a helpful information extraction system.";

inline constexpr const char* kTypeNameTask =
    "extract all entities and identify their entity types";

inline constexpr const char* kDefinitionTask =
    "extract all entities and concepts, and define their type using a short "
    "sentence";

inline ConstructionPrompt render_construction_prompt(const Passage& passage,
                                                     PromptVariant variant) {
  const char* task = variant == PromptVariant::TypeName ? kTypeNameTask
                                                        : kDefinitionTask;
  std::string user = "Given a passage, your task is to ";
  user += task;
  user +=
      ". The output should be in a list of tuples of the following format: "
      "[(\"entity 1\", \"type of entity 1\"), ... ].\n\nPassage: ";
  user += passage.text;
  return {kConstructionSystemMessage, std::move(user)};
}

}  // namespace forge
