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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/text.hpp"

// Shared value types for every pipeline stage. All of them are immutable
// after construction in practice (the factories below are the only mutation
// points) and safe to share across threads. Construction normalizes every
// text field to NFC and rejects invariant violations with InvariantError.

namespace forge {

enum class AnnotationKind { TypeName, Definition };
enum class AnnotationStatus { Ok, Malformed };
enum class Role { System, User, Assistant };

struct Passage {
  std::string id;
  std::string source;
  std::string text;
  uint64_t token_count = 0;

  bool operator==(const Passage&) const = default;
};

struct EntityAnnotation {
  std::string mention;
  std::string entity_type;
  AnnotationKind kind = AnnotationKind::TypeName;

  bool operator==(const EntityAnnotation&) const = default;
};

struct AnnotatedPassage {
  Passage passage;
  std::vector<EntityAnnotation> entities;
  std::string raw_response;
  AnnotationStatus status = AnnotationStatus::Ok;

  bool operator==(const AnnotatedPassage&) const = default;
};

struct Message {
  Role role = Role::System;
  std::string content;
  bool in_loss = false;

  bool operator==(const Message&) const = default;
};

struct ConversationExample {
  std::string id;
  std::optional<std::string> dataset;
  std::vector<Message> messages;

  bool operator==(const ConversationExample&) const = default;
};

struct GoldEntity {
  std::string entity_type;
  std::string mention;

  bool operator==(const GoldEntity&) const = default;
};

struct BenchmarkRecord {
  std::string id;
  std::string dataset;
  std::string domain;
  std::string text;
  std::vector<GoldEntity> gold;        // multiset; order and counts preserved
  std::set<std::string> allowed_types;

  bool operator==(const BenchmarkRecord&) const = default;
};

struct PredictionRecord {
  std::string record_id;
  std::string entity_type;
  std::vector<std::string> mentions;   // multiset; order and counts preserved
  bool parse_ok = true;

  bool operator==(const PredictionRecord&) const = default;
};

inline Passage make_passage(std::string id, std::string source,
                            std::string text) {
  Passage p;
  p.id = std::move(id);
  p.source = std::move(source);
  p.text = nfc(text);
  if (trim(p.text).empty())
    raise(ErrorCode::InvariantError, "Passage.text is empty after trimming");
  p.token_count = count_tokens(p.text);
  return p;
}

inline void validate(const Passage& p) {
  if (trim(p.text).empty())
    raise(ErrorCode::InvariantError, "Passage.text is empty after trimming");
  if (p.token_count != count_tokens(p.text))
    raise(ErrorCode::InvariantError,
          "Passage.token_count does not match the whitespace-token count");
}

inline EntityAnnotation make_annotation(std::string mention,
                                        std::string entity_type,
                                        AnnotationKind kind) {
  EntityAnnotation a;
  a.mention = nfc(mention);
  a.entity_type = nfc(entity_type);
  a.kind = kind;
  if (a.mention.empty())
    raise(ErrorCode::InvariantError, "EntityAnnotation.mention is empty");
  if (a.entity_type.empty())
    raise(ErrorCode::InvariantError, "EntityAnnotation.entity_type is empty");
  return a;
}

inline void validate(const EntityAnnotation& a) {
  if (a.mention.empty())
    raise(ErrorCode::InvariantError, "EntityAnnotation.mention is empty");
  if (a.entity_type.empty())
    raise(ErrorCode::InvariantError, "EntityAnnotation.entity_type is empty");
}

inline void validate(const AnnotatedPassage& ap) {
  validate(ap.passage);
  for (const auto& e : ap.entities) validate(e);
  if (ap.status == AnnotationStatus::Malformed && !ap.entities.empty())
    raise(ErrorCode::InvariantError,
          "AnnotatedPassage.entities must be empty when status is malformed");
}

inline AnnotatedPassage make_annotated_passage(
    Passage passage, std::vector<EntityAnnotation> entities,
    std::string raw_response, AnnotationStatus status) {
  AnnotatedPassage ap;
  ap.passage = std::move(passage);
  ap.entities = std::move(entities);
  ap.raw_response = std::move(raw_response);
  ap.status = status;
  validate(ap);
  return ap;
}

// Groups entities by type in first-appearance order, mentions kept in
// annotation order. This is the exact view the conversation templates
// consume.
inline std::vector<std::pair<std::string, std::vector<std::string>>>
group_entities_by_type(const std::vector<EntityAnnotation>& entities) {
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  for (const auto& e : entities) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == e.entity_type; });
    if (it == groups.end()) {
      groups.push_back({e.entity_type, {e.mention}});
    } else {
      it->second.push_back(e.mention);
    }
  }
  return groups;
}

// Content of an in-loss assistant turn must be structured output: a JSON
// list of mention strings, or a JSON object mapping each queried type to
// such a list (the all-in-one template).
inline bool is_structured_assistant_content(const std::string& content) {
  auto parsed = nlohmann::json::parse(content, nullptr, false);
  if (parsed.is_discarded()) return false;
  auto is_mention_list = [](const nlohmann::json& j) {
    if (!j.is_array()) return false;
    return std::all_of(j.begin(), j.end(),
                       [](const nlohmann::json& v) { return v.is_string(); });
  };
  if (is_mention_list(parsed)) return true;
  if (parsed.is_object()) {
    for (const auto& [key, value] : parsed.items()) {
      (void)key;
      if (!is_mention_list(value)) return false;
    }
    return true;
  }
  return false;
}

inline Message make_message(Role role, std::string content, bool in_loss) {
  Message m;
  m.role = role;
  m.content = std::move(content);
  m.in_loss = in_loss;
  if (m.in_loss && m.role != Role::Assistant)
    raise(ErrorCode::InvariantError,
          "Message.in_loss is only permitted on assistant messages");
  if (m.in_loss && !is_structured_assistant_content(m.content))
    raise(ErrorCode::InvariantError,
          "Message.in_loss requires JSON-structured assistant content");
  return m;
}

inline void validate(const Message& m) {
  if (m.in_loss && m.role != Role::Assistant)
    raise(ErrorCode::InvariantError,
          "Message.in_loss is only permitted on assistant messages");
  if (m.in_loss && !is_structured_assistant_content(m.content))
    raise(ErrorCode::InvariantError,
          "Message.in_loss requires JSON-structured assistant content");
}

inline void validate(const ConversationExample& c) {
  if (c.messages.empty())
    raise(ErrorCode::InvariantError, "ConversationExample.messages is empty");
  if (c.messages.front().role != Role::System)
    raise(ErrorCode::InvariantError,
          "ConversationExample.messages must start with the system preamble");
  for (size_t i = 1; i < c.messages.size(); ++i) {
    Role expected = (i % 2 == 1) ? Role::User : Role::Assistant;
    if (c.messages[i].role != expected)
      raise(ErrorCode::InvariantError,
            "ConversationExample.messages must alternate user/assistant");
  }
  if (c.dataset && c.dataset->find('\n') != std::string::npos)
    raise(ErrorCode::InvariantError,
          "ConversationExample.dataset must not contain newlines");
  for (const auto& m : c.messages) validate(m);
}

inline ConversationExample make_conversation(
    std::string id, std::optional<std::string> dataset,
    std::vector<Message> messages) {
  ConversationExample c;
  c.id = std::move(id);
  c.dataset = std::move(dataset);
  c.messages = std::move(messages);
  validate(c);
  return c;
}

inline void validate(const BenchmarkRecord& r) {
  for (const auto& g : r.gold) {
    if (!r.allowed_types.count(g.entity_type))
      raise(ErrorCode::InvariantError,
            "BenchmarkRecord.gold entity_type '" + g.entity_type +
                "' is not in allowed_types");
    if (r.text.find(g.mention) == std::string::npos)
      raise(ErrorCode::InvariantError,
            "BenchmarkRecord.gold mention '" + g.mention +
                "' is not a substring of text");
  }
}

inline BenchmarkRecord make_benchmark_record(
    std::string id, std::string dataset, std::string domain, std::string text,
    std::vector<GoldEntity> gold, std::set<std::string> allowed_types) {
  BenchmarkRecord r;
  r.id = std::move(id);
  r.dataset = std::move(dataset);
  r.domain = std::move(domain);
  r.text = nfc(text);
  for (auto& g : gold)
    r.gold.push_back({nfc(g.entity_type), nfc(g.mention)});
  for (const auto& t : allowed_types) r.allowed_types.insert(nfc(t));
  validate(r);
  return r;
}

inline void validate(const PredictionRecord& p) {
  if (!p.parse_ok && !p.mentions.empty())
    raise(ErrorCode::InvariantError,
          "PredictionRecord.mentions must be empty when parse_ok is false");
}

inline PredictionRecord make_prediction_record(std::string record_id,
                                               std::string entity_type,
                                               std::vector<std::string> mentions,
                                               bool parse_ok) {
  PredictionRecord p;
  p.record_id = std::move(record_id);
  p.entity_type = nfc(entity_type);
  for (auto& m : mentions) p.mentions.push_back(nfc(m));
  p.parse_ok = parse_ok;
  validate(p);
  return p;
}

}  // namespace forge
