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
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/types.hpp"

// Canonical JSONL serialization: one record per line, UTF-8, LF endings,
// fixed key order, no insignificant whitespace. Serialization of a valid
// record is deterministic down to the byte, and equality of records is
// equality of their serialized lines.

namespace forge {

using ojson = nlohmann::ordered_json;

namespace detail {

inline void expect_keys(const ojson& j, std::initializer_list<const char*> keys,
                        const char* type_name) {
  if (!j.is_object())
    raise(ErrorCode::SchemaError,
          std::string(type_name) + ": expected a JSON object");
  for (const char* k : keys)
    if (!j.contains(k))
      raise(ErrorCode::SchemaError,
            std::string(type_name) + ": missing field '" + k + "'");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* k : keys)
      if (key == k) known = true;
    if (!known)
      raise(ErrorCode::SchemaError,
            std::string(type_name) + ": unexpected field '" + key + "'");
  }
}

inline std::string get_string(const ojson& j, const char* field,
                              const char* type_name) {
  if (!j.at(field).is_string())
    raise(ErrorCode::SchemaError, std::string(type_name) + ": field '" +
                                      field + "' must be a string");
  return j.at(field).get<std::string>();
}

inline uint64_t get_uint(const ojson& j, const char* field,
                         const char* type_name) {
  if (!j.at(field).is_number_unsigned())
    raise(ErrorCode::SchemaError,
          std::string(type_name) + ": field '" + field +
              "' must be a non-negative integer");
  return j.at(field).get<uint64_t>();
}

inline bool get_bool(const ojson& j, const char* field, const char* type_name) {
  if (!j.at(field).is_boolean())
    raise(ErrorCode::SchemaError, std::string(type_name) + ": field '" +
                                      field + "' must be a boolean");
  return j.at(field).get<bool>();
}

inline ojson parse_line(const std::string& line, const char* type_name) {
  ojson j = ojson::parse(line, nullptr, false);
  if (j.is_discarded())
    raise(ErrorCode::SyntaxError,
          std::string(type_name) + ": line is not valid JSON");
  return j;
}

}  // namespace detail

// ---- enum spellings ----

inline const char* to_string(AnnotationKind k) {
  return k == AnnotationKind::TypeName ? "type_name" : "definition";
}
inline const char* to_string(AnnotationStatus s) {
  return s == AnnotationStatus::Ok ? "ok" : "malformed";
}
inline const char* to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "system";
}

inline AnnotationKind annotation_kind_from(const std::string& s) {
  if (s == "type_name") return AnnotationKind::TypeName;
  if (s == "definition") return AnnotationKind::Definition;
  raise(ErrorCode::SchemaError, "unknown annotation kind '" + s + "'");
}
inline AnnotationStatus annotation_status_from(const std::string& s) {
  if (s == "ok") return AnnotationStatus::Ok;
  if (s == "malformed") return AnnotationStatus::Malformed;
  raise(ErrorCode::SchemaError, "unknown annotation status '" + s + "'");
}
inline Role role_from(const std::string& s) {
  if (s == "system") return Role::System;
  if (s == "user") return Role::User;
  if (s == "assistant") return Role::Assistant;
  raise(ErrorCode::SchemaError, "unknown role '" + s + "'");
}

// ---- to canonical JSON ----

inline ojson to_json(const Passage& p) {
  return ojson{{"id", p.id},
               {"source", p.source},
               {"text", p.text},
               {"token_count", p.token_count}};
}

inline ojson to_json(const EntityAnnotation& a) {
  return ojson{{"mention", a.mention},
               {"entity_type", a.entity_type},
               {"kind", to_string(a.kind)}};
}

inline ojson to_json(const AnnotatedPassage& ap) {
  ojson entities = ojson::array();
  for (const auto& e : ap.entities) entities.push_back(to_json(e));
  return ojson{{"passage", to_json(ap.passage)},
               {"entities", entities},
               {"raw_response", ap.raw_response},
               {"status", to_string(ap.status)}};
}

inline ojson to_json(const Message& m) {
  return ojson{{"role", to_string(m.role)},
               {"content", m.content},
               {"in_loss", m.in_loss}};
}

inline ojson to_json(const ConversationExample& c) {
  ojson messages = ojson::array();
  for (const auto& m : c.messages) messages.push_back(to_json(m));
  return ojson{{"id", c.id},
               {"dataset", c.dataset ? ojson(*c.dataset) : ojson(nullptr)},
               {"messages", messages}};
}

inline ojson to_json(const BenchmarkRecord& r) {
  ojson gold = ojson::array();
  for (const auto& g : r.gold)
    gold.push_back(ojson{{"entity_type", g.entity_type}, {"mention", g.mention}});
  ojson allowed = ojson::array();
  for (const auto& t : r.allowed_types) allowed.push_back(t);  // sorted: std::set
  return ojson{{"id", r.id},      {"dataset", r.dataset},
               {"domain", r.domain}, {"text", r.text},
               {"gold", gold},    {"allowed_types", allowed}};
}

inline ojson to_json(const PredictionRecord& p) {
  return ojson{{"record_id", p.record_id},
               {"entity_type", p.entity_type},
               {"mentions", p.mentions},
               {"parse_ok", p.parse_ok}};
}

// Serialization of a constructed record never fails: stray invalid UTF-8
// (possible in raw_response bytes echoed from a backend) is replaced with
// U+FFFD rather than raising.
template <typename T>
std::string serialize(const T& record) {
  return to_json(record).dump(-1, ' ', false,
                              nlohmann::json::error_handler_t::replace);
}

// ---- from canonical JSON ----

template <typename T>
T deserialize(const std::string& line);

template <>
inline Passage deserialize<Passage>(const std::string& line) {
  ojson j = detail::parse_line(line, "Passage");
  detail::expect_keys(j, {"id", "source", "text", "token_count"}, "Passage");
  Passage p;
  p.id = detail::get_string(j, "id", "Passage");
  p.source = detail::get_string(j, "source", "Passage");
  p.text = detail::get_string(j, "text", "Passage");
  p.token_count = detail::get_uint(j, "token_count", "Passage");
  validate(p);
  return p;
}

template <>
inline EntityAnnotation deserialize<EntityAnnotation>(const std::string& line) {
  ojson j = detail::parse_line(line, "EntityAnnotation");
  detail::expect_keys(j, {"mention", "entity_type", "kind"}, "EntityAnnotation");
  EntityAnnotation a;
  a.mention = detail::get_string(j, "mention", "EntityAnnotation");
  a.entity_type = detail::get_string(j, "entity_type", "EntityAnnotation");
  a.kind = annotation_kind_from(detail::get_string(j, "kind", "EntityAnnotation"));
  validate(a);
  return a;
}

template <>
inline AnnotatedPassage deserialize<AnnotatedPassage>(const std::string& line) {
  ojson j = detail::parse_line(line, "AnnotatedPassage");
  detail::expect_keys(j, {"passage", "entities", "raw_response", "status"},
                      "AnnotatedPassage");
  AnnotatedPassage ap;
  ap.passage = deserialize<Passage>(j.at("passage").dump());
  if (!j.at("entities").is_array())
    raise(ErrorCode::SchemaError, "AnnotatedPassage: 'entities' must be a list");
  for (const auto& e : j.at("entities"))
    ap.entities.push_back(deserialize<EntityAnnotation>(e.dump()));
  ap.raw_response = detail::get_string(j, "raw_response", "AnnotatedPassage");
  ap.status =
      annotation_status_from(detail::get_string(j, "status", "AnnotatedPassage"));
  validate(ap);
  return ap;
}

template <>
inline Message deserialize<Message>(const std::string& line) {
  ojson j = detail::parse_line(line, "Message");
  detail::expect_keys(j, {"role", "content", "in_loss"}, "Message");
  Message m;
  m.role = role_from(detail::get_string(j, "role", "Message"));
  m.content = detail::get_string(j, "content", "Message");
  m.in_loss = detail::get_bool(j, "in_loss", "Message");
  validate(m);
  return m;
}

template <>
inline ConversationExample deserialize<ConversationExample>(
    const std::string& line) {
  ojson j = detail::parse_line(line, "ConversationExample");
  detail::expect_keys(j, {"id", "dataset", "messages"}, "ConversationExample");
  ConversationExample c;
  c.id = detail::get_string(j, "id", "ConversationExample");
  if (j.at("dataset").is_string())
    c.dataset = j.at("dataset").get<std::string>();
  else if (!j.at("dataset").is_null())
    raise(ErrorCode::SchemaError,
          "ConversationExample: 'dataset' must be a string or null");
  if (!j.at("messages").is_array())
    raise(ErrorCode::SchemaError,
          "ConversationExample: 'messages' must be a list");
  for (const auto& m : j.at("messages"))
    c.messages.push_back(deserialize<Message>(m.dump()));
  validate(c);
  return c;
}

template <>
inline BenchmarkRecord deserialize<BenchmarkRecord>(const std::string& line) {
  ojson j = detail::parse_line(line, "BenchmarkRecord");
  detail::expect_keys(
      j, {"id", "dataset", "domain", "text", "gold", "allowed_types"},
      "BenchmarkRecord");
  BenchmarkRecord r;
  r.id = detail::get_string(j, "id", "BenchmarkRecord");
  r.dataset = detail::get_string(j, "dataset", "BenchmarkRecord");
  r.domain = detail::get_string(j, "domain", "BenchmarkRecord");
  r.text = detail::get_string(j, "text", "BenchmarkRecord");
  if (!j.at("gold").is_array())
    raise(ErrorCode::SchemaError, "BenchmarkRecord: 'gold' must be a list");
  for (const auto& g : j.at("gold")) {
    detail::expect_keys(g, {"entity_type", "mention"}, "BenchmarkRecord.gold");
    r.gold.push_back({detail::get_string(g, "entity_type", "BenchmarkRecord.gold"),
                      detail::get_string(g, "mention", "BenchmarkRecord.gold")});
  }
  if (!j.at("allowed_types").is_array())
    raise(ErrorCode::SchemaError,
          "BenchmarkRecord: 'allowed_types' must be a list");
  for (const auto& t : j.at("allowed_types")) {
    if (!t.is_string())
      raise(ErrorCode::SchemaError,
            "BenchmarkRecord: allowed_types entries must be strings");
    r.allowed_types.insert(t.get<std::string>());
  }
  validate(r);
  return r;
}

template <>
inline PredictionRecord deserialize<PredictionRecord>(const std::string& line) {
  ojson j = detail::parse_line(line, "PredictionRecord");
  detail::expect_keys(j, {"record_id", "entity_type", "mentions", "parse_ok"},
                      "PredictionRecord");
  PredictionRecord p;
  p.record_id = detail::get_string(j, "record_id", "PredictionRecord");
  p.entity_type = detail::get_string(j, "entity_type", "PredictionRecord");
  if (!j.at("mentions").is_array())
    raise(ErrorCode::SchemaError,
          "PredictionRecord: 'mentions' must be a list");
  for (const auto& m : j.at("mentions")) {
    if (!m.is_string())
      raise(ErrorCode::SchemaError,
            "PredictionRecord: mentions entries must be strings");
    p.mentions.push_back(m.get<std::string>());
  }
  p.parse_ok = detail::get_bool(j, "parse_ok", "PredictionRecord");
  validate(p);
  return p;
}

// ---- line-oriented file helpers ----

template <typename T>
void write_jsonl(std::ostream& out, const std::vector<T>& records) {
  for (const auto& r : records) out << serialize(r) << '\n';
}

template <typename T>
void for_each_jsonl(std::istream& in, const std::function<void(T&&)>& fn) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      fn(deserialize<T>(line));
    } catch (Error& e) {
      raise(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

template <typename T>
std::vector<T> read_jsonl(std::istream& in) {
  std::vector<T> records;
  for_each_jsonl<T>(in, [&](T&& r) { records.push_back(std::move(r)); });
  return records;
}

template <typename T>
std::vector<T> read_jsonl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path);
  return read_jsonl<T>(in);
}

}  // namespace forge
