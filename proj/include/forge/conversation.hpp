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

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/sampling.hpp"
#include "forge/types.hpp"

// Conversation-style instruction-tuning templates. A built conversation is
// fully invertible: extract_conversation recovers the passage, the positive
// types with their mention lists, and the sampled negative types exactly,
// for every template variant.

namespace forge {

enum class TemplateVariant { PerType, AllInOne, Definition };

inline const char* to_string(TemplateVariant v) {
  switch (v) {
    case TemplateVariant::PerType: return "per-type";
    case TemplateVariant::AllInOne: return "all-in-one";
    case TemplateVariant::Definition: return "definition";
  }
  return "per-type";
}

inline TemplateVariant template_variant_from(const std::string& s) {
  if (s == "per-type") return TemplateVariant::PerType;
  if (s == "all-in-one") return TemplateVariant::AllInOne;
  if (s == "definition") return TemplateVariant::Definition;
  raise(ErrorCode::ConfigError, "unknown template variant '" + s + "'");
}

inline constexpr const char* kConversationPreamble =
    "A virtual assistant answers questions from a user based on the provided "
    "text.";
inline constexpr const char* kReadAck = "I've read this text.";
inline constexpr const char* kQueryPrefix = "What describes ";
inline constexpr const char* kQuerySuffix = " in the text?";
inline constexpr const char* kAllInOneQueryPrefix =
    "What describes the following types in the text? Types: ";
inline constexpr const char* kDatasetMarker = " \n Text: ";

struct ConversationBuildStats {
  uint64_t negative_clamp_warnings = 0;  // pools smaller than k
};

namespace detail {

inline std::string dump_mentions(const std::vector<std::string>& mentions) {
  nlohmann::json j = mentions;
  return j.dump();
}

inline std::string opening_user_turn(const std::optional<std::string>& dataset,
                                     const std::string& passage_text) {
  if (dataset) return "Dataset: " + *dataset + kDatasetMarker + passage_text;
  return "Text: " + passage_text;
}

inline ConversationExample assemble(
    std::string id, std::optional<std::string> dataset,
    const std::string& passage_text,
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        positives,
    const std::vector<std::string>& negatives, TemplateVariant variant) {
  std::vector<Message> messages;
  messages.push_back(make_message(Role::System, kConversationPreamble, false));
  messages.push_back(
      make_message(Role::User, opening_user_turn(dataset, passage_text), false));
  messages.push_back(make_message(Role::Assistant, kReadAck, false));

  if (variant == TemplateVariant::AllInOne) {
    if (!positives.empty() || !negatives.empty()) {
      nlohmann::ordered_json types = nlohmann::ordered_json::array();
      nlohmann::ordered_json answers = nlohmann::ordered_json::object();
      for (const auto& [type, mentions] : positives) {
        types.push_back(type);
        answers[type] = mentions;
      }
      for (const auto& type : negatives) {
        types.push_back(type);
        answers[type] = nlohmann::ordered_json::array();
      }
      messages.push_back(make_message(
          Role::User, kAllInOneQueryPrefix + types.dump(), false));
      messages.push_back(make_message(Role::Assistant, answers.dump(), true));
    }
  } else {
    for (const auto& [type, mentions] : positives) {
      messages.push_back(
          make_message(Role::User, kQueryPrefix + type + kQuerySuffix, false));
      messages.push_back(
          make_message(Role::Assistant, dump_mentions(mentions), true));
    }
    for (const auto& type : negatives) {
      messages.push_back(
          make_message(Role::User, kQueryPrefix + type + kQuerySuffix, false));
      messages.push_back(make_message(Role::Assistant, "[]", true));
    }
  }
  return make_conversation(std::move(id), std::move(dataset),
                           std::move(messages));
}

}  // namespace detail

// One conversation per Ok-status annotated passage: positives are the
// passage's entity types in first-appearance order with mentions in
// annotation order; negatives are drawn from the strategy vocabulary minus
// the positives.
inline ConversationExample build_conversation(
    const AnnotatedPassage& ap, TemplateVariant variant,
    const NegativeSamplingStrategy& neg,
    const std::optional<std::string>& dataset = std::nullopt,
    ConversationBuildStats* stats = nullptr) {
  if (ap.status != AnnotationStatus::Ok)
    raise(ErrorCode::MalformedInput,
          "cannot build a conversation from a malformed annotation: " +
              ap.passage.id);
  auto positives = group_entities_by_type(ap.entities);
  std::set<std::string> positive_types;
  for (const auto& [type, mentions] : positives) {
    (void)mentions;
    positive_types.insert(type);
  }
  std::vector<std::string> negatives;
  if (neg.strategy != NegativeSampling::None) {
    negatives = sample_negatives(positive_types, neg, ap.passage.id);
    if (stats && negatives.size() < neg.k) ++stats->negative_clamp_warnings;
  }
  return detail::assemble(ap.passage.id, dataset, ap.passage.text, positives,
                          negatives, variant);
}

// Supervised variant over benchmark records: positives are the gold types
// present, the negative pool is allowed_types minus positives (only
// in-dataset types are ever queried), and the dataset field is included only
// when requested.
inline ConversationExample build_supervised_conversation(
    const BenchmarkRecord& record, TemplateVariant variant,
    const NegativeSamplingStrategy& neg, bool use_dataset_field,
    ConversationBuildStats* stats = nullptr) {
  validate(record);
  std::vector<std::pair<std::string, std::vector<std::string>>> positives;
  for (const auto& g : record.gold) {
    auto it = std::find_if(positives.begin(), positives.end(),
                           [&](const auto& p) { return p.first == g.entity_type; });
    if (it == positives.end())
      positives.push_back({g.entity_type, {g.mention}});
    else
      it->second.push_back(g.mention);
  }
  std::set<std::string> positive_types;
  for (const auto& [type, mentions] : positives) {
    (void)mentions;
    positive_types.insert(type);
  }

  std::vector<std::string> negatives;
  if (neg.strategy != NegativeSampling::None) {
    std::vector<std::string> pool;
    for (const auto& type : record.allowed_types)
      if (!positive_types.count(type)) pool.push_back(type);
    Rng rng(derive_seed(neg.seed, record.id));
    negatives = sample_negatives_from_pool(pool, neg, rng);
    if (stats && negatives.size() < neg.k) ++stats->negative_clamp_warnings;
  }

  std::optional<std::string> dataset;
  if (use_dataset_field) dataset = record.dataset;
  return detail::assemble(record.id, dataset, record.text, positives,
                          negatives, variant);
}

template <typename Records>
std::vector<ConversationExample> build_supervised_conversations(
    const Records& records, TemplateVariant variant,
    const NegativeSamplingStrategy& neg, bool use_dataset_field,
    ConversationBuildStats* stats = nullptr) {
  std::vector<ConversationExample> out;
  for (const BenchmarkRecord& r : records)
    out.push_back(build_supervised_conversation(r, variant, neg,
                                                use_dataset_field, stats));
  return out;
}

// ---- extraction (the renderer-paired inverse) ----

struct ExtractedConversation {
  std::optional<std::string> dataset;
  std::string passage_text;
  std::vector<std::pair<std::string, std::vector<std::string>>> positives;
  std::vector<std::string> negatives;
  bool all_in_one = false;

  bool operator==(const ExtractedConversation&) const = default;
};

namespace detail {

inline std::vector<std::string> parse_strict_mention_list(
    const std::string& content, const std::string& where) {
  auto j = nlohmann::json::parse(content, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    raise(ErrorCode::InvariantError, where + ": expected a JSON mention list");
  std::vector<std::string> mentions;
  for (const auto& m : j) {
    if (!m.is_string())
      raise(ErrorCode::InvariantError, where + ": non-string mention");
    mentions.push_back(m.get<std::string>());
  }
  return mentions;
}

inline std::string query_type(const std::string& content) {
  std::string prefix = kQueryPrefix;
  std::string suffix = kQuerySuffix;
  if (content.size() < prefix.size() + suffix.size() ||
      content.compare(0, prefix.size(), prefix) != 0 ||
      content.compare(content.size() - suffix.size(), suffix.size(), suffix) !=
          0)
    raise(ErrorCode::InvariantError, "user turn is not a type query: " + content);
  return content.substr(prefix.size(),
                        content.size() - prefix.size() - suffix.size());
}

}  // namespace detail

inline ExtractedConversation extract_conversation(
    const ConversationExample& conversation) {
  validate(conversation);
  const auto& messages = conversation.messages;
  if (messages.size() < 3 || messages[0].content != kConversationPreamble ||
      messages[2].content != kReadAck)
    raise(ErrorCode::InvariantError,
          "conversation does not follow the tuning template");

  ExtractedConversation out;
  const std::string& opening = messages[1].content;
  const std::string marker = kDatasetMarker;
  if (opening.rfind("Dataset: ", 0) == 0) {
    size_t split = opening.find(marker);
    if (split == std::string::npos)
      raise(ErrorCode::InvariantError, "dataset turn lacks the text marker");
    out.dataset = opening.substr(9, split - 9);
    out.passage_text = opening.substr(split + marker.size());
  } else if (opening.rfind("Text: ", 0) == 0) {
    out.passage_text = opening.substr(6);
  } else {
    raise(ErrorCode::InvariantError, "opening user turn is not a text turn");
  }

  if (messages.size() == 3) return out;

  const std::string all_in_one_prefix = kAllInOneQueryPrefix;
  if (messages[3].content.rfind(all_in_one_prefix, 0) == 0) {
    out.all_in_one = true;
    if (messages.size() != 5)
      raise(ErrorCode::InvariantError,
            "all-in-one conversation must have exactly one query turn");
    auto types = nlohmann::json::parse(
        messages[3].content.substr(all_in_one_prefix.size()), nullptr, false);
    auto answers =
        nlohmann::ordered_json::parse(messages[4].content, nullptr, false);
    if (types.is_discarded() || !types.is_array() || answers.is_discarded() ||
        !answers.is_object())
      raise(ErrorCode::InvariantError, "all-in-one turns are not structured");
    if (types.size() != answers.size())
      raise(ErrorCode::InvariantError,
            "all-in-one type list does not match the answer object");
    for (const auto& t : types) {
      if (!t.is_string())
        raise(ErrorCode::InvariantError, "all-in-one type list is not strings");
      std::string type = t.get<std::string>();
      if (!answers.contains(type))
        raise(ErrorCode::InvariantError,
              "all-in-one answer object lacks type '" + type + "'");
      auto mentions =
          detail::parse_strict_mention_list(answers[type].dump(), "all-in-one");
      if (mentions.empty())
        out.negatives.push_back(type);
      else
        out.positives.push_back({type, std::move(mentions)});
    }
    return out;
  }

  if ((messages.size() - 3) % 2 != 0)
    raise(ErrorCode::InvariantError, "dangling query turn");
  for (size_t i = 3; i + 1 < messages.size(); i += 2) {
    std::string type = detail::query_type(messages[i].content);
    auto mentions = detail::parse_strict_mention_list(
        messages[i + 1].content, "query answer");
    if (mentions.empty())
      out.negatives.push_back(type);
    else
      out.positives.push_back({type, std::move(mentions)});
  }
  return out;
}

}  // namespace forge
