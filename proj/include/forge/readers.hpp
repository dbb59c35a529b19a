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

#include <cstdio>
#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/text.hpp"

// Input adapters for third-party NER datasets. Both adapters produce raw
// documents with byte-offset entity spans against the unnormalized text;
// normalization happens later, at BenchmarkRecord construction.

namespace forge {

struct RawEntity {
  size_t begin = 0;  // byte offsets, end exclusive
  size_t end = 0;
  std::string label;

  bool operator==(const RawEntity&) const = default;
};

struct RawDocument {
  std::string id;
  std::string text;
  std::vector<RawEntity> entities;
  std::vector<size_t> sentence_starts;  // sorted byte offsets; {0} if unsplit

  bool operator==(const RawDocument&) const = default;
};

// Default sentence splitter: a boundary after every run of '.', '!' or '?'
// that is followed by whitespace. A stand-in for corpora that do not ship
// their own sentence offsets.
inline std::vector<size_t> default_sentence_starts(const std::string& text) {
  std::vector<size_t> starts = {0};
  size_t i = 0;
  auto is_terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };
  while (i < text.size()) {
    if (is_terminal(text[i])) {
      while (i < text.size() && is_terminal(text[i])) ++i;
      if (i < text.size() && is_space(text[i])) {
        while (i < text.size() && is_space(text[i])) ++i;
        if (i < text.size()) starts.push_back(i);
      }
      continue;
    }
    ++i;
  }
  return starts;
}

// CoNLL column format: one token per line, first column the token, last
// column a BIO tag (O, B-X, I-X); blank lines separate sentences and
// -DOCSTART- sentinels are skipped. Each sentence becomes one document with
// tokens joined by single spaces.
inline std::vector<RawDocument> read_conll(std::istream& in,
                                           const std::string& id_prefix) {
  std::vector<RawDocument> docs;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;

  auto flush_sentence = [&] {
    if (tokens.empty()) return;
    if (tokens[0] == "-DOCSTART-") {
      tokens.clear();
      tags.clear();
      return;
    }
    RawDocument doc;
    char idx[16];
    std::snprintf(idx, sizeof(idx), "%06zu", docs.size());
    doc.id = id_prefix + idx;

    std::vector<size_t> token_starts;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) doc.text.push_back(' ');
      token_starts.push_back(doc.text.size());
      doc.text += tokens[i];
    }

    size_t span_begin = 0;
    std::string span_label;
    bool in_span = false;
    auto close_span = [&](size_t end_token) {
      if (!in_span) return;
      size_t begin = token_starts[span_begin];
      size_t end = token_starts[end_token - 1] + tokens[end_token - 1].size();
      doc.entities.push_back({begin, end, span_label});
      in_span = false;
    };
    for (size_t i = 0; i < tags.size(); ++i) {
      const std::string& tag = tags[i];
      if (tag == "O") {
        close_span(i);
      } else if (tag.rfind("B-", 0) == 0) {
        close_span(i);
        in_span = true;
        span_begin = i;
        span_label = tag.substr(2);
      } else if (tag.rfind("I-", 0) == 0) {
        std::string label = tag.substr(2);
        if (in_span && label == span_label) {
          // span continues
        } else {
          close_span(i);
          in_span = true;
          span_begin = i;
          span_label = label;
        }
      } else {
        raise(ErrorCode::SchemaError,
              "unrecognized CoNLL tag '" + tag + "' (expected O, B-*, I-*)");
      }
    }
    close_span(tags.size());

    doc.sentence_starts = {0};
    docs.push_back(std::move(doc));
    tokens.clear();
    tags.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto cols = split_tokens(line);
    if (cols.empty()) {
      flush_sentence();
      continue;
    }
    if (cols.size() < 2 && cols[0] != "-DOCSTART-")
      raise(ErrorCode::SchemaError,
            "CoNLL line needs token and tag columns: '" + line + "'");
    tokens.emplace_back(cols.front());
    tags.emplace_back(cols.size() >= 2 ? std::string(cols.back()) : "O");
  }
  flush_sentence();
  return docs;
}

// Span-offset JSONL: {"id"?, "text", "entities": [{"start", "end",
// "label"}], "sentence_starts"?}. Missing sentence offsets are filled with
// the default splitter.
inline std::vector<RawDocument> read_span_jsonl(std::istream& in,
                                                const std::string& id_prefix) {
  std::vector<RawDocument> docs;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      raise(ErrorCode::SyntaxError,
            "span record at line " + std::to_string(line_no) +
                " is not a JSON object");
    if (!j.contains("text") || !j["text"].is_string())
      raise(ErrorCode::SchemaError,
            "span record at line " + std::to_string(line_no) +
                " lacks a string 'text'");
    RawDocument doc;
    doc.text = j["text"].get<std::string>();
    if (j.contains("id") && j["id"].is_string()) {
      doc.id = j["id"].get<std::string>();
    } else {
      char idx[16];
      std::snprintf(idx, sizeof(idx), "%06zu", docs.size());
      doc.id = id_prefix + idx;
    }
    if (j.contains("entities")) {
      if (!j["entities"].is_array())
        raise(ErrorCode::SchemaError, "'entities' must be a list");
      for (const auto& e : j["entities"]) {
        if (!e.is_object() || !e.contains("start") || !e.contains("end") ||
            !e.contains("label") || !e["start"].is_number_unsigned() ||
            !e["end"].is_number_unsigned() || !e["label"].is_string())
          raise(ErrorCode::SchemaError,
                "entity spans need {start, end, label} at line " +
                    std::to_string(line_no));
        doc.entities.push_back({e["start"].get<size_t>(),
                                e["end"].get<size_t>(),
                                e["label"].get<std::string>()});
      }
    }
    if (j.contains("sentence_starts")) {
      if (!j["sentence_starts"].is_array())
        raise(ErrorCode::SchemaError, "'sentence_starts' must be a list");
      for (const auto& s : j["sentence_starts"]) {
        if (!s.is_number_unsigned())
          raise(ErrorCode::SchemaError,
                "'sentence_starts' entries must be non-negative integers");
        doc.sentence_starts.push_back(s.get<size_t>());
      }
    } else {
      doc.sentence_starts = default_sentence_starts(doc.text);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace forge
