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
#include <numeric>
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/labelmap.hpp"
#include "forge/readers.hpp"
#include "forge/rng.hpp"
#include "forge/types.hpp"

namespace forge {

struct SplitResult {
  std::vector<RawDocument> sentences;
  std::vector<std::string> separators;  // size = sentences + 1, for reassembly
  uint64_t dropped_entities = 0;        // spans crossing a sentence boundary
};

// Splits a document into sentence-level documents along its sentence
// offsets. Sentence text is the trimmed slice; the trimmed-away whitespace
// is kept in `separators` so that
//   separators[0] + sentences[0].text + separators[1] + ... + separators[n]
// reproduces the document text. Every entity is assigned to the sentence
// that contains its whole span; spans that cross a boundary (or land in
// trimmed whitespace) are dropped and counted.
inline SplitResult split_document(const RawDocument& doc) {
  for (const auto& e : doc.entities) {
    if (e.end > doc.text.size() || e.begin >= e.end)
      raise(ErrorCode::OffsetOutOfRange,
            "entity span [" + std::to_string(e.begin) + ", " +
                std::to_string(e.end) + ") is outside document '" + doc.id +
                "'");
  }
  std::vector<size_t> starts = doc.sentence_starts;
  if (starts.empty()) starts = {0};
  if (!std::is_sorted(starts.begin(), starts.end()) || starts.front() != 0 ||
      (starts.size() > 1 && starts.back() >= doc.text.size()))
    raise(ErrorCode::OffsetOutOfRange,
          "sentence offsets of document '" + doc.id + "' are not sorted "
          "offsets starting at 0 inside the text");

  SplitResult result;
  size_t consumed = 0;  // end of the previous sentence's trimmed slice
  for (size_t s = 0; s < starts.size(); ++s) {
    size_t raw_begin = starts[s];
    size_t raw_end = (s + 1 < starts.size()) ? starts[s + 1] : doc.text.size();
    size_t tb = raw_begin;
    size_t te = raw_end;
    while (tb < te && is_space(doc.text[tb])) ++tb;
    while (te > tb && is_space(doc.text[te - 1])) --te;
    if (tb == te) continue;  // whitespace-only slice folds into the separator

    result.separators.push_back(doc.text.substr(consumed, tb - consumed));
    RawDocument sentence;
    char idx[16];
    std::snprintf(idx, sizeof(idx), "%03zu", result.sentences.size());
    sentence.id = doc.id + "#s" + idx;
    sentence.text = doc.text.substr(tb, te - tb);
    sentence.sentence_starts = {0};
    for (const auto& e : doc.entities)
      if (e.begin >= tb && e.end <= te)
        sentence.entities.push_back({e.begin - tb, e.end - tb, e.label});
    result.sentences.push_back(std::move(sentence));
    consumed = te;
  }
  result.separators.push_back(doc.text.substr(consumed));

  uint64_t assigned = 0;
  for (const auto& s : result.sentences) assigned += s.entities.size();
  result.dropped_entities = doc.entities.size() - assigned;
  return result;
}

inline SplitResult split_documents(const std::vector<RawDocument>& docs) {
  SplitResult all;
  for (const auto& doc : docs) {
    SplitResult one = split_document(doc);
    for (auto& s : one.sentences) all.sentences.push_back(std::move(s));
    all.dropped_entities += one.dropped_entities;
  }
  return all;
}

// Applies the dataset's label policy: renamed labels rewrite the entity
// type, dropped labels remove their gold entities, and records whose gold
// becomes empty are kept — they are exactly the ones that measure false
// positives. allowed_types is the dataset's full renamed label set.
inline std::vector<BenchmarkRecord> normalize_labels(
    const std::vector<RawDocument>& docs, const LabelMap& map,
    const std::string& dataset, const std::string& domain) {
  const auto& actions = map.for_dataset(dataset);
  auto allowed = map.allowed_types(dataset);

  std::vector<BenchmarkRecord> records;
  records.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<GoldEntity> gold;
    for (const auto& e : doc.entities) {
      if (e.end > doc.text.size() || e.begin >= e.end)
        raise(ErrorCode::OffsetOutOfRange,
              "entity span outside document '" + doc.id + "'");
      auto it = actions.find(e.label);
      if (it == actions.end())
        raise(ErrorCode::UnknownLabel,
              "label '" + e.label + "' of dataset '" + dataset +
                  "' is not covered by the label map");
      if (it->second.drop) continue;
      gold.push_back(
          {it->second.natural, doc.text.substr(e.begin, e.end - e.begin)});
    }
    records.push_back(make_benchmark_record(doc.id, dataset, domain, doc.text,
                                            std::move(gold), allowed));
  }
  return records;
}

// Caps a dataset at `cap` passage-query pairs, where one record contributes
// |allowed_types| pairs. Under-cap inputs pass through unchanged; otherwise
// records are drawn uniformly without replacement (seeded shuffle) until the
// next record would exceed the cap, and the kept records are emitted in
// their original order.
inline std::vector<BenchmarkRecord> cap_queries(
    const std::vector<BenchmarkRecord>& records, uint64_t cap, uint64_t seed) {
  uint64_t total_pairs = 0;
  for (const auto& r : records) total_pairs += r.allowed_types.size();
  if (total_pairs <= cap) return records;

  std::vector<size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[static_cast<size_t>(rng.below(i))]);

  std::vector<size_t> kept;
  uint64_t pairs = 0;
  for (size_t idx : order) {
    uint64_t next = records[idx].allowed_types.size();
    if (pairs + next > cap) break;
    pairs += next;
    kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<BenchmarkRecord> out;
  out.reserve(kept.size());
  for (size_t idx : kept) out.push_back(records[idx]);
  return out;
}

}  // namespace forge
