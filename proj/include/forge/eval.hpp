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
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/format.hpp"
#include "forge/response_parser.hpp"
#include "forge/text.hpp"
#include "forge/types.hpp"

// Entity-level micro-F1 under two regimes.
//
// Strict: a prediction scores only when entity type and boundary string
// match a gold item exactly; multiset semantics, each item consumed at most
// once (per-key credit is min(gold count, predicted count)).
//
// Partial: after strict pairing, a remaining prediction that shares at
// least one whitespace token with a remaining gold mention of the same type
// is half correct: the pair contributes 0.5 tp and leaves 0.5 fp and 0.5 fn
// behind, so tp+fp stays the prediction total and tp+fn the gold total.
// Pairing is greedy and deterministic (gold order, then prediction order);
// see the tests for the measured gap to the optimal pairing.
//
// Records with no gold entities never receive placeholder items; an
// empty-vs-empty record contributes nothing and an all-empty dataset scores
// 0 by the 0/0 -> 0 rule, not 1.

namespace forge {

struct MatchCounts {
  // Half-units so partial credit stays exact.
  uint64_t tp_x2 = 0;
  uint64_t fp_x2 = 0;
  uint64_t fn_x2 = 0;

  double tp() const { return static_cast<double>(tp_x2) / 2.0; }
  double fp() const { return static_cast<double>(fp_x2) / 2.0; }
  double fn() const { return static_cast<double>(fn_x2) / 2.0; }

  void merge(const MatchCounts& o) {
    tp_x2 += o.tp_x2;
    fp_x2 += o.fp_x2;
    fn_x2 += o.fn_x2;
  }

  // 0/0 -> 0 throughout.
  double precision() const {
    return tp_x2 + fp_x2 == 0
               ? 0.0
               : static_cast<double>(tp_x2) / static_cast<double>(tp_x2 + fp_x2);
  }
  double recall() const {
    return tp_x2 + fn_x2 == 0
               ? 0.0
               : static_cast<double>(tp_x2) / static_cast<double>(tp_x2 + fn_x2);
  }
  double f1() const {
    double p = precision();
    double r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }

  bool operator==(const MatchCounts&) const = default;
};

using PredItem = std::pair<std::string, std::string>;  // (entity_type, mention)

inline MatchCounts match_strict(const std::vector<GoldEntity>& gold,
                                const std::vector<PredItem>& preds) {
  std::vector<bool> gold_used(gold.size(), false);
  MatchCounts counts;
  for (const auto& [type, mention] : preds) {
    bool matched = false;
    for (size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g]) continue;
      if (gold[g].entity_type == type && gold[g].mention == mention) {
        gold_used[g] = true;
        matched = true;
        break;
      }
    }
    if (matched)
      counts.tp_x2 += 2;
    else
      counts.fp_x2 += 2;
  }
  for (size_t g = 0; g < gold.size(); ++g)
    if (!gold_used[g]) counts.fn_x2 += 2;
  return counts;
}

inline MatchCounts match_partial(const std::vector<GoldEntity>& gold,
                                 const std::vector<PredItem>& preds) {
  std::vector<bool> gold_used(gold.size(), false);
  std::vector<bool> pred_used(preds.size(), false);
  MatchCounts counts;

  // Phase 1: exact pairs, identical to match_strict.
  for (size_t p = 0; p < preds.size(); ++p) {
    for (size_t g = 0; g < gold.size(); ++g) {
      if (gold_used[g]) continue;
      if (gold[g].entity_type == preds[p].first &&
          gold[g].mention == preds[p].second) {
        gold_used[g] = true;
        pred_used[p] = true;
        counts.tp_x2 += 2;
        break;
      }
    }
  }

  // Phase 2: half credit for same-type token overlap, gold order then
  // prediction order.
  for (size_t g = 0; g < gold.size(); ++g) {
    if (gold_used[g]) continue;
    for (size_t p = 0; p < preds.size(); ++p) {
      if (pred_used[p]) continue;
      if (preds[p].first == gold[g].entity_type &&
          tokens_overlap(preds[p].second, gold[g].mention)) {
        gold_used[g] = true;
        pred_used[p] = true;
        counts.tp_x2 += 1;
        counts.fp_x2 += 1;
        counts.fn_x2 += 1;
        break;
      }
    }
  }

  for (size_t p = 0; p < preds.size(); ++p)
    if (!pred_used[p]) counts.fp_x2 += 2;
  for (size_t g = 0; g < gold.size(); ++g)
    if (!gold_used[g]) counts.fn_x2 += 2;
  return counts;
}

// One line of predictions.jsonl: the model's raw output for one
// (record, entity type) query.
struct RawPrediction {
  std::string record_id;
  std::string entity_type;
  std::string raw_output;

  bool operator==(const RawPrediction&) const = default;
};

inline RawPrediction parse_raw_prediction(const std::string& line,
                                          size_t line_no) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded())
    raise(ErrorCode::SyntaxError,
          "predictions line " + std::to_string(line_no) + " is not JSON");
  if (!j.is_object() || !j.contains("record_id") || !j.contains("entity_type") ||
      !j.contains("raw_output") || !j["record_id"].is_string() ||
      !j["entity_type"].is_string() || !j["raw_output"].is_string())
    raise(ErrorCode::SchemaError,
          "predictions line " + std::to_string(line_no) +
              " needs string fields {record_id, entity_type, raw_output}");
  return {j["record_id"].get<std::string>(),
          j["entity_type"].get<std::string>(),
          j["raw_output"].get<std::string>()};
}

inline std::vector<RawPrediction> read_predictions(std::istream& in) {
  std::vector<RawPrediction> predictions;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    predictions.push_back(parse_raw_prediction(line, line_no));
  }
  return predictions;
}

// Tolerant mention-list parse of raw model output. Unparseable output is an
// empty extraction (parse_ok=false), never an abort.
inline PredictionRecord parse_prediction_output(const RawPrediction& raw) {
  auto parsed = parse_string_list(raw.raw_output);
  if (!parsed.ok)
    return make_prediction_record(raw.record_id, raw.entity_type, {}, false);
  return make_prediction_record(raw.record_id, raw.entity_type,
                                std::move(parsed.mentions), true);
}

struct RegimeReport {
  MatchCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct DatasetReport {
  std::string domain;
  uint64_t records = 0;
  uint64_t queries = 0;  // passage-query pairs = records x allowed types
  uint64_t gold_entities = 0;
  uint64_t predicted_entities = 0;
  uint64_t parse_failures = 0;
  RegimeReport strict;
  RegimeReport partial;
};

struct DomainReport {
  uint64_t datasets = 0;
  double strict_f1 = 0.0;   // unweighted mean over member datasets
  double partial_f1 = 0.0;
};

struct EvalReport {
  std::map<std::string, DatasetReport> datasets;
  std::map<std::string, DomainReport> domains;
  uint64_t dataset_count = 0;
  double overall_strict_f1 = 0.0;   // unweighted mean over datasets
  double overall_partial_f1 = 0.0;
};

inline EvalReport evaluate(const std::vector<BenchmarkRecord>& benchmark,
                           const std::vector<RawPrediction>& predictions) {
  std::map<std::string, size_t> record_index;
  for (size_t i = 0; i < benchmark.size(); ++i) {
    if (!record_index.emplace(benchmark[i].id, i).second)
      raise(ErrorCode::InvariantError,
            "benchmark has duplicate record id '" + benchmark[i].id + "'");
  }

  // Predictions grouped per record in file order; (record, type) pairs must
  // be unique and refer to benchmark records.
  std::map<std::string, std::vector<PredictionRecord>> by_record;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& raw : predictions) {
    if (!record_index.count(raw.record_id))
      raise(ErrorCode::UnknownRecordId,
            "prediction references unknown record '" + raw.record_id + "'");
    if (!seen.emplace(raw.record_id, raw.entity_type).second)
      raise(ErrorCode::DuplicatePrediction,
            "duplicate prediction for record '" + raw.record_id +
                "' and type '" + raw.entity_type + "'");
    by_record[raw.record_id].push_back(parse_prediction_output(raw));
  }

  EvalReport report;
  for (const auto& record : benchmark) {
    auto& ds = report.datasets[record.dataset];
    if (ds.records == 0)
      ds.domain = record.domain;
    else if (ds.domain != record.domain)
      raise(ErrorCode::InvariantError,
            "dataset '" + record.dataset + "' spans multiple domains");
    ds.records += 1;
    ds.queries += record.allowed_types.size();
    ds.gold_entities += record.gold.size();

    std::vector<PredItem> pred_items;
    auto it = by_record.find(record.id);
    if (it != by_record.end()) {
      for (const auto& p : it->second) {
        if (!p.parse_ok) ds.parse_failures += 1;
        for (const auto& m : p.mentions)
          pred_items.emplace_back(p.entity_type, m);
      }
    }
    ds.predicted_entities += pred_items.size();
    ds.strict.counts.merge(match_strict(record.gold, pred_items));
    ds.partial.counts.merge(match_partial(record.gold, pred_items));
  }

  std::map<std::string, std::pair<double, double>> domain_sums;
  for (auto& [name, ds] : report.datasets) {
    (void)name;
    ds.strict.precision = ds.strict.counts.precision();
    ds.strict.recall = ds.strict.counts.recall();
    ds.strict.f1 = ds.strict.counts.f1();
    ds.partial.precision = ds.partial.counts.precision();
    ds.partial.recall = ds.partial.counts.recall();
    ds.partial.f1 = ds.partial.counts.f1();

    auto& dom = report.domains[ds.domain];
    dom.datasets += 1;
    domain_sums[ds.domain].first += ds.strict.f1;
    domain_sums[ds.domain].second += ds.partial.f1;
    report.overall_strict_f1 += ds.strict.f1;
    report.overall_partial_f1 += ds.partial.f1;
  }
  for (auto& [name, dom] : report.domains) {
    dom.strict_f1 = domain_sums[name].first / static_cast<double>(dom.datasets);
    dom.partial_f1 =
        domain_sums[name].second / static_cast<double>(dom.datasets);
  }
  report.dataset_count = report.datasets.size();
  if (report.dataset_count > 0) {
    report.overall_strict_f1 /= static_cast<double>(report.dataset_count);
    report.overall_partial_f1 /= static_cast<double>(report.dataset_count);
  }
  return report;
}

// ---- deterministic report rendering ----
// Metrics carry 4 decimals, half-unit counts carry 1.

namespace detail {

inline void emit_regime(std::string& out, const RegimeReport& r) {
  out += "{\"tp\": " + format_fixed(r.counts.tp(), 1);
  out += ", \"fp\": " + format_fixed(r.counts.fp(), 1);
  out += ", \"fn\": " + format_fixed(r.counts.fn(), 1);
  out += ", \"precision\": " + format_fixed(r.precision, 4);
  out += ", \"recall\": " + format_fixed(r.recall, 4);
  out += ", \"f1\": " + format_fixed(r.f1, 4) + "}";
}

}  // namespace detail

// report.json with fixed key order and fixed-width metric formatting.
inline std::string render_report(const EvalReport& report) {
  std::string out = "{\n  \"overall\": {\"datasets\": " +
                    std::to_string(report.dataset_count) +
                    ", \"strict_f1\": " +
                    format_fixed(report.overall_strict_f1, 4) +
                    ", \"partial_f1\": " +
                    format_fixed(report.overall_partial_f1, 4) + "},\n";
  out += "  \"domains\": {";
  bool first = true;
  for (const auto& [name, dom] : report.domains) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    " + json_quote(name) + ": {\"datasets\": " +
           std::to_string(dom.datasets) +
           ", \"strict_f1\": " + format_fixed(dom.strict_f1, 4) +
           ", \"partial_f1\": " + format_fixed(dom.partial_f1, 4) + "}";
  }
  out += first ? "},\n" : "\n  },\n";
  out += "  \"datasets\": {";
  first = true;
  for (const auto& [name, ds] : report.datasets) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    " + json_quote(name) + ": {\n";
    out += "      \"domain\": " + json_quote(ds.domain) + ",\n";
    out += "      \"records\": " + std::to_string(ds.records) +
           ", \"queries\": " + std::to_string(ds.queries) +
           ", \"gold_entities\": " + std::to_string(ds.gold_entities) +
           ", \"predicted_entities\": " + std::to_string(ds.predicted_entities) +
           ", \"parse_failures\": " + std::to_string(ds.parse_failures) + ",\n";
    out += "      \"strict\": ";
    detail::emit_regime(out, ds.strict);
    out += ",\n      \"partial\": ";
    detail::emit_regime(out, ds.partial);
    out += "\n    }";
  }
  out += first ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

}  // namespace forge
