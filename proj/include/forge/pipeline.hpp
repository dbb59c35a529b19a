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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "forge/benchmark.hpp"
#include "forge/chunker.hpp"
#include "forge/conversation.hpp"
#include "forge/error.hpp"
#include "forge/eval.hpp"
#include "forge/format.hpp"
#include "forge/gateway.hpp"
#include "forge/jsonl.hpp"
#include "forge/manifest.hpp"
#include "forge/reservoir.hpp"
#include "forge/stats.hpp"

namespace forge {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

inline LogLevel& log_threshold() {
  static LogLevel level = LogLevel::Info;
  return level;
}

inline LogLevel log_level_from(const std::string& s) {
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  if (s == "warn") return LogLevel::Warn;
  if (s == "error") return LogLevel::Error;
  raise(ErrorCode::ConfigError, "unknown log level '" + s + "'");
}

inline void log_message(LogLevel level, const std::string& message) {
  if (level < log_threshold()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::cerr << "forge [" << names[static_cast<int>(level)] << "] " << message
            << "\n";
}

inline void require_file(const std::string& path, const std::string& hint) {
  if (!std::filesystem::exists(path))
    raise(ErrorCode::MissingPrerequisite, path + " (" + hint + ")");
}

namespace detail {

inline std::string hash_config(const ojson& effective) {
  return sha256_hex(effective.dump());
}

}  // namespace detail

// ---- chunk ----

struct ChunkStage {
  std::string input;  // directory of .txt files, or a JSONL of {source, text}
  ChunkConfig chunk;
  std::string out = "passages.jsonl";
};

inline std::vector<std::pair<std::string, std::string>> load_articles(
    const std::string& input, std::vector<std::string>* input_files) {
  std::vector<std::pair<std::string, std::string>> articles;
  if (std::filesystem::is_directory(input)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(input))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      articles.emplace_back(f.stem().string(), read_file(f.string()));
      if (input_files) input_files->push_back(f.string());
    }
    if (articles.empty())
      raise(ErrorCode::ConfigError, "no .txt files under " + input);
    return articles;
  }
  require_file(input, "article corpus");
  if (input_files) input_files->push_back(input);
  std::ifstream in(input, std::ios::binary);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("source") ||
        !j.contains("text") || !j["source"].is_string() ||
        !j["text"].is_string())
      raise(ErrorCode::SchemaError,
            "article line " + std::to_string(line_no) +
                " needs string fields {source, text}");
    articles.emplace_back(j["source"].get<std::string>(),
                          j["text"].get<std::string>());
  }
  return articles;
}

inline void run_chunk(const ChunkStage& stage) {
  validate(stage.chunk);
  std::vector<std::string> input_files;
  auto articles = load_articles(stage.input, &input_files);

  // Per-source chunk counters keep passage ids unique when a corpus subset
  // spans several articles.
  std::map<std::string, uint64_t> next_index;
  ReservoirSampler<Passage> sampler(stage.chunk.sample_size, stage.chunk.seed);
  uint64_t chunk_count = 0;
  for (const auto& [source, text] : articles) {
    auto chunks = chunk_article(text, source, stage.chunk, next_index[source]);
    next_index[source] += chunks.size();
    chunk_count += chunks.size();
    for (auto& c : chunks) sampler.add(std::move(c));
  }
  auto sample = sampler.take();
  std::sort(sample.begin(), sample.end(),
            [](const Passage& a, const Passage& b) { return a.id < b.id; });

  std::ostringstream body;
  write_jsonl(body, sample);
  ojson effective{{"stage", "chunk"},
                  {"max_tokens", stage.chunk.max_tokens},
                  {"sample_size", stage.chunk.sample_size},
                  {"seed", stage.chunk.seed}};
  write_artifact(stage.out, body.str(), "chunk",
                 detail::hash_config(effective), input_files);
  log_message(LogLevel::Info,
              "chunk: " + std::to_string(articles.size()) + " articles -> " +
                  std::to_string(chunk_count) + " chunks -> " +
                  std::to_string(sample.size()) + " sampled passages");
}

// ---- annotate ----

struct AnnotateStage {
  std::string passages = "passages.jsonl";
  PromptVariant variant = PromptVariant::TypeName;
  GatewayConfig gateway;
  std::string out = "annotations.jsonl";
};

inline void run_annotate(const AnnotateStage& stage) {
  require_file(stage.passages, "run 'forge chunk' first");
  auto passages = read_jsonl_file<Passage>(stage.passages);
  auto backend = make_backend(stage.gateway);
  std::map<std::string, uint64_t> failures;
  auto annotated =
      annotate(passages, stage.variant, stage.gateway, *backend, &failures);

  uint64_t ok = 0;
  for (const auto& ap : annotated)
    if (ap.status == AnnotationStatus::Ok) ++ok;
  for (const auto& [reason, count] : failures)
    log_message(LogLevel::Warn, "annotate: " + std::to_string(count) +
                                    " responses malformed (" + reason + ")");

  std::ostringstream body;
  write_jsonl(body, annotated);
  ojson effective{{"stage", "annotate"},
                  {"variant", stage.variant == PromptVariant::TypeName
                                  ? "type"
                                  : "definition"},
                  {"endpoint", stage.gateway.endpoint},
                  {"model", stage.gateway.model},
                  {"max_concurrency", stage.gateway.max_concurrency},
                  {"retry_limit", stage.gateway.retry_limit},
                  {"timeout_ms", stage.gateway.timeout_ms}};
  std::vector<std::string> inputs = {stage.passages};
  if (stage.gateway.endpoint.rfind("mock:", 0) == 0)
    inputs.push_back(stage.gateway.endpoint.substr(5));
  write_artifact(stage.out, body.str(), "annotate",
                 detail::hash_config(effective), inputs);
  log_message(LogLevel::Info,
              "annotate: " + std::to_string(annotated.size()) + " passages, " +
                  std::to_string(ok) + " ok, " +
                  std::to_string(annotated.size() - ok) + " malformed");
}

// ---- stats ----

struct StatsStage {
  std::string annotations = "annotations.jsonl";
  std::string out = "stats.json";
};

inline std::string render_stats_json(const TypeFrequencyTable& table) {
  std::string out = "{\n  \"total\": " + std::to_string(table.total) +
                    ",\n  \"distinct_types\": " +
                    std::to_string(table.entries.size()) + ",\n";
  out += "  \"types\": {";
  bool first = true;
  for (const auto& [type, count] : ranked_types(table)) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    " + json_quote(type) + ": " + std::to_string(count);
  }
  out += first ? "},\n" : "\n  },\n";
  out += "  \"buckets\": [";
  if (table.total > 0) {
    auto report = bucket_report(table);
    first = true;
    for (const auto& bucket : report.buckets) {
      out += first ? "\n" : ",\n";
      first = false;
      out += "    {\"range\": " + json_quote(bucket.label) +
             ", \"types\": " + std::to_string(bucket.type_count) +
             ", \"frequency\": " + std::to_string(bucket.frequency) +
             ", \"share\": " + format_fixed(bucket.share, 4) +
             ", \"top_types\": [";
      for (size_t i = 0; i < bucket.top_types.size(); ++i) {
        if (i > 0) out += ", ";
        out += json_quote(bucket.top_types[i]);
      }
      out += "]}";
    }
    out += "\n  ]\n";
  } else {
    out += "]\n";
  }
  out += "}\n";
  return out;
}

inline TypeFrequencyTable load_stats_vocabulary(const std::string& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("types") ||
      !j["types"].is_object())
    raise(ErrorCode::SchemaError, "stats file " + path + " lacks 'types'");
  TypeFrequencyTable table;
  for (const auto& [type, count] : j["types"].items()) {
    if (!count.is_number_unsigned() || count.get<uint64_t>() == 0)
      raise(ErrorCode::SchemaError,
            "stats file " + path + " has a non-positive count for '" + type +
                "'");
    table.add(type, count.get<uint64_t>());
  }
  return table;
}

inline void run_stats(const StatsStage& stage) {
  require_file(stage.annotations, "run 'forge annotate' first");
  auto annotated = read_jsonl_file<AnnotatedPassage>(stage.annotations);
  auto table = count_types(annotated);
  validate(table);
  ojson effective{{"stage", "stats"}};
  write_artifact(stage.out, render_stats_json(table), "stats",
                 detail::hash_config(effective), {stage.annotations});
  log_message(LogLevel::Info,
              "stats: " + std::to_string(table.total) + " entities over " +
                  std::to_string(table.entries.size()) + " types");
}

// ---- build ----

struct BuildStage {
  std::string annotations;  // exactly one of annotations/benchmark is set
  std::string benchmark;
  TemplateVariant variant = TemplateVariant::PerType;
  NegativeSampling strategy = NegativeSampling::Frequency;
  uint32_t negatives_per_example = 2;
  std::string stats = "stats.json";
  uint64_t seed = 0;
  bool dataset_field = false;
  std::string out = "conversations.jsonl";
};

inline void run_build(const BuildStage& stage) {
  if (stage.annotations.empty() == stage.benchmark.empty())
    raise(ErrorCode::ConfigError,
          "build needs exactly one of --annotations or --benchmark");

  NegativeSamplingStrategy neg;
  neg.strategy = stage.strategy;
  neg.k = stage.negatives_per_example;
  neg.seed = stage.seed;
  std::vector<std::string> inputs;
  if (neg.strategy != NegativeSampling::None) {
    require_file(stage.stats, "run 'forge stats' first");
    neg.vocabulary = load_stats_vocabulary(stage.stats);
    inputs.push_back(stage.stats);
  }

  ConversationBuildStats build_stats;
  std::vector<ConversationExample> conversations;
  if (!stage.annotations.empty()) {
    require_file(stage.annotations, "run 'forge annotate' first");
    inputs.insert(inputs.begin(), stage.annotations);
    auto annotated = read_jsonl_file<AnnotatedPassage>(stage.annotations);
    for (const auto& ap : annotated) {
      if (ap.status != AnnotationStatus::Ok) continue;
      std::optional<std::string> dataset;
      if (stage.dataset_field) dataset = ap.passage.source;
      conversations.push_back(
          build_conversation(ap, stage.variant, neg, dataset, &build_stats));
    }
  } else {
    require_file(stage.benchmark, "run 'forge process' first");
    inputs.insert(inputs.begin(), stage.benchmark);
    auto records = read_jsonl_file<BenchmarkRecord>(stage.benchmark);
    conversations = build_supervised_conversations(
        records, stage.variant, neg, stage.dataset_field, &build_stats);
  }

  if (build_stats.negative_clamp_warnings > 0)
    log_message(LogLevel::Warn,
                "build: negative pool smaller than k for " +
                    std::to_string(build_stats.negative_clamp_warnings) +
                    " examples (clamped)");

  std::ostringstream body;
  write_jsonl(body, conversations);
  ojson effective{{"stage", "build"},
                  {"variant", to_string(stage.variant)},
                  {"negative_sampling", to_string(stage.strategy)},
                  {"negatives_per_example", stage.negatives_per_example},
                  {"seed", stage.seed},
                  {"dataset_field", stage.dataset_field},
                  {"supervised", !stage.benchmark.empty()}};
  write_artifact(stage.out, body.str(), "build",
                 detail::hash_config(effective), inputs);
  log_message(LogLevel::Info, "build: " + std::to_string(conversations.size()) +
                                  " conversations written");
}

// ---- process ----

struct ProcessStage {
  std::string input;
  std::string format = "conll";  // conll | spans
  std::string dataset;
  std::string domain;
  std::string labelmap;
  uint64_t cap = 200000;
  uint64_t seed = 0;
  std::string out = "benchmark.jsonl";
};

inline void run_process(const ProcessStage& stage) {
  require_file(stage.input, "raw dataset file");
  require_file(stage.labelmap, "label map config");
  if (stage.dataset.empty() || stage.domain.empty())
    raise(ErrorCode::ConfigError, "process needs --dataset and --domain");
  if (stage.cap < 1) raise(ErrorCode::ConfigError, "cap must be >= 1");

  auto map = load_label_map(stage.labelmap);
  std::ifstream in(stage.input, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + stage.input);

  std::vector<RawDocument> docs;
  if (stage.format == "conll") {
    docs = read_conll(in, stage.dataset + "-");
  } else if (stage.format == "spans") {
    docs = read_span_jsonl(in, stage.dataset + "-");
  } else {
    raise(ErrorCode::ConfigError,
          "unknown input format '" + stage.format + "' (conll|spans)");
  }

  auto split = split_documents(docs);
  if (split.dropped_entities > 0)
    log_message(LogLevel::Warn,
                "process: dropped " + std::to_string(split.dropped_entities) +
                    " entities crossing sentence boundaries");
  auto records =
      normalize_labels(split.sentences, map, stage.dataset, stage.domain);
  auto capped = cap_queries(records, stage.cap, stage.seed);
  if (capped.size() < records.size())
    log_message(LogLevel::Info,
                "process: capped " + std::to_string(records.size()) +
                    " records to " + std::to_string(capped.size()));

  std::ostringstream body;
  write_jsonl(body, capped);
  ojson effective{{"stage", "process"}, {"format", stage.format},
                  {"dataset", stage.dataset}, {"domain", stage.domain},
                  {"cap", stage.cap},        {"seed", stage.seed}};
  write_artifact(stage.out, body.str(), "process",
                 detail::hash_config(effective),
                 {stage.input, stage.labelmap});
  log_message(LogLevel::Info, "process: " + std::to_string(capped.size()) +
                                  " benchmark records written");
}

// ---- eval ----

struct EvalStage {
  std::string benchmark = "benchmark.jsonl";
  std::string predictions = "predictions.jsonl";
  std::string out = "report.json";
  bool partial_summary = false;  // which F1 the console summary quotes
};

inline EvalReport run_eval(const EvalStage& stage) {
  require_file(stage.benchmark, "run 'forge process' first");
  require_file(stage.predictions, "prediction file");
  auto benchmark = read_jsonl_file<BenchmarkRecord>(stage.benchmark);
  std::ifstream in(stage.predictions, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + stage.predictions);
  auto predictions = read_predictions(in);
  auto report = evaluate(benchmark, predictions);

  ojson effective{{"stage", "eval"}};
  write_artifact(stage.out, render_report(report), "eval",
                 detail::hash_config(effective),
                 {stage.benchmark, stage.predictions});
  double f1 = stage.partial_summary ? report.overall_partial_f1
                                    : report.overall_strict_f1;
  log_message(LogLevel::Info,
              std::string("eval: average ") +
                  (stage.partial_summary ? "partial" : "strict") + " F1 " +
                  format_fixed(f1, 4) + " over " +
                  std::to_string(report.dataset_count) + " datasets");
  return report;
}

// ---- demo ----

// Runs the whole pipeline on the bundled fixtures with a mock annotation
// backend: chunk -> annotate -> stats -> build -> process -> eval. All six
// artifacts land under `out`; given the same seed the bytes are identical
// run after run.
struct DemoStage {
  std::string fixtures = "fixtures/demo";
  std::string out = "demo_out";
  uint64_t seed = 42;
};

inline EvalReport run_demo(const DemoStage& demo) {
  namespace fs = std::filesystem;
  auto fixture = [&](const char* name) {
    return (fs::path(demo.fixtures) / name).string();
  };
  auto artifact = [&](const char* name) {
    return (fs::path(demo.out) / name).string();
  };
  fs::create_directories(demo.out);

  ChunkStage chunk;
  chunk.input = fixture("corpus");
  chunk.chunk.max_tokens = 48;
  chunk.chunk.sample_size = 50000;
  chunk.chunk.seed = demo.seed;
  chunk.out = artifact("passages.jsonl");
  run_chunk(chunk);

  AnnotateStage ann;
  ann.passages = chunk.out;
  ann.variant = PromptVariant::TypeName;
  ann.gateway.endpoint = "mock:" + fixture("mock_responses.jsonl");
  ann.gateway.model = "mock-model";
  ann.gateway.max_concurrency = 2;
  ann.gateway.retry_limit = 0;
  ann.out = artifact("annotations.jsonl");
  run_annotate(ann);

  StatsStage stats;
  stats.annotations = ann.out;
  stats.out = artifact("stats.json");
  run_stats(stats);

  BuildStage build;
  build.annotations = ann.out;
  build.variant = TemplateVariant::PerType;
  build.strategy = NegativeSampling::Frequency;
  build.negatives_per_example = 2;
  build.stats = stats.out;
  build.seed = demo.seed;
  build.out = artifact("conversations.jsonl");
  run_build(build);

  ProcessStage process;
  process.input = fixture("toy.conll");
  process.format = "conll";
  process.dataset = "toy-news";
  process.domain = "general";
  process.labelmap = fixture("labelmap.json");
  process.cap = 200000;
  process.seed = demo.seed;
  process.out = artifact("benchmark.jsonl");
  run_process(process);

  EvalStage eval;
  eval.benchmark = process.out;
  eval.predictions = fixture("predictions.jsonl");
  eval.out = artifact("report.json");
  return run_eval(eval);
}

// ---- verify ----

struct VerifyStage {
  std::string dir = ".";
  std::vector<std::string> search;  // extra directories for input lookup
};

struct VerifyResult {
  bool fresh = true;
  std::vector<std::string> lines;  // one per artifact
};

inline VerifyResult run_verify(const VerifyStage& stage) {
  VerifyResult result;
  std::vector<std::filesystem::path> manifests;
  if (!std::filesystem::is_directory(stage.dir))
    raise(ErrorCode::ConfigError, stage.dir + " is not a directory");
  for (const auto& entry : std::filesystem::directory_iterator(stage.dir))
    if (entry.is_regular_file() &&
        entry.path().string().ends_with(".manifest.json"))
      manifests.push_back(entry.path());
  std::sort(manifests.begin(), manifests.end());

  auto resolve = [&](const std::string& basename) -> std::string {
    std::filesystem::path local = std::filesystem::path(stage.dir) / basename;
    if (std::filesystem::exists(local)) return local.string();
    for (const auto& dir : stage.search) {
      std::filesystem::path candidate = std::filesystem::path(dir) / basename;
      if (std::filesystem::exists(candidate)) return candidate.string();
    }
    return "";
  };

  for (const auto& manifest_path : manifests) {
    std::string artifact = manifest_path.string();
    artifact.erase(artifact.size() - std::string(".manifest.json").size());
    RunManifest m = load_manifest(manifest_path.string());

    std::string status = "fresh";
    if (!std::filesystem::exists(artifact)) {
      status = "missing artifact";
    } else if (sha256_file(artifact) != m.output_hash) {
      status = "stale (artifact modified)";
    } else {
      for (const auto& [name, hash] : m.input_hashes) {
        std::string path = resolve(name);
        if (path.empty()) {
          status = "stale (input " + name + " not found)";
          break;
        }
        if (sha256_file(path) != hash) {
          status = "stale (input " + name + " changed)";
          break;
        }
      }
    }
    if (status != "fresh") result.fresh = false;
    result.lines.push_back(
        std::filesystem::path(artifact).filename().string() + ": " + status);
  }
  return result;
}

}  // namespace forge
