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

#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "forge/forge.hpp"

namespace {

using forge::log_message;
using forge::LogLevel;

nlohmann::json g_config;  // parsed --config file, or null

const nlohmann::json* config_section(const char* name) {
  if (!g_config.is_object() || !g_config.contains(name)) return nullptr;
  return &g_config.at(name);
}

void load_config(const std::string& path) {
  auto bytes = forge::read_file(path);
  auto j = nlohmann::json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    forge::raise(forge::ErrorCode::ConfigError,
                 "config file " + path + " is not a JSON object");
  static const std::set<std::string> known = {
      "seed",  "log_level", "chunk", "annotate", "stats",
      "build", "process",   "eval",  "demo"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key))
      forge::raise(forge::ErrorCode::ConfigError,
                   "config file has unknown section '" + key + "'");
  }
  g_config = j;
}

// Effective value = defaults, overlaid by the config file, overlaid by an
// explicitly passed flag. A flag that contradicts the config wins and the
// conflict is logged.
template <typename T>
void merge(const nlohmann::json* section, const char* key, CLI::Option* opt,
           T& value) {
  if (!section || !section->contains(key)) return;
  T from_config;
  try {
    from_config = section->at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    forge::raise(forge::ErrorCode::ConfigError,
                 std::string("config key '") + key + "' has the wrong type");
  }
  if (opt && opt->count() > 0) {
    if (from_config != value)
      log_message(LogLevel::Info, std::string("flag --") + key +
                                      " overrides the config file value");
    return;
  }
  value = from_config;
}

// A config file names one artifact path per stage; they must not collide.
void check_distinct_outputs() {
  if (!g_config.is_object()) return;
  auto out_of = [](const char* section, const char* fallback) {
    const auto* s = config_section(section);
    if (s && s->contains("out") && s->at("out").is_string())
      return s->at("out").get<std::string>();
    return std::string(fallback);
  };
  std::set<std::string> seen;
  for (const auto& p :
       {out_of("chunk", "passages.jsonl"), out_of("annotate", "annotations.jsonl"),
        out_of("stats", "stats.json"), out_of("build", "conversations.jsonl"),
        out_of("process", "benchmark.jsonl"), out_of("eval", "report.json")}) {
    if (!seen.insert(p).second)
      forge::raise(forge::ErrorCode::ConfigError,
                   "artifact paths must be distinct; '" + p + "' repeats");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: distillation data pipeline and evaluator for open NER"};
  app.require_subcommand(1);

  std::string config_path;
  std::string log_level = "info";
  uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt =
      app.add_option("--seed", seed, "seed for every seeded stage");
  auto* log_opt = app.add_option("--log-level", log_level,
                                 "debug, info, warn or error");

  // chunk
  auto* chunk_cmd =
      app.add_subcommand("chunk", "chunk raw articles and sample passages");
  forge::ChunkStage chunk;
  auto* chunk_input = chunk_cmd->add_option("--input", chunk.input,
                                            "directory of .txt files or a "
                                            "JSONL of {source, text}");
  auto* chunk_max = chunk_cmd->add_option("--max-tokens", chunk.chunk.max_tokens,
                                          "maximum tokens per passage");
  auto* chunk_sample = chunk_cmd->add_option(
      "--sample", chunk.chunk.sample_size, "number of passages to sample");
  auto* chunk_out = chunk_cmd->add_option("--out", chunk.out, "output JSONL");

  // annotate
  auto* ann_cmd = app.add_subcommand(
      "annotate", "label passages with an LLM endpoint (or mock)");
  forge::AnnotateStage ann;
  std::string ann_variant = "type";
  auto* ann_passages =
      ann_cmd->add_option("--passages", ann.passages, "passages JSONL");
  auto* ann_variant_opt = ann_cmd->add_option(
      "--variant", ann_variant, "type or definition construction prompt");
  auto* ann_endpoint = ann_cmd->add_option(
      "--endpoint", ann.gateway.endpoint,
      "chat-completions base URL, or mock:FIXTURES.jsonl");
  auto* ann_model =
      ann_cmd->add_option("--model", ann.gateway.model, "model name");
  auto* ann_conc = ann_cmd->add_option(
      "--concurrency", ann.gateway.max_concurrency, "max requests in flight");
  auto* ann_retries = ann_cmd->add_option("--retries", ann.gateway.retry_limit,
                                          "retries per failed request");
  auto* ann_timeout = ann_cmd->add_option(
      "--timeout-ms", ann.gateway.timeout_ms, "per-request timeout");
  auto* ann_out = ann_cmd->add_option("--out", ann.out, "output JSONL");

  // stats
  auto* stats_cmd = app.add_subcommand(
      "stats", "entity-type frequency table and bucket report");
  forge::StatsStage stats;
  auto* stats_ann = stats_cmd->add_option("--annotations", stats.annotations,
                                          "annotations JSONL");
  auto* stats_out = stats_cmd->add_option("--out", stats.out, "output JSON");

  // build
  auto* build_cmd = app.add_subcommand(
      "build", "render instruction-tuning conversations");
  forge::BuildStage build;
  std::string build_variant = "per-type";
  std::string build_neg = "frequency";
  auto* build_ann = build_cmd->add_option("--annotations", build.annotations,
                                          "annotations JSONL input");
  auto* build_bench = build_cmd->add_option(
      "--benchmark", build.benchmark,
      "benchmark JSONL input (supervised conversations)");
  auto* build_variant_opt = build_cmd->add_option(
      "--variant", build_variant, "per-type, all-in-one or definition");
  auto* build_neg_opt = build_cmd->add_option(
      "--neg", build_neg, "none, uniform or frequency negative sampling");
  auto* build_k = build_cmd->add_option("--neg-k", build.negatives_per_example,
                                        "negative types per example");
  auto* build_stats_opt =
      build_cmd->add_option("--stats", build.stats, "stats.json vocabulary");
  auto* build_df = build_cmd->add_flag("--dataset-field", build.dataset_field,
                                       "prefix conversations with Dataset: D");
  auto* build_out = build_cmd->add_option("--out", build.out, "output JSONL");

  // process
  auto* proc_cmd = app.add_subcommand(
      "process", "normalize a raw NER dataset into benchmark records");
  forge::ProcessStage proc;
  auto* proc_input =
      proc_cmd->add_option("--input", proc.input, "raw dataset file");
  auto* proc_format =
      proc_cmd->add_option("--format", proc.format, "conll or spans");
  auto* proc_dataset =
      proc_cmd->add_option("--dataset", proc.dataset, "dataset name");
  auto* proc_domain =
      proc_cmd->add_option("--domain", proc.domain, "domain name");
  auto* proc_map =
      proc_cmd->add_option("--labelmap", proc.labelmap, "label map JSON");
  auto* proc_cap = proc_cmd->add_option("--cap", proc.cap,
                                        "maximum passage-query pairs");
  auto* proc_out = proc_cmd->add_option("--out", proc.out, "output JSONL");

  // eval
  auto* eval_cmd = app.add_subcommand(
      "eval", "score predictions against a processed benchmark");
  forge::EvalStage eval;
  auto* eval_bench =
      eval_cmd->add_option("--benchmark", eval.benchmark, "benchmark JSONL");
  auto* eval_preds = eval_cmd->add_option("--predictions", eval.predictions,
                                          "predictions JSONL");
  auto* eval_out = eval_cmd->add_option("--out", eval.out, "report JSON");
  auto* eval_partial = eval_cmd->add_flag(
      "--partial", eval.partial_summary,
      "quote partial-match F1 in the console summary");

  // demo
  auto* demo_cmd = app.add_subcommand(
      "demo", "run all six stages on the bundled fixtures");
  forge::DemoStage demo;
  auto* demo_fixtures =
      demo_cmd->add_option("--fixtures", demo.fixtures, "fixture directory");
  auto* demo_out =
      demo_cmd->add_option("--out", demo.out, "artifact output directory");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "check run manifests for stale artifacts");
  forge::VerifyStage verify;
  verify_cmd->add_option("--dir", verify.dir, "artifact directory");
  verify_cmd->add_option("--search", verify.search,
                         "extra directories to resolve inputs");

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) load_config(config_path);
    check_distinct_outputs();
    merge(&g_config, "log_level", log_opt, log_level);
    forge::log_threshold() = forge::log_level_from(log_level);
    if (g_config.is_object() && g_config.contains("seed")) {
      uint64_t cfg_seed = g_config.at("seed").get<uint64_t>();
      if (seed_opt->count() > 0) {
        if (cfg_seed != seed)
          log_message(LogLevel::Info,
                      "flag --seed overrides the config file value");
      } else {
        seed = cfg_seed;
      }
    }

    if (chunk_cmd->parsed()) {
      const auto* section = config_section("chunk");
      merge(section, "input", chunk_input, chunk.input);
      merge(section, "max_tokens", chunk_max, chunk.chunk.max_tokens);
      merge(section, "sample", chunk_sample, chunk.chunk.sample_size);
      merge(section, "out", chunk_out, chunk.out);
      chunk.chunk.seed = seed;
      if (chunk.input.empty())
        forge::raise(forge::ErrorCode::ConfigError, "chunk needs --input");
      forge::run_chunk(chunk);
    } else if (ann_cmd->parsed()) {
      const auto* section = config_section("annotate");
      merge(section, "passages", ann_passages, ann.passages);
      merge(section, "variant", ann_variant_opt, ann_variant);
      merge(section, "endpoint", ann_endpoint, ann.gateway.endpoint);
      merge(section, "model", ann_model, ann.gateway.model);
      merge(section, "concurrency", ann_conc, ann.gateway.max_concurrency);
      merge(section, "retries", ann_retries, ann.gateway.retry_limit);
      merge(section, "timeout_ms", ann_timeout, ann.gateway.timeout_ms);
      merge(section, "out", ann_out, ann.out);
      if (ann_variant == "type")
        ann.variant = forge::PromptVariant::TypeName;
      else if (ann_variant == "definition")
        ann.variant = forge::PromptVariant::Definition;
      else
        forge::raise(forge::ErrorCode::ConfigError,
                     "--variant must be type or definition");
      forge::run_annotate(ann);
    } else if (stats_cmd->parsed()) {
      const auto* section = config_section("stats");
      merge(section, "annotations", stats_ann, stats.annotations);
      merge(section, "out", stats_out, stats.out);
      forge::run_stats(stats);
    } else if (build_cmd->parsed()) {
      const auto* section = config_section("build");
      merge(section, "annotations", build_ann, build.annotations);
      merge(section, "benchmark", build_bench, build.benchmark);
      merge(section, "variant", build_variant_opt, build_variant);
      merge(section, "neg", build_neg_opt, build_neg);
      merge(section, "neg_k", build_k, build.negatives_per_example);
      merge(section, "stats", build_stats_opt, build.stats);
      merge(section, "dataset_field", build_df, build.dataset_field);
      merge(section, "out", build_out, build.out);
      build.variant = forge::template_variant_from(build_variant);
      build.strategy = forge::negative_sampling_from(build_neg);
      build.seed = seed;
      forge::run_build(build);
    } else if (proc_cmd->parsed()) {
      const auto* section = config_section("process");
      merge(section, "input", proc_input, proc.input);
      merge(section, "format", proc_format, proc.format);
      merge(section, "dataset", proc_dataset, proc.dataset);
      merge(section, "domain", proc_domain, proc.domain);
      merge(section, "labelmap", proc_map, proc.labelmap);
      merge(section, "cap", proc_cap, proc.cap);
      merge(section, "out", proc_out, proc.out);
      proc.seed = seed;
      forge::run_process(proc);
    } else if (eval_cmd->parsed()) {
      const auto* section = config_section("eval");
      merge(section, "benchmark", eval_bench, eval.benchmark);
      merge(section, "predictions", eval_preds, eval.predictions);
      merge(section, "out", eval_out, eval.out);
      merge(section, "partial", eval_partial, eval.partial_summary);
      forge::run_eval(eval);
    } else if (demo_cmd->parsed()) {
      const auto* section = config_section("demo");
      merge(section, "fixtures", demo_fixtures, demo.fixtures);
      merge(section, "out", demo_out, demo.out);
      if (seed_opt->count() > 0) demo.seed = seed;
      auto report = forge::run_demo(demo);
      std::cout << "demo: report.json written, average strict F1 "
                << forge::format_fixed(report.overall_strict_f1, 4) << "\n";
    } else if (verify_cmd->parsed()) {
      auto result = forge::run_verify(verify);
      for (const auto& line : result.lines) std::cout << line << "\n";
      if (result.lines.empty())
        std::cout << "verify: no manifests under " << verify.dir << "\n";
      return result.fresh ? 0 : 1;
    }
  } catch (const forge::Error& e) {
    std::cerr << "forge: error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "forge: error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
