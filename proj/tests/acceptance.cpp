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

// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits non-zero if any criterion fails or overruns its
// time budget.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "forge/forge.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace forge;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string fixtures = "fixtures";
  std::string forge_cli;
  std::string workdir = "acceptance_work";
};

Options g_options;
int g_failures = 0;

void check(bool condition, const std::string& detail) {
  if (!condition) throw std::runtime_error(detail);
}

void criterion(const std::string& name, double budget_seconds,
               const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    body();
  } catch (const std::exception& e) {
    failure = e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (failure.empty() && elapsed > budget_seconds)
    failure = "runtime " + format_fixed(elapsed, 2) + "s exceeds " +
              format_fixed(budget_seconds, 2) + "s";
  if (failure.empty()) {
    std::cout << "[PASS] " << name << " (" << format_fixed(elapsed, 2)
              << "s)\n";
  } else {
    std::cout << "[FAIL] " << name << " (" << format_fixed(elapsed, 2)
              << "s): " << failure << "\n";
    ++g_failures;
  }
}

// ---- criteria ----

void paper_worked_example() {
  auto record = make_benchmark_record("r1", "mit-restaurant", "general",
                                      "any asian cuisine around",
                                      {{"cuisine", "asian"}}, {"cuisine"});
  std::vector<RawPrediction> preds = {
      {"r1", "cuisine", "[\"asian cuisine\"]"}};
  auto report = evaluate({record}, preds);
  const auto& ds = report.datasets.at("mit-restaurant");
  check(format_fixed(ds.strict.f1, 4) == "0.0000",
        "strict F1 = " + format_fixed(ds.strict.f1, 4) + ", want 0.0000");
  check(format_fixed(ds.partial.f1, 4) == "0.5000",
        "partial F1 = " + format_fixed(ds.partial.f1, 4) + ", want 0.5000");
}

void placeholder_bug_regression() {
  std::vector<BenchmarkRecord> benchmark;
  std::vector<RawPrediction> preds;
  for (int i = 0; i < 100; ++i) {
    std::string id = "empty-" + std::to_string(i);
    benchmark.push_back(make_benchmark_record(
        id, "all-empty", "general", "text without entities", {}, {"person"}));
    preds.push_back({id, "person", "[]"});
  }
  auto report = evaluate(benchmark, preds);
  const auto& ds = report.datasets.at("all-empty");
  check(ds.strict.f1 == 0.0,
        "all-empty dataset scored " + format_fixed(ds.strict.f1, 4) +
            ", placeholder bug behavior");
  check(ds.partial.f1 == 0.0, "partial placeholder leak");
  check(ds.strict.counts.tp_x2 == 0 && ds.strict.counts.fp_x2 == 0 &&
            ds.strict.counts.fn_x2 == 0,
        "empty-vs-empty records must contribute nothing");
}

void evaluator_oracle_equivalence() {
  Rng rng(271828);
  const size_t trials = 1000;
  size_t partial_equal = 0;
  for (size_t i = 0; i < trials; ++i) {
    auto record = gen::random_benchmark_record(rng, "x", "d", "g", 5);
    auto tokens = split_tokens(record.text);
    std::vector<PredItem> preds;
    size_t n_preds = rng.below(6);
    for (size_t p = 0; p < n_preds; ++p) {
      std::string type = (rng.below(10) < 7 && !record.gold.empty())
                             ? record.gold[rng.below(record.gold.size())]
                                   .entity_type
                             : gen::type_pool()[rng.below(4)];
      std::string mention;
      uint64_t mode = rng.below(10);
      if (mode < 3 && !record.gold.empty()) {
        mention = record.gold[rng.below(record.gold.size())].mention;
      } else if (mode < 7) {
        size_t begin = rng.below(tokens.size());
        size_t len = 1 + rng.below(std::min<size_t>(3, tokens.size() - begin));
        for (size_t t = begin; t < begin + len; ++t) {
          if (t > begin) mention.push_back(' ');
          mention += tokens[t];
        }
      } else {
        mention = gen::random_mention(rng);
      }
      preds.emplace_back(type, mention);
    }

    auto strict = match_strict(record.gold, preds);
    check(strict.tp_x2 == 2 * oracle::ref_strict_tp(record.gold, preds),
          "strict counts diverge from the min-count oracle at trial " +
              std::to_string(i));

    auto partial = match_partial(record.gold, preds);
    uint64_t best = oracle::ref_max_pairing_credit_x2(record.gold, preds);
    check(partial.tp_x2 <= best,
          "greedy partial exceeds the maximum pairing at trial " +
              std::to_string(i));
    if (partial.tp_x2 == best) ++partial_equal;
  }
  check(partial_equal >= trials * 99 / 100,
        "greedy partial optimal on only " + std::to_string(partial_equal) +
            "/1000 cases");
}

void negative_sampler_distributions() {
  // Frequency over {B:9, C:1}: B first with p = 0.9 +/- 0.01.
  NegativeSamplingStrategy freq;
  freq.strategy = NegativeSampling::Frequency;
  freq.k = 1;
  freq.vocabulary.add("B", 9);
  freq.vocabulary.add("C", 1);
  uint64_t b_first = 0;
  const uint64_t trials = 100000;
  for (uint64_t s = 0; s < trials; ++s) {
    freq.seed = s;
    auto picked = sample_negatives({}, freq, "trial");
    check(picked.size() == 1, "frequency draw size");
    if (picked[0] == "B") ++b_first;
  }
  double b_rate = static_cast<double>(b_first) / static_cast<double>(trials);
  check(b_rate > 0.89 && b_rate < 0.91,
        "P(B first) = " + format_fixed(b_rate, 4) + ", want 0.9 +/- 0.01");

  // Uniform over an equal-count vocabulary: chi-square compatible at
  // p > 0.001 (3 dof critical value 16.266).
  NegativeSamplingStrategy unif;
  unif.strategy = NegativeSampling::Uniform;
  unif.k = 1;
  for (const auto& t : {"A", "B", "C", "D"}) unif.vocabulary.add(t, 5);
  std::vector<uint64_t> hits(4, 0);
  for (uint64_t s = 0; s < trials; ++s) {
    unif.seed = s;
    auto picked = sample_negatives({}, unif, "trial");
    ++hits[static_cast<size_t>(picked[0][0] - 'A')];
  }
  double stat = oracle::chi_square(
      hits, std::vector<double>(4, static_cast<double>(trials) / 4.0));
  check(stat < oracle::chi_square_crit_999(3),
        "uniform chi-square " + format_fixed(stat, 3) + " >= 16.266");

  // None emits zero negatives, always.
  NegativeSamplingStrategy none;
  none.strategy = NegativeSampling::None;
  none.k = 5;
  none.vocabulary.add("A", 1);
  for (uint64_t s = 0; s < 1000; ++s) {
    none.seed = s;
    check(sample_negatives({}, none, "t" + std::to_string(s)).empty(),
          "strategy None sampled a negative");
  }
}

void template_round_trip() {
  Rng rng(161803);
  NegativeSamplingStrategy neg;
  neg.strategy = NegativeSampling::Frequency;
  neg.k = 2;
  neg.seed = 99;
  for (const auto& t : gen::type_pool()) neg.vocabulary.add(t, 1 + rng.below(40));

  const TemplateVariant variants[] = {TemplateVariant::PerType,
                                      TemplateVariant::AllInOne,
                                      TemplateVariant::Definition};
  for (int i = 0; i < 1000; ++i) {
    auto kind = (i % 3 == 2) ? AnnotationKind::Definition
                             : AnnotationKind::TypeName;
    auto ap = gen::random_annotated_passage(rng, "acc-" + std::to_string(i),
                                            kind);
    TemplateVariant variant = variants[i % 3];
    std::optional<std::string> dataset;
    if (i % 2 == 0) dataset = "dataset-" + std::to_string(i % 5);

    auto conv = build_conversation(ap, variant, neg, dataset);
    auto extracted = extract_conversation(conv);

    check(extracted.dataset == dataset, "dataset field lost at " +
                                            std::to_string(i));
    check(extracted.passage_text == ap.passage.text,
          "passage text lost at " + std::to_string(i));

    std::vector<std::pair<std::string, std::vector<std::string>>> expected;
    for (const auto& e : ap.entities) {
      bool found = false;
      for (auto& g : expected)
        if (g.first == e.entity_type) {
          g.second.push_back(e.mention);
          found = true;
        }
      if (!found) expected.push_back({e.entity_type, {e.mention}});
    }
    check(extracted.positives == expected,
          "positive types/mentions lost at " + std::to_string(i));

    std::set<std::string> positive_types;
    for (const auto& e : ap.entities) positive_types.insert(e.entity_type);
    check(extracted.negatives ==
              sample_negatives(positive_types, neg, ap.passage.id),
          "negative types lost at " + std::to_string(i));
  }
}

void chunker_bounds_and_reconstruction() {
  Rng rng(141421);
  for (int i = 0; i < 1000; ++i) {
    ChunkConfig cfg;
    cfg.max_tokens = 1 + rng.below(64);
    std::string article = gen::random_text(rng, 0, 400);
    auto chunks = chunk_article(article, "acc", cfg);

    std::vector<std::string> reassembled;
    for (size_t c = 0; c < chunks.size(); ++c) {
      auto tokens = split_tokens(chunks[c].text);
      check(!tokens.empty() && tokens.size() <= cfg.max_tokens,
            "chunk bound violated at article " + std::to_string(i));
      if (c + 1 < chunks.size())
        check(tokens.size() == cfg.max_tokens,
              "non-final short chunk at article " + std::to_string(i));
      for (auto t : tokens) reassembled.emplace_back(t);
    }
    std::string normalized = nfc(article);
    auto original = split_tokens(normalized);
    check(reassembled.size() == original.size() &&
              std::equal(reassembled.begin(), reassembled.end(),
                         original.begin()),
          "token sequence not reconstructed at article " + std::to_string(i));
  }
}

void grammar_conformance() {
  std::ifstream in(g_options.fixtures + "/grammar_corpus.jsonl");
  check(in.good(), "cannot open grammar_corpus.jsonl");
  std::string line;
  size_t cases = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    std::string text = j["text"].get<std::string>();
    std::string id = j["id"].get<std::string>();
    ++cases;

    auto tuples = parse_tuple_list(text);
    check(tuples.ok == j["tuple_ok"].get<bool>(),
          "tuple verdict mismatch on case " + id);
    if (tuples.ok) {
      std::vector<std::pair<std::string, std::string>> expected;
      for (const auto& t : j["tuples"])
        expected.emplace_back(t[0].get<std::string>(),
                              t[1].get<std::string>());
      check(tuples.tuples == expected, "tuple payload mismatch on case " + id);
    } else {
      check(std::string(to_string(tuples.reason)) ==
                j["tuple_reason"].get<std::string>(),
            "tuple reason mismatch on case " + id);
    }

    auto mentions = parse_string_list(text);
    check(mentions.ok == j["list_ok"].get<bool>(),
          "list verdict mismatch on case " + id);
    if (mentions.ok) {
      std::vector<std::string> expected;
      for (const auto& m : j["mentions"])
        expected.push_back(m.get<std::string>());
      check(mentions.mentions == expected,
            "list payload mismatch on case " + id);
    }
  }
  check(cases >= 50, "grammar corpus holds only " + std::to_string(cases) +
                         " cases, need >= 50");

  // 10,000-case fuzz: no crash, and full agreement with the reference
  // grammar implementation.
  Rng rng(57721566);
  static const std::vector<std::string> atoms = {
      "[",      "]",  "(",    ")",           ",",    "\"", "'",    "\\",
      "(\"a\"", "a",  " ",    "\"x\",\"y\"", "per",  "[]", "().",  "\n",
      "text",   "…",  "\"\"", "('m','t')",   "none", ":",  "\t"};
  for (int i = 0; i < 10000; ++i) {
    std::string input;
    size_t n = rng.below(24);
    for (size_t a = 0; a < n; ++a) input += atoms[rng.below(atoms.size())];
    auto mine = parse_tuple_list(input);
    auto ref = oracle::ref_parse_tuple_list(input);
    check(mine.ok == ref.ok, "fuzz verdict split on: " + input);
    if (mine.ok) check(mine.tuples == ref.tuples, "fuzz payload split");
    auto mine_list = parse_string_list(input);
    auto ref_list = oracle::ref_parse_string_list(input);
    check(mine_list.ok == ref_list.ok, "fuzz list split on: " + input);
  }
}

void bucket_report_sanity() {
  Rng rng(577215);
  for (int trial = 0; trial < 100; ++trial) {
    TypeFrequencyTable table;
    size_t n = 1 + rng.below(300);
    for (size_t i = 0; i < n; ++i)
      table.add("type" + std::to_string(i), 1 + rng.below(500));
    auto report = bucket_report(table);
    double sum = 0.0;
    for (const auto& b : report.buckets) sum += b.share;
    check(sum > 1.0 - 1e-9 && sum < 1.0 + 1e-9,
          "shares sum to " + format_fixed(sum, 12));
  }

  // synthetic table shaped like the heavy-tail report: 100 types, the top
  // one holding 74% of all frequency.
  TypeFrequencyTable table;
  table.add("person", 7400);
  for (int i = 0; i < 99; ++i)
    table.add("tail" + std::to_string(i), (i < 98) ? 26 : 2600 - 98 * 26);
  auto report = bucket_report(table);
  check(report.buckets[0].type_count == 1, "top bucket should hold 1 type");
  std::string printed = format_fixed(report.buckets[0].share, 4);
  check(printed == "0.7400",
        "top-bucket share prints as " + printed + ", want 0.7400");
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  check(in.good(), "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void demo_determinism() {
  check(!g_options.forge_cli.empty(), "--forge path not provided");
  fs::remove_all(g_options.workdir);
  fs::create_directories(g_options.workdir);
  fs::path out_a = fs::path(g_options.workdir) / "run_a";
  fs::path out_b = fs::path(g_options.workdir) / "run_b";

  for (const auto& out : {out_a, out_b}) {
    std::string cmd = g_options.forge_cli + " demo --fixtures " +
                      g_options.fixtures + "/demo --out " + out.string() +
                      " >/dev/null 2>&1";
    check(std::system(cmd.c_str()) == 0, "forge demo failed");
  }

  const char* artifacts[] = {"passages.jsonl", "annotations.jsonl",
                             "stats.json",     "conversations.jsonl",
                             "benchmark.jsonl", "report.json"};
  for (const char* name : artifacts) {
    check(slurp(out_a / name) == slurp(out_b / name),
          std::string(name) + " differs between runs");
    std::string manifest = std::string(name) + ".manifest.json";
    check(slurp(out_a / manifest) == slurp(out_b / manifest),
          manifest + " differs between runs");
  }
  check(slurp(out_a / "report.json") ==
            slurp(fs::path(g_options.fixtures) / "demo" /
                  "golden_report.json"),
        "report.json does not match the committed golden file");
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--fixtures")
      g_options.fixtures = argv[i + 1];
    else if (flag == "--forge")
      g_options.forge_cli = argv[i + 1];
    else if (flag == "--workdir")
      g_options.workdir = argv[i + 1];
  }

  criterion("paper-worked-example strict 0.0000 / partial 0.5000", 1.0,
            paper_worked_example);
  criterion("placeholder-bug regression (all-empty dataset scores 0)", 1.0,
            placeholder_bug_regression);
  criterion("evaluator oracle equivalence on 1000 randomized records", 10.0,
            evaluator_oracle_equivalence);
  criterion("negative-sampler distributions (frequency/uniform/none)", 30.0,
            negative_sampler_distributions);
  criterion("template round-trip across variants and dataset settings", 10.0,
            template_round_trip);
  criterion("chunker bounds and token-sequence reconstruction", 5.0,
            chunker_bounds_and_reconstruction);
  criterion("parser grammar conformance (corpus + 10000-case fuzz)", 10.0,
            grammar_conformance);
  criterion("bucket report sanity (shares sum to 1; 0.7400 fixture)", 1.0,
            bucket_report_sanity);
  criterion("end-to-end demo determinism against the golden report", 30.0,
            demo_determinism);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
