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

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include <nlohmann/json.hpp>

#include "forge/response_parser.hpp"
#include "forge/rng.hpp"
#include "oracles.hpp"

using namespace forge;

TEST_CASE("tuple list basics") {
  auto r = parse_tuple_list(
      R"([("Steve Jobs", "person"), ("Apple", "organization")])");
  REQUIRE(r.ok);
  REQUIRE(r.tuples.size() == 2);
  CHECK(r.tuples[0] == std::pair<std::string, std::string>{"Steve Jobs",
                                                           "person"});
  CHECK(r.tuples[1] == std::pair<std::string, std::string>{"Apple",
                                                           "organization"});

  auto empty = parse_tuple_list("[]");
  CHECK(empty.ok);
  CHECK(empty.tuples.empty());

  auto wrapped = parse_tuple_list(
      R"(Sure! Here are the entities: [("X","Y","Z")])");
  CHECK_FALSE(wrapped.ok);
  CHECK(wrapped.reason == MalformedReason::ArityNot2);
}

TEST_CASE("duplicate tuples are preserved in order") {
  auto r = parse_tuple_list(R"([("a","t"),("b","t"),("a","t")])");
  REQUIRE(r.ok);
  REQUIRE(r.tuples.size() == 3);
  CHECK(r.tuples[0].first == "a");
  CHECK(r.tuples[2].first == "a");
}

TEST_CASE("string list basics") {
  auto r = parse_string_list(R"(["Los Angeles"])");
  REQUIRE(r.ok);
  REQUIRE(r.mentions.size() == 1);
  CHECK(r.mentions[0] == "Los Angeles");

  CHECK(parse_string_list("[]").ok);
  CHECK(parse_string_list("[]").mentions.empty());
  CHECK_FALSE(parse_string_list("I found none.").ok);
}

// Every committed corpus case must agree with both the production parser
// and the independent recursive-descent oracle.
TEST_CASE("grammar corpus conformance") {
  std::ifstream in(std::string(FORGE_FIXTURES_DIR) + "/grammar_corpus.jsonl");
  REQUIRE(in.good());
  std::string line;
  size_t cases = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    std::string text = j["text"].get<std::string>();
    INFO("case " << j["id"].get<std::string>() << ": " << text);
    ++cases;

    auto tuple_result = parse_tuple_list(text);
    auto tuple_oracle = oracle::ref_parse_tuple_list(text);
    CHECK(tuple_result.ok == j["tuple_ok"].get<bool>());
    CHECK(tuple_oracle.ok == j["tuple_ok"].get<bool>());
    if (j["tuple_ok"].get<bool>()) {
      std::vector<std::pair<std::string, std::string>> expected;
      for (const auto& t : j["tuples"])
        expected.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
      CHECK(tuple_result.tuples == expected);
      CHECK(tuple_oracle.tuples == expected);
    } else {
      CHECK(std::string(to_string(tuple_result.reason)) ==
            j["tuple_reason"].get<std::string>());
      CHECK(tuple_oracle.reason == j["tuple_reason"].get<std::string>());
    }

    auto list_result = parse_string_list(text);
    auto list_oracle = oracle::ref_parse_string_list(text);
    CHECK(list_result.ok == j["list_ok"].get<bool>());
    CHECK(list_oracle.ok == j["list_ok"].get<bool>());
    if (j["list_ok"].get<bool>()) {
      std::vector<std::string> expected;
      for (const auto& m : j["mentions"]) expected.push_back(m.get<std::string>());
      CHECK(list_result.mentions == expected);
      CHECK(list_oracle.mentions == expected);
    }
  }
  CHECK(cases >= 50);
}

namespace {

// Mix of structured fragments and noise; seeds both fuzz suites.
std::string fuzz_string(Rng& rng) {
  static const std::vector<std::string> atoms = {
      "[",     "]",  "(",    ")",          ",",    "\"", "'",   "\\",
      "(\"a\"", "a", " ",    "\"x\",\"y\"", "per",  "[]", "().", "\n",
      "text",  "…",  "\"\"", "('m','t')",  "none", ":"};
  size_t n = rng.below(24);
  std::string s;
  for (size_t i = 0; i < n; ++i) s += atoms[rng.below(atoms.size())];
  return s;
}

}  // namespace

TEST_CASE("fuzz: parser never crashes and agrees with the oracle") {
  Rng rng(424242);
  for (int i = 0; i < 10000; ++i) {
    std::string input = fuzz_string(rng);
    INFO("input: " << input);
    auto mine = parse_tuple_list(input);
    auto ref = oracle::ref_parse_tuple_list(input);
    CHECK(mine.ok == ref.ok);
    if (mine.ok && ref.ok) CHECK(mine.tuples == ref.tuples);

    auto mine_list = parse_string_list(input);
    auto ref_list = oracle::ref_parse_string_list(input);
    CHECK(mine_list.ok == ref_list.ok);
    if (mine_list.ok && ref_list.ok) CHECK(mine_list.mentions == ref_list.mentions);
  }
}
