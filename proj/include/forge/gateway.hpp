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

#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/jsonl.hpp"
#include "forge/prompts.hpp"
#include "forge/response_parser.hpp"
#include "forge/types.hpp"

namespace forge {

struct GatewayConfig {
  std::string endpoint;          // http(s)://host[:port][/path] or mock:FILE
  std::string model;
  uint32_t max_concurrency = 4;
  uint32_t retry_limit = 2;
  uint32_t timeout_ms = 60000;
};

inline void validate(const GatewayConfig& cfg) {
  if (cfg.max_concurrency < 1)
    raise(ErrorCode::ConfigError, "max_concurrency must be >= 1");
  if (cfg.endpoint.empty())
    raise(ErrorCode::ConfigError, "endpoint must not be empty");
}

struct AnnotationRequest {
  std::string passage_id;
  std::string system_message;
  std::string user_message;
};

// A backend takes one request and returns the raw model text. Transport
// failures are reported by throwing Error{Transport}; the gateway owns
// retries and never lets a per-passage failure abort the batch.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const AnnotationRequest& request) = 0;
};

// Deterministic test double: canned response per passage id.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::map<std::string, std::string> fixtures,
                       std::string unknown_id_error = "no fixture for id")
      : fixtures_(std::move(fixtures)),
        unknown_id_error_(std::move(unknown_id_error)) {}

  std::string complete(const AnnotationRequest& request) override {
    ++calls_;
    auto it = fixtures_.find(request.passage_id);
    if (it == fixtures_.end())
      raise(ErrorCode::Transport,
            unknown_id_error_ + ": " + request.passage_id);
    return it->second;
  }

  uint64_t calls() const { return calls_; }

 private:
  std::map<std::string, std::string> fixtures_;
  std::string unknown_id_error_;
  std::atomic<uint64_t> calls_{0};
};

// Loads {"passage_id": ..., "response": ...} lines.
inline std::unique_ptr<MockBackend> load_mock_backend(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open mock fixtures " + path);
  std::map<std::string, std::string> fixtures;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("passage_id") ||
        !j.contains("response") || !j["passage_id"].is_string() ||
        !j["response"].is_string())
      raise(ErrorCode::ConfigError, "bad mock fixture at " + path + ":" +
                                        std::to_string(line_no));
    fixtures[j["passage_id"].get<std::string>()] =
        j["response"].get<std::string>();
  }
  return std::make_unique<MockBackend>(std::move(fixtures));
}

// OpenAI-compatible chat-completions endpoint, temperature 0. The API key
// is read from FORGE_API_KEY (falling back to OPENAI_API_KEY); requests go
// to the endpoint's path, or /v1/chat/completions when none is given.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(const GatewayConfig& cfg) : model_(cfg.model) {
    parse_endpoint(cfg.endpoint);
    timeout_ms_ = cfg.timeout_ms;
    if (const char* key = std::getenv("FORGE_API_KEY"))
      api_key_ = key;
    else if (const char* fallback = std::getenv("OPENAI_API_KEY"))
      api_key_ = fallback;
  }

  std::string complete(const AnnotationRequest& request) override {
    nlohmann::json body = {
        {"model", model_},
        {"messages",
         {{{"role", "system"}, {"content", request.system_message}},
          {{"role", "user"}, {"content", request.user_message}}}},
        {"temperature", 0},
    };
    httplib::Headers headers;
    if (!api_key_.empty())
      headers.emplace("Authorization", "Bearer " + api_key_);

    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_ms_ / 1000,
                                  (timeout_ms_ % 1000) * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res)
      raise(ErrorCode::Transport,
            "request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      raise(ErrorCode::Transport,
            "HTTP " + std::to_string(res->status) + ": " + res->body);
    auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded())
      raise(ErrorCode::Transport, "response body is not JSON");
    try {
      return j.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception&) {
      raise(ErrorCode::Transport, "response lacks choices[0].message.content");
    }
  }

 private:
  void parse_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
      raise(ErrorCode::ConfigError, "endpoint must be an http(s) URL: " +
                                        endpoint);
    std::string scheme = endpoint.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
      raise(ErrorCode::ConfigError, "unsupported endpoint scheme: " + scheme);
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      base_url_ = endpoint;
      path_ = "/v1/chat/completions";
    } else {
      base_url_ = endpoint.substr(0, path_start);
      path_ = endpoint.substr(path_start);
    }
    if (base_url_.size() <= scheme_end + 3)
      raise(ErrorCode::ConfigError, "endpoint has no host: " + endpoint);
  }

  std::string model_;
  std::string base_url_;
  std::string path_;
  std::string api_key_;
  uint32_t timeout_ms_ = 60000;
};

inline std::unique_ptr<Backend> make_backend(const GatewayConfig& cfg) {
  validate(cfg);
  if (cfg.endpoint.rfind("mock:", 0) == 0)
    return load_mock_backend(cfg.endpoint.substr(5));
  return std::make_unique<HttpBackend>(cfg);
}

// Annotates every passage: renders the construction prompt, sends it with
// at most max_concurrency requests in flight, retries transient failures up
// to retry_limit, and parses tuple lists into EntityAnnotations. Emits
// exactly one AnnotatedPassage per input passage, in input order, with the
// raw response retained even when malformed.
inline std::vector<AnnotatedPassage> annotate(
    const std::vector<Passage>& passages, PromptVariant variant,
    const GatewayConfig& cfg, Backend& backend,
    std::map<std::string, uint64_t>* failure_tally = nullptr) {
  validate(cfg);
  {
    std::unordered_set<std::string> ids;
    for (const auto& p : passages)
      if (!ids.insert(p.id).second)
        raise(ErrorCode::ConfigError, "duplicate passage id: " + p.id);
  }

  AnnotationKind kind = variant == PromptVariant::TypeName
                            ? AnnotationKind::TypeName
                            : AnnotationKind::Definition;
  std::vector<AnnotatedPassage> results(passages.size());
  std::map<std::string, uint64_t> tally;
  std::mutex tally_mutex;
  std::atomic<size_t> next{0};

  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= passages.size()) return;
      const Passage& passage = passages[i];
      auto prompt = render_construction_prompt(passage, variant);
      AnnotationRequest request{passage.id, prompt.system_message,
                                prompt.user_message};

      std::string raw;
      bool transported = false;
      std::string transport_error;
      for (uint32_t attempt = 0; attempt <= cfg.retry_limit; ++attempt) {
        try {
          raw = backend.complete(request);
          transported = true;
          break;
        } catch (const Error& e) {
          transport_error = e.what();
        }
      }

      AnnotatedPassage ap;
      ap.passage = passage;
      std::string reason;
      if (!transported) {
        ap.raw_response = "";
        ap.status = AnnotationStatus::Malformed;
        reason = "Transport";
        (void)transport_error;
      } else {
        ap.raw_response = raw;
        auto parsed = parse_tuple_list(raw);
        if (!parsed.ok) {
          ap.status = AnnotationStatus::Malformed;
          reason = to_string(parsed.reason);
        } else {
          ap.status = AnnotationStatus::Ok;
          for (auto& [mention, type] : parsed.tuples)
            ap.entities.push_back(make_annotation(mention, type, kind));
        }
      }
      results[i] = std::move(ap);
      if (!reason.empty()) {
        std::lock_guard<std::mutex> lock(tally_mutex);
        ++tally[reason];
      }
    }
  };

  size_t n_threads =
      std::min<size_t>(cfg.max_concurrency, std::max<size_t>(passages.size(), 1));
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  if (failure_tally) *failure_tally = std::move(tally);
  return results;
}

}  // namespace forge
