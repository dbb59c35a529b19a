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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "forge/error.hpp"
#include "forge/version.hpp"

namespace forge {

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
    if (ctx) EVP_MD_CTX_free(ctx);
    raise(ErrorCode::IoError, "SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(digest_len * 2);
  for (unsigned int i = 0; i < digest_len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

inline std::string sha256_file(const std::string& path) {
  return sha256_hex(read_file(path));
}

// Writes via a temp file in the same directory plus rename, so an
// interrupted stage never leaves a half-written artifact behind.
inline void atomic_write(const std::string& path, const std::string& bytes) {
  std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(ErrorCode::IoError, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) raise(ErrorCode::IoError, "cannot rename " + tmp + ": " + ec.message());
}

// Provenance record written beside every artifact. Inputs are keyed by
// basename and everything is content-addressed; no timestamps, so re-runs
// (and runs in different directories) produce identical bytes.
struct RunManifest {
  std::string stage;
  std::string config_hash;
  std::map<std::string, std::string> input_hashes;  // basename -> sha256
  std::string output_hash;
};

inline std::string manifest_path_for(const std::string& artifact_path) {
  return artifact_path + ".manifest.json";
}

inline std::string render_manifest(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = kForgeVersion;
  j["stage"] = m.stage;
  j["config_hash"] = m.config_hash;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [name, hash] : m.input_hashes) j["inputs"][name] = hash;
  j["output_sha256"] = m.output_hash;
  return j.dump(2) + "\n";
}

inline RunManifest load_manifest(const std::string& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("stage") ||
      !j.contains("config_hash") || !j.contains("inputs") ||
      !j.contains("output_sha256"))
    raise(ErrorCode::SchemaError, "malformed manifest " + path);
  RunManifest m;
  m.stage = j["stage"].get<std::string>();
  m.config_hash = j["config_hash"].get<std::string>();
  for (const auto& [name, hash] : j["inputs"].items())
    m.input_hashes[name] = hash.get<std::string>();
  m.output_hash = j["output_sha256"].get<std::string>();
  return m;
}

// Writes the artifact atomically together with its manifest.
inline void write_artifact(const std::string& path, const std::string& bytes,
                           const std::string& stage,
                           const std::string& config_hash,
                           const std::vector<std::string>& input_paths) {
  RunManifest m;
  m.stage = stage;
  m.config_hash = config_hash;
  for (const auto& input : input_paths)
    m.input_hashes[std::filesystem::path(input).filename().string()] =
        sha256_file(input);
  m.output_hash = sha256_hex(bytes);
  atomic_write(path, bytes);
  atomic_write(manifest_path_for(path), render_manifest(m));
}

}  // namespace forge
