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

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
  SyntaxError,           // input line is not valid JSON
  SchemaError,           // missing/extra/mistyped field
  InvariantError,        // record violates a domain invariant
  ConfigError,           // bad CLI/config values (endpoint URL, paths, ...)
  Transport,             // request to an annotation backend failed
  UnknownLabel,          // raw label not covered by the label map
  UnknownDataset,        // dataset missing from the label map
  OffsetOutOfRange,      // entity span outside the document text
  DuplicatePrediction,   // repeated (record_id, entity_type) pair
  UnknownRecordId,       // prediction for a record not in the benchmark
  MissingPrerequisite,   // stage input artifact does not exist
  EmptyTable,            // bucket report over an empty frequency table
  MalformedInput,        // operation fed a record it cannot accept
  IoError,               // file read/write failure
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantError: return "InvariantError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::DuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::UnknownRecordId: return "UnknownRecordId";
    case ErrorCode::MissingPrerequisite: return "MissingPrerequisite";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace forge
