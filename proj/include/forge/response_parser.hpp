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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forge/text.hpp"

// Tolerant parsers for model output. Chat models decorate structured output
// with prose, so both grammars accept arbitrary text before the first '['
// and after the matched closing ']', and accept single- as well as
// double-quoted strings. Everything else is strict; rejected inputs carry a
// reason code so filtering statistics stay meaningful.
//
// Shared grammar rules (tuple lists and mention lists):
//   * the list starts at the FIRST '[' in the input; there is no
//     backtracking to later brackets
//   * strings are quoted with ' or "; escapes: \n and \t decode, a
//     backslash before quote/backslash yields that character, any other
//     escaped character is kept verbatim with its backslash
//   * a trailing comma before ']' is tolerated
//   * input that ends before the list closes (including an unterminated
//     string) is unbalanced
//
// Tuple grammar (data-construction responses):  [("mention", "type"), ...]
//   * every element must be a parenthesized tuple of quoted strings
//   * arity must be exactly 2, checked before field emptiness
//   * a field that is empty or whitespace-only is rejected (EmptyField)
//
// Mention-list grammar (per-type extraction output):  ["mention", ...]
//   * every element must be a quoted string; duplicates are preserved

namespace forge {

enum class MalformedReason {
  UnbalancedBrackets,
  NonTupleElement,
  ArityNot2,
  EmptyField,
};

inline const char* to_string(MalformedReason r) {
  switch (r) {
    case MalformedReason::UnbalancedBrackets: return "UnbalancedBrackets";
    case MalformedReason::NonTupleElement: return "NonTupleElement";
    case MalformedReason::ArityNot2: return "ArityNot2";
    case MalformedReason::EmptyField: return "EmptyField";
  }
  return "UnbalancedBrackets";
}

struct TupleListParse {
  bool ok = false;
  std::vector<std::pair<std::string, std::string>> tuples;
  MalformedReason reason = MalformedReason::UnbalancedBrackets;
};

struct StringListParse {
  bool ok = false;
  std::vector<std::string> mentions;
};

namespace detail {

inline bool is_quote(char c) { return c == '"' || c == '\''; }

// Decodes a quoted string starting at s[i] (a quote). On success advances i
// past the closing quote and returns true.
inline bool scan_quoted(std::string_view s, size_t& i, std::string& out) {
  char q = s[i];
  ++i;
  out.clear();
  while (i < s.size()) {
    char c = s[i];
    if (c == '\\') {
      if (i + 1 >= s.size()) return false;
      char e = s[i + 1];
      if (e == 'n') {
        out.push_back('\n');
      } else if (e == 't') {
        out.push_back('\t');
      } else if (e == '"' || e == '\'' || e == '\\') {
        out.push_back(e);
      } else {
        out.push_back('\\');
        out.push_back(e);
      }
      i += 2;
      continue;
    }
    if (c == q) {
      ++i;
      return true;
    }
    out.push_back(c);
    ++i;
  }
  return false;  // unterminated
}

inline void skip_ws(std::string_view s, size_t& i) {
  while (i < s.size() && is_space(s[i])) ++i;
}

}  // namespace detail

inline TupleListParse parse_tuple_list(std::string_view response_text) {
  TupleListParse result;
  auto fail = [&](MalformedReason r) {
    result.ok = false;
    result.tuples.clear();
    result.reason = r;
    return result;
  };

  size_t i = response_text.find('[');
  if (i == std::string_view::npos)
    return fail(MalformedReason::UnbalancedBrackets);
  ++i;

  enum class State {
    WantElementOrClose,       // just after '[' — ']' closes an empty list
    WantField,                // inside '(' — a quoted string must follow
    WantFieldSepOrClose,      // after a tuple field — ',' or ')'
    WantElementSepOrClose,    // after a tuple — ',' or ']'
    WantElementOrCloseComma,  // after an element comma — tuple or ']'
  };
  State state = State::WantElementOrClose;
  std::vector<std::string> fields;
  std::string scratch;

  while (true) {
    detail::skip_ws(response_text, i);
    if (i >= response_text.size())
      return fail(MalformedReason::UnbalancedBrackets);
    char c = response_text[i];
    switch (state) {
      case State::WantElementOrClose:
      case State::WantElementOrCloseComma:
        if (c == ']') {
          result.ok = true;
          return result;
        }
        if (c == '(') {
          fields.clear();
          state = State::WantField;
          ++i;
          break;
        }
        return fail(MalformedReason::NonTupleElement);

      case State::WantField:
        if (detail::is_quote(c)) {
          if (!detail::scan_quoted(response_text, i, scratch))
            return fail(MalformedReason::UnbalancedBrackets);
          fields.push_back(scratch);
          state = State::WantFieldSepOrClose;
          break;
        }
        if (c == ')' && fields.empty())
          return fail(MalformedReason::ArityNot2);  // "()"
        return fail(MalformedReason::NonTupleElement);

      case State::WantFieldSepOrClose:
        if (c == ',') {
          state = State::WantField;
          ++i;
          break;
        }
        if (c == ')') {
          if (fields.size() != 2) return fail(MalformedReason::ArityNot2);
          if (trim(fields[0]).empty() || trim(fields[1]).empty())
            return fail(MalformedReason::EmptyField);
          result.tuples.emplace_back(fields[0], fields[1]);
          state = State::WantElementSepOrClose;
          ++i;
          break;
        }
        return fail(MalformedReason::NonTupleElement);

      case State::WantElementSepOrClose:
        if (c == ',') {
          state = State::WantElementOrCloseComma;
          ++i;
          break;
        }
        if (c == ']') {
          result.ok = true;
          return result;
        }
        return fail(MalformedReason::NonTupleElement);
    }
  }
}

inline StringListParse parse_string_list(std::string_view response_text) {
  StringListParse result;

  size_t i = response_text.find('[');
  if (i == std::string_view::npos) return result;
  ++i;

  enum class State { WantStringOrClose, WantSepOrClose, WantStringOrCloseComma };
  State state = State::WantStringOrClose;
  std::string scratch;
  std::vector<std::string> mentions;

  while (true) {
    detail::skip_ws(response_text, i);
    if (i >= response_text.size()) return result;
    char c = response_text[i];
    switch (state) {
      case State::WantStringOrClose:
      case State::WantStringOrCloseComma:
        if (c == ']') {
          result.ok = true;
          result.mentions = std::move(mentions);
          return result;
        }
        if (detail::is_quote(c)) {
          if (!detail::scan_quoted(response_text, i, scratch)) return result;
          mentions.push_back(scratch);
          state = State::WantSepOrClose;
          break;
        }
        return result;

      case State::WantSepOrClose:
        if (c == ',') {
          state = State::WantStringOrCloseComma;
          ++i;
          break;
        }
        if (c == ']') {
          result.ok = true;
          result.mentions = std::move(mentions);
          return result;
        }
        return result;
    }
  }
}

}  // namespace forge
