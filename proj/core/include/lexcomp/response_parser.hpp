// Copyright 2026 The lexcomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexcomp/corpus.hpp"

namespace lexcomp {

enum class ParseStatus { ok, recovered, failed };

std::string_view to_string(ParseStatus status);

// Structured fields recovered from one model response. For CWI only
// binary_label is ever set, for LCP only likert_label; a failed parse
// carries neither label.
struct ParsedJudgment {
  std::optional<std::string> echoed_sentence;
  std::optional<std::string> echoed_word;
  std::optional<std::string> proof;
  std::optional<bool> binary_label;
  std::optional<LikertLabel> likert_label;
  ParseStatus status = ParseStatus::failed;
  std::string failure_reason;

  bool parsed() const { return status != ParseStatus::failed; }
};

// Locates the JSON judgment object inside free-form text. Balanced {...}
// blocks are tried in order; the first one that parses (strictly, or after
// repairing trailing commas, single/backtick quotes and comments) and
// carries a valid "complex" field wins. Never throws.
ParsedJudgment extract(std::string_view text, Task task);

// For fine-tune prompts, where the model answers with a bare label
// ("yes", "very difficult"). Trailing punctuation and quotes are ignored.
// Never throws.
ParsedJudgment extract_bare(std::string_view text, Task task);

// Case-insensitive after trimming and NFC:
// true, yes, complex, ja, sí, si -> true; false, no, simple, nein -> false.
// Anything else throws ValidationError.
bool normalize_binary(std::string_view value);

// Case-insensitive exact match on the five scale phrases after trimming and
// collapsing inner whitespace; anything else throws ValidationError.
LikertLabel normalize_likert(std::string_view value);

// Every top-level balanced {...} substring, in order of appearance. Braces
// inside double-quoted strings are ignored.
std::vector<std::string_view> balanced_objects(std::string_view text);

// Rewrites common near-JSON into JSON: single- or backtick-quoted strings,
// trailing commas before } or ], // and /* */ comments, bare Python
// literals True/False/None.
std::string repair_json(std::string_view candidate);

}  // namespace lexcomp
