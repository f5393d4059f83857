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

#include "lexcomp/response_parser.hpp"

#include <cctype>

#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/text.hpp"

namespace lexcomp {

std::string_view to_string(ParseStatus status) {
  switch (status) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::recovered: return "recovered";
    case ParseStatus::failed: return "failed";
  }
  return "failed";
}

namespace {

std::string normalized_token(std::string_view value) {
  if (!text::is_valid_utf8(value)) throw ValidationError("label is not valid UTF-8");
  return text::casefold(text::collapse_whitespace(text::trim(text::nfc(value))));
}

}  // namespace

bool normalize_binary(std::string_view value) {
  const std::string key = normalized_token(value);
  if (key == "true" || key == "yes" || key == "complex" || key == "ja" || key == "sí" || key == "si") return true;
  if (key == "false" || key == "no" || key == "simple" || key == "nein") return false;
  throw ValidationError("unrecognized binary label '" + std::string(value) + "'");
}

LikertLabel normalize_likert(std::string_view value) {
  const std::string key = normalized_token(value);
  for (LikertLabel label : kLikertLabels) {
    if (key == to_string(label)) return label;
  }
  throw ValidationError("unrecognized Likert label '" + std::string(value) + "'");
}

std::vector<std::string_view> balanced_objects(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = text.find('{');
  while (start != std::string_view::npos) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t close = std::string_view::npos;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) {
      start = text.find('{', start + 1);
      continue;
    }
    out.push_back(text.substr(start, close - start + 1));
    start = text.find('{', close + 1);
  }
  return out;
}

namespace {

// Index just past a // or /* */ comment starting at `i`.
std::size_t skip_comment(std::string_view s, std::size_t i) {
  if (s[i + 1] == '/') {
    const std::size_t nl = s.find('\n', i);
    return nl == std::string_view::npos ? s.size() : nl;
  }
  const std::size_t close = s.find("*/", i + 2);
  return close == std::string_view::npos ? s.size() : close + 2;
}

// Next index that is neither whitespace nor inside a comment.
std::size_t skip_blank(std::string_view s, std::size_t i) {
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    } else if (s[i] == '/' && i + 1 < s.size() && (s[i + 1] == '/' || s[i + 1] == '*')) {
      i = skip_comment(s, i);
    } else {
      break;
    }
  }
  return i;
}

}  // namespace

std::string repair_json(std::string_view candidate) {
  std::string out;
  out.reserve(candidate.size() + 8);
  char quote = 0;  // active string delimiter, 0 outside strings
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const char c = candidate[i];
    if (quote != 0) {
      if (c == '\\' && i + 1 < candidate.size()) {
        const char next = candidate[i + 1];
        if (quote != '"' && next == quote) {
          out += next;  // \' inside a single-quoted string is just '
        } else {
          out += c;
          out += next;
        }
        ++i;
      } else if (c == quote) {
        out += '"';
        quote = 0;
      } else if (c == '"') {
        out += "\\\"";
      } else if (c == '\n') {
        out += "\\n";
      } else {
        out += c;
      }
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') {
      quote = c;
      out += '"';
      continue;
    }
    if (c == '/' && i + 1 < candidate.size() && (candidate[i + 1] == '/' || candidate[i + 1] == '*')) {
      i = skip_comment(candidate, i) - 1;
      out += ' ';
      continue;
    }
    if (c == ',') {
      std::size_t j = skip_blank(candidate, i + 1);
      if (j < candidate.size() && (candidate[j] == '}' || candidate[j] == ']')) continue;
      out += c;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) &&
        (i == 0 || !std::isalnum(static_cast<unsigned char>(candidate[i - 1])))) {
      std::size_t j = i;
      while (j < candidate.size() && std::isalnum(static_cast<unsigned char>(candidate[j]))) ++j;
      const std::string_view word = candidate.substr(i, j - i);
      if (word == "True") out += "true";
      else if (word == "False") out += "false";
      else if (word == "None") out += "null";
      else out += word;
      i = j - 1;
      continue;
    }
    out += c;
  }
  return out;
}

namespace {

std::optional<std::string> string_field(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

// Fills `out` from a parsed object; returns false (with a reason) when the
// label is missing or invalid. `lenient` is set when a non-canonical form
// was accepted.
bool interpret(const nlohmann::json& obj, Task task, ParsedJudgment& out, bool& lenient) {
  if (!obj.is_object()) {
    out.failure_reason = "JSON value is not an object";
    return false;
  }
  auto label_it = obj.find("complex");
  if (label_it == obj.end()) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (text::casefold(text::trim(it.key())) == "complex") {
        label_it = it;
        lenient = true;
        break;
      }
    }
  }
  if (label_it == obj.end()) {
    out.failure_reason = "object has no \"complex\" field";
    return false;
  }

  const nlohmann::json& value = *label_it;
  try {
    if (task == Task::cwi) {
      if (value.is_boolean()) out.binary_label = value.get<bool>();
      else if (value.is_string()) out.binary_label = normalize_binary(value.get<std::string>());
      else throw ValidationError("\"complex\" is neither a string nor a boolean");
    } else {
      if (value.is_string()) {
        out.likert_label = normalize_likert(value.get<std::string>());
      } else if (value.is_number()) {
        out.likert_label = numeric_to_likert(value.get<double>());
        lenient = true;
      } else {
        throw ValidationError("\"complex\" is not a string");
      }
    }
  } catch (const Error& e) {
    out.binary_label.reset();
    out.likert_label.reset();
    out.failure_reason = e.what();
    return false;
  }

  out.echoed_sentence = string_field(obj, "sentence");
  out.echoed_word = string_field(obj, "word");
  out.proof = string_field(obj, "proof");
  return true;
}

}  // namespace

ParsedJudgment extract(std::string_view text, Task task) {
  ParsedJudgment first_failure;
  first_failure.status = ParseStatus::failed;
  first_failure.failure_reason = "no JSON object found";
  bool have_failure = false;

  try {
    for (std::string_view candidate : balanced_objects(text)) {
      bool lenient = false;
      ParsedJudgment judgment;
      auto strict = nlohmann::json::parse(candidate, nullptr, /*allow_exceptions=*/false);
      bool ok = false;
      if (!strict.is_discarded()) {
        ok = interpret(strict, task, judgment, lenient);
      } else {
        auto repaired = nlohmann::json::parse(repair_json(candidate), nullptr, false, /*ignore_comments=*/true);
        if (!repaired.is_discarded()) {
          lenient = true;
          ok = interpret(repaired, task, judgment, lenient);
        } else {
          judgment.failure_reason = "malformed JSON object";
        }
      }
      if (ok) {
        judgment.status = lenient ? ParseStatus::recovered : ParseStatus::ok;
        judgment.failure_reason.clear();
        return judgment;
      }
      if (!have_failure) {
        first_failure.failure_reason = judgment.failure_reason;
        have_failure = true;
      }
    }
  } catch (const std::exception& e) {
    first_failure.failure_reason = std::string("parser error: ") + e.what();
  }
  return first_failure;
}

ParsedJudgment extract_bare(std::string_view text, Task task) {
  ParsedJudgment judgment;
  try {
    std::string answer = text::trim(text);
    auto strip_edges = [&answer] {
      while (!answer.empty() && std::string_view(".!\"'`*").find(answer.back()) != std::string_view::npos) {
        answer.pop_back();
      }
      while (!answer.empty() && std::string_view("\"'`*").find(answer.front()) != std::string_view::npos) {
        answer.erase(0, 1);
      }
    };
    strip_edges();
    if (task == Task::cwi) judgment.binary_label = normalize_binary(answer);
    else judgment.likert_label = normalize_likert(answer);
    judgment.status = ParseStatus::ok;
    return judgment;
  } catch (const std::exception& e) {
    judgment.failure_reason = e.what();
  }
  ParsedJudgment structured = extract(text, task);
  if (structured.parsed()) {
    structured.status = ParseStatus::recovered;
    return structured;
  }
  judgment.status = ParseStatus::failed;
  judgment.binary_label.reset();
  judgment.likert_label.reset();
  return judgment;
}

}  // namespace lexcomp
