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

#include "lexcomp/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "lexcomp/error.hpp"

namespace lexcomp::text {
namespace {

icu::UnicodeString to_unicode(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) throw ValidationError("invalid UTF-8 input");
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) throw Error("ICU NFC normalizer unavailable");
  return *norm;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  const auto length = static_cast<int32_t>(bytes.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc_instance().normalize(to_unicode(utf8), status);
  if (U_FAILURE(status)) throw ValidationError("NFC normalization failed");
  return to_utf8(normalized);
}

std::string casefold(std::string_view utf8) {
  icu::UnicodeString s = to_unicode(utf8);
  s.foldCase(U_FOLD_CASE_DEFAULT);
  return to_utf8(s);
}

std::string trim(std::string_view utf8) {
  icu::UnicodeString s = to_unicode(utf8);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && is_space(s.char32At(begin))) begin = s.moveIndex32(begin, 1);
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!is_space(s.char32At(prev))) break;
    end = prev;
  }
  return to_utf8(s.tempSubStringBetween(begin, end));
}

std::string collapse_whitespace(std::string_view utf8) {
  icu::UnicodeString s = to_unicode(utf8);
  icu::UnicodeString out;
  bool in_space = false;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    const UChar32 c = s.char32At(i);
    if (is_space(c)) {
      if (!in_space) out.append(static_cast<UChar>(u' '));
      in_space = true;
    } else {
      out.append(c);
      in_space = false;
    }
  }
  return to_utf8(out);
}

std::string comparison_key(std::string_view utf8) {
  return casefold(collapse_whitespace(trim(nfc(utf8))));
}

std::size_t codepoint_length(std::string_view utf8) {
  return static_cast<std::size_t>(to_unicode(utf8).countChar32());
}

std::string codepoint_slice(std::string_view utf8, std::size_t begin, std::size_t end) {
  icu::UnicodeString s = to_unicode(utf8);
  const auto count = static_cast<std::size_t>(s.countChar32());
  if (begin > end || end > count) {
    throw DomainError("code point range [" + std::to_string(begin) + ", " + std::to_string(end) +
                      ") outside text of length " + std::to_string(count));
  }
  const int32_t b = s.moveIndex32(0, static_cast<int32_t>(begin));
  const int32_t e = s.moveIndex32(0, static_cast<int32_t>(end));
  return to_utf8(s.tempSubStringBetween(b, e));
}

std::vector<std::string> split(std::string_view s, char delimiter) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace lexcomp::text
