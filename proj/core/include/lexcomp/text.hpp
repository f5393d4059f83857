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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 text helpers backed by ICU.
namespace lexcomp::text {

// Unicode NFC normalization. Invalid UTF-8 throws ValidationError.
std::string nfc(std::string_view utf8);

// Full Unicode case folding.
std::string casefold(std::string_view utf8);

// Strips leading/trailing ASCII and Unicode whitespace.
std::string trim(std::string_view utf8);

// Replaces every run of whitespace with a single ASCII space.
std::string collapse_whitespace(std::string_view utf8);

// nfc -> trim -> collapse whitespace -> casefold. Two strings "echo" each
// other when their comparison keys are equal.
std::string comparison_key(std::string_view utf8);

// Number of code points.
std::size_t codepoint_length(std::string_view utf8);

// Code points [begin, end) of the string; throws DomainError when out of range.
std::string codepoint_slice(std::string_view utf8, std::size_t begin, std::size_t end);

std::vector<std::string> split(std::string_view s, char delimiter);

bool is_valid_utf8(std::string_view bytes);

}  // namespace lexcomp::text
