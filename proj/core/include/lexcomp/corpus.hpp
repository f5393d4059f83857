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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexcomp/kv_config.hpp"

namespace lexcomp {

enum class Task { cwi, lcp };
enum class Language { en, de, es };
enum class Domain { news, wikinews, wikipedia, europarl, bible, biomed, other };
enum class LcpTask { single, multi };

// Five-point difficulty scale, ordered from easiest to hardest.
enum class LikertLabel { VeryEasy = 0, Easy = 1, Neutral = 2, Difficult = 3, VeryDifficult = 4 };

inline constexpr std::array<LikertLabel, 5> kLikertLabels = {
    LikertLabel::VeryEasy, LikertLabel::Easy, LikertLabel::Neutral, LikertLabel::Difficult,
    LikertLabel::VeryDifficult};

std::string_view to_string(Task task);
std::string_view to_string(Language language);
std::string_view to_string(Domain domain);
std::string_view to_string(LcpTask task);
// Canonical lowercase phrase: "very easy", "easy", "neutral", "difficult", "very difficult".
std::string_view to_string(LikertLabel label);
// Identifier form used in file names and CSV headers: VeryEasy, Easy, ...
std::string_view likert_name(LikertLabel label);

Task parse_task(std::string_view name);
Language parse_language(std::string_view name);
Domain parse_domain(std::string_view name);  // unknown names map to Domain::other
LcpTask parse_lcp_task(std::string_view name);

// Character offsets (Unicode code points) of the target inside the sentence.
struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const TextSpan&) const = default;
};

// One annotated instance. Multi-word expressions live in `target` unchanged.
struct Example {
  std::string id;
  std::string sentence;
  std::string target;
  std::optional<TextSpan> span;
  Language language = Language::en;
  Domain domain = Domain::other;
  std::optional<bool> gold_binary;          // true = complex
  std::optional<double> gold_probability;   // in [0, 1]

  bool operator==(const Example&) const = default;
};

using Partition = std::vector<Example>;

struct DataSplit {
  std::string name;
  Partition train;
  Partition validation;
  Partition test;
};

// --- Likert algebra -------------------------------------------------------

// {0, 0.25, 0.5, 0.75, 1}.
double likert_to_numeric(LikertLabel label);

// Inverse of likert_to_numeric; any value outside the five canonical points
// throws DomainError.
LikertLabel numeric_to_likert(double value);

// Bins [0,0.2) [0.2,0.4) [0.4,0.6) [0.6,0.8) [0.8,1]. p outside [0,1]
// throws DomainError.
LikertLabel discretize(double probability);

// Bin boundaries as used by discretize: lower edge of bin i is i/5.
double likert_bin_lower(LikertLabel label);
double likert_bin_upper(LikertLabel label);

// --- TSV loading ----------------------------------------------------------

// Where each field lives in a TSV row. A column reference is either a
// 0-based index ("4") or a header name ("token"); header names require
// has_header. Optional references may be empty.
struct ColumnMap {
  bool has_header = true;
  std::string id;           // empty: ids are the 0-based data row index
  std::string sentence;
  std::string target;
  std::string start;
  std::string end;
  std::string binary;
  std::string probability;
  std::string domain;       // empty: every row gets default_domain
  Domain default_domain = Domain::other;

  // Keys: has_header, id, sentence, target, start, end, binary, probability,
  // domain, default_domain. Missing keys keep the defaults above.
  static ColumnMap from_config(const KeyValueConfig& config);

  // CWI 2018 release: 11 headerless columns (hit id, sentence, start, end,
  // target, native/non-native annotator counts, binary, probability).
  static ColumnMap cwi2018(Domain domain);
  // CompLex 2021 release: header row id/corpus/sentence/token/complexity.
  static ColumnMap complex2021();
  // "cwi2018[:<domain>]" or "complex2021".
  static ColumnMap preset(std::string_view name);
};

// One CWI file = one partition. gold_binary from the binary column,
// gold_probability from the probability column. Throws ValidationError for
// malformed rows (row number and column named), span/target mismatches
// (ids listed), duplicate ids, and probability-0 rows marked complex.
Partition load_cwi_tsv(const std::filesystem::path& path, Language language, const ColumnMap& columns);

// One CompLex file = one partition; gold_probability only. The complexity
// column is read through ColumnMap::probability.
Partition load_lcp_tsv(const std::filesystem::path& path, LcpTask task, const ColumnMap& columns);

// Re-checks the Example invariants over a whole partition.
void validate_partition(const Partition& partition, bool require_gold = true);

// {"name": ..., "train": n, "validation": n, "test": n}
std::string split_summary_json(const DataSplit& split);

// --- few-shot exemplar selection -----------------------------------------

// Two probability-0 examples followed by one example from each Likert bin
// among probability > 0 examples (bins on the raw probability), each drawn
// uniformly within its stratum. Throws ValidationError naming an empty
// stratum.
std::vector<Example> select_fewshot_cwi(const Partition& train, std::uint64_t seed);

// One example per Likert bin of gold_probability, in label order.
std::vector<Example> select_fewshot_lcp(const Partition& train, std::uint64_t seed);

}  // namespace lexcomp
