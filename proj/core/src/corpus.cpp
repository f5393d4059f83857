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

#include "lexcomp/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/random.hpp"
#include "lexcomp/text.hpp"

namespace lexcomp {

std::string_view to_string(Task task) { return task == Task::cwi ? "cwi" : "lcp"; }

std::string_view to_string(Language language) {
  switch (language) {
    case Language::en: return "en";
    case Language::de: return "de";
    case Language::es: return "es";
  }
  return "en";
}

std::string_view to_string(Domain domain) {
  switch (domain) {
    case Domain::news: return "news";
    case Domain::wikinews: return "wikinews";
    case Domain::wikipedia: return "wikipedia";
    case Domain::europarl: return "europarl";
    case Domain::bible: return "bible";
    case Domain::biomed: return "biomed";
    case Domain::other: return "other";
  }
  return "other";
}

std::string_view to_string(LcpTask task) { return task == LcpTask::single ? "single" : "multi"; }

std::string_view to_string(LikertLabel label) {
  switch (label) {
    case LikertLabel::VeryEasy: return "very easy";
    case LikertLabel::Easy: return "easy";
    case LikertLabel::Neutral: return "neutral";
    case LikertLabel::Difficult: return "difficult";
    case LikertLabel::VeryDifficult: return "very difficult";
  }
  return "neutral";
}

std::string_view likert_name(LikertLabel label) {
  switch (label) {
    case LikertLabel::VeryEasy: return "VeryEasy";
    case LikertLabel::Easy: return "Easy";
    case LikertLabel::Neutral: return "Neutral";
    case LikertLabel::Difficult: return "Difficult";
    case LikertLabel::VeryDifficult: return "VeryDifficult";
  }
  return "Neutral";
}

Task parse_task(std::string_view name) {
  if (name == "cwi") return Task::cwi;
  if (name == "lcp") return Task::lcp;
  throw ConfigError("unknown task '" + std::string(name) + "' (expected cwi or lcp)");
}

Language parse_language(std::string_view name) {
  if (name == "en") return Language::en;
  if (name == "de") return Language::de;
  if (name == "es") return Language::es;
  throw ConfigError("unsupported language '" + std::string(name) + "' (expected en, de or es)");
}

Domain parse_domain(std::string_view name) {
  const std::string key = text::casefold(text::trim(name));
  if (key == "news") return Domain::news;
  if (key == "wikinews") return Domain::wikinews;
  if (key == "wikipedia") return Domain::wikipedia;
  if (key == "europarl") return Domain::europarl;
  if (key == "bible") return Domain::bible;
  if (key == "biomed") return Domain::biomed;
  return Domain::other;
}

LcpTask parse_lcp_task(std::string_view name) {
  if (name == "single") return LcpTask::single;
  if (name == "multi") return LcpTask::multi;
  throw ConfigError("unknown LCP task '" + std::string(name) + "' (expected single or multi)");
}

// --- Likert algebra -------------------------------------------------------

double likert_to_numeric(LikertLabel label) {
  return static_cast<double>(static_cast<int>(label)) * 0.25;
}

LikertLabel numeric_to_likert(double value) {
  for (LikertLabel label : kLikertLabels) {
    if (likert_to_numeric(label) == value) return label;
  }
  std::ostringstream msg;
  msg << "value " << value << " is not one of the Likert points {0, 0.25, 0.5, 0.75, 1}";
  throw DomainError(msg.str());
}

double likert_bin_lower(LikertLabel label) { return static_cast<int>(label) / 5.0; }

double likert_bin_upper(LikertLabel label) { return (static_cast<int>(label) + 1) / 5.0; }

LikertLabel discretize(double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    std::ostringstream msg;
    msg << "probability " << probability << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  for (int i = 4; i > 0; --i) {
    if (probability >= i / 5.0) return static_cast<LikertLabel>(i);
  }
  return LikertLabel::VeryEasy;
}

// --- column maps ----------------------------------------------------------

ColumnMap ColumnMap::from_config(const KeyValueConfig& config) {
  ColumnMap map;
  if (auto v = config.get("has_header")) {
    if (*v == "true" || *v == "1" || *v == "yes") map.has_header = true;
    else if (*v == "false" || *v == "0" || *v == "no") map.has_header = false;
    else throw ConfigError("has_header must be true or false, got '" + *v + "'");
  }
  map.id = config.get_or("id", map.id);
  map.sentence = config.get_or("sentence", map.sentence);
  map.target = config.get_or("target", map.target);
  map.start = config.get_or("start", map.start);
  map.end = config.get_or("end", map.end);
  map.binary = config.get_or("binary", map.binary);
  map.probability = config.get_or("probability", map.probability);
  map.domain = config.get_or("domain", map.domain);
  if (auto v = config.get("default_domain")) map.default_domain = parse_domain(*v);
  if (map.sentence.empty() || map.target.empty()) {
    throw ConfigError("column map requires sentence and target columns");
  }
  return map;
}

ColumnMap ColumnMap::cwi2018(Domain domain) {
  ColumnMap map;
  map.has_header = false;
  map.sentence = "1";
  map.start = "2";
  map.end = "3";
  map.target = "4";
  map.binary = "9";
  map.probability = "10";
  map.default_domain = domain;
  return map;
}

ColumnMap ColumnMap::complex2021() {
  ColumnMap map;
  map.has_header = true;
  map.id = "id";
  map.domain = "corpus";
  map.sentence = "sentence";
  map.target = "token";
  map.probability = "complexity";
  return map;
}

ColumnMap ColumnMap::preset(std::string_view name) {
  if (name == "complex2021") return complex2021();
  if (name.starts_with("cwi2018")) {
    Domain domain = Domain::other;
    if (const auto colon = name.find(':'); colon != std::string_view::npos) {
      domain = parse_domain(name.substr(colon + 1));
    }
    return cwi2018(domain);
  }
  throw ConfigError("unknown column preset '" + std::string(name) + "'");
}

// --- TSV loading ----------------------------------------------------------

namespace {

struct ResolvedColumns {
  std::optional<std::size_t> id, sentence, target, start, end, binary, probability, domain;
};

std::optional<std::size_t> resolve(const std::string& ref, const std::vector<std::string>& header,
                                   bool has_header, const char* field) {
  if (ref.empty()) return std::nullopt;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), index);
  if (ec == std::errc() && ptr == ref.data() + ref.size()) return index;
  if (!has_header) {
    throw ConfigError(std::string("column '") + ref + "' for " + field +
                      " is a name but the file has no header");
  }
  const auto it = std::find(header.begin(), header.end(), ref);
  if (it == header.end()) {
    throw ValidationError(std::string("header has no column '") + ref + "' (needed for " + field + ")");
  }
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> split_row(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return text::split(line, '\t');
}

class RowReader {
 public:
  RowReader(const std::vector<std::string>& cells, std::size_t line_number)
      : cells_(cells), line_(line_number) {}

  const std::string& cell(std::size_t column, const char* field) const {
    if (column >= cells_.size()) {
      fail(field, "missing (row has " + std::to_string(cells_.size()) + " columns, needs column " +
                      std::to_string(column) + ")");
    }
    return cells_[column];
  }

  double real(std::size_t column, const char* field) const {
    const std::string value = text::trim(cell(column, field));
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
      fail(field, "'" + value + "' is not a real number");
    }
    return out;
  }

  std::size_t offset(std::size_t column, const char* field) const {
    const std::string value = text::trim(cell(column, field));
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
      fail(field, "'" + value + "' is not a non-negative integer");
    }
    return out;
  }

  bool boolean(std::size_t column, const char* field) const {
    const std::string value = text::casefold(text::trim(cell(column, field)));
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    fail(field, "'" + value + "' is not a binary label (0/1)");
  }

  [[noreturn]] void fail(const char* field, const std::string& why) const {
    throw ValidationError("row " + std::to_string(line_) + ", column " + field + ": " + why);
  }

 private:
  const std::vector<std::string>& cells_;
  std::size_t line_;
};

enum class Flavor { cwi, lcp };

Partition load_tsv(const std::filesystem::path& path, Language language, const ColumnMap& columns,
                   Flavor flavor) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<std::string> header;
  std::string line;
  std::size_t line_number = 0;
  if (columns.has_header) {
    if (!std::getline(in, line)) return {};
    ++line_number;
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    header = split_row(line);
  }

  ResolvedColumns c;
  c.id = resolve(columns.id, header, columns.has_header, "id");
  c.sentence = resolve(columns.sentence, header, columns.has_header, "sentence");
  c.target = resolve(columns.target, header, columns.has_header, "target");
  c.start = resolve(columns.start, header, columns.has_header, "start");
  c.end = resolve(columns.end, header, columns.has_header, "end");
  c.binary = resolve(columns.binary, header, columns.has_header, "binary");
  c.probability = resolve(columns.probability, header, columns.has_header, "probability");
  c.domain = resolve(columns.domain, header, columns.has_header, "domain");
  if (!c.sentence || !c.target) throw ConfigError("column map requires sentence and target columns");
  if (flavor == Flavor::lcp && !c.probability) throw ConfigError("LCP column map requires a complexity column");
  if (c.start.has_value() != c.end.has_value()) throw ConfigError("span needs both start and end columns");

  Partition partition;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_row(line);
    const RowReader row(cells, line_number);

    Example ex;
    ex.id = c.id ? text::trim(row.cell(*c.id, "id")) : std::to_string(row_index);
    ex.sentence = row.cell(*c.sentence, "sentence");
    ex.target = row.cell(*c.target, "target");
    if (!text::is_valid_utf8(ex.sentence)) row.fail("sentence", "invalid UTF-8");
    if (!text::is_valid_utf8(ex.target)) row.fail("target", "invalid UTF-8");
    ex.language = language;
    ex.domain = c.domain ? parse_domain(row.cell(*c.domain, "domain")) : columns.default_domain;
    if (c.start) ex.span = TextSpan{row.offset(*c.start, "start"), row.offset(*c.end, "end")};

    if (c.probability) {
      const double p = row.real(*c.probability, flavor == Flavor::lcp ? "complexity" : "probability");
      if (p < 0.0 || p > 1.0) {
        throw ValidationError("row " + std::to_string(line_number) + " (id " + ex.id +
                              "): probability " + text::trim(row.cell(*c.probability, "probability")) +
                              " outside [0, 1]");
      }
      ex.gold_probability = p;
    }
    if (flavor == Flavor::cwi && c.binary) ex.gold_binary = row.boolean(*c.binary, "binary");

    partition.push_back(std::move(ex));
    ++row_index;
  }

  validate_partition(partition, /*require_gold=*/true);
  return partition;
}

}  // namespace

Partition load_cwi_tsv(const std::filesystem::path& path, Language language, const ColumnMap& columns) {
  return load_tsv(path, language, columns, Flavor::cwi);
}

Partition load_lcp_tsv(const std::filesystem::path& path, LcpTask /*task*/, const ColumnMap& columns) {
  return load_tsv(path, Language::en, columns, Flavor::lcp);
}

void validate_partition(const Partition& partition, bool require_gold) {
  std::set<std::string_view> seen;
  std::vector<std::string> duplicates;
  std::vector<std::string> span_mismatches;
  std::vector<std::string> label_conflicts;
  std::vector<std::string> missing_gold;
  std::vector<std::string> out_of_range;

  for (const Example& ex : partition) {
    if (!seen.insert(ex.id).second) duplicates.push_back(ex.id);
    if (ex.span) {
      bool ok = false;
      try {
        ok = text::nfc(text::codepoint_slice(ex.sentence, ex.span->begin, ex.span->end)) ==
             text::nfc(ex.target);
      } catch (const DomainError&) {
        ok = false;
      }
      if (!ok) span_mismatches.push_back(ex.id);
    }
    if (ex.gold_probability) {
      const double p = *ex.gold_probability;
      if (!(p >= 0.0 && p <= 1.0)) out_of_range.push_back(ex.id);
      if (p == 0.0 && ex.gold_binary.value_or(false)) label_conflicts.push_back(ex.id);
    }
    if (require_gold && !ex.gold_binary && !ex.gold_probability) missing_gold.push_back(ex.id);
  }

  auto join = [](const std::vector<std::string>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) {
      if (i) out += ", ";
      out += ids[i];
    }
    if (ids.size() > 20) out += ", ... (" + std::to_string(ids.size()) + " total)";
    return out;
  };
  if (!duplicates.empty()) throw ValidationError("duplicate example ids: " + join(duplicates));
  if (!span_mismatches.empty()) {
    throw ValidationError("target does not match sentence span for ids: " + join(span_mismatches));
  }
  if (!out_of_range.empty()) throw ValidationError("probability outside [0, 1] for ids: " + join(out_of_range));
  if (!label_conflicts.empty()) {
    throw ValidationError("probability 0 but binary label complex for ids: " + join(label_conflicts));
  }
  if (!missing_gold.empty()) throw ValidationError("no gold label for ids: " + join(missing_gold));
}

std::string split_summary_json(const DataSplit& split) {
  nlohmann::ordered_json j;
  j["name"] = split.name;
  j["train"] = split.train.size();
  j["validation"] = split.validation.size();
  j["test"] = split.test.size();
  return j.dump();
}

// --- few-shot selection ---------------------------------------------------

namespace {

std::array<std::vector<std::size_t>, 5> likert_strata(const Partition& train, bool positive_only) {
  std::array<std::vector<std::size_t>, 5> strata;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto& p = train[i].gold_probability;
    if (!p) continue;
    if (positive_only && *p <= 0.0) continue;
    strata[static_cast<int>(discretize(*p))].push_back(i);
  }
  return strata;
}

}  // namespace

std::vector<Example> select_fewshot_cwi(const Partition& train, std::uint64_t seed) {
  std::vector<std::size_t> zero;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].gold_probability && *train[i].gold_probability == 0.0) zero.push_back(i);
  }
  if (zero.size() < 2) {
    throw ValidationError("few-shot stratum 'probability 0' needs 2 examples, train has " +
                          std::to_string(zero.size()));
  }
  const auto strata = likert_strata(train, /*positive_only=*/true);
  for (LikertLabel label : kLikertLabels) {
    if (strata[static_cast<int>(label)].empty()) {
      throw ValidationError("few-shot stratum '" + std::string(to_string(label)) +
                            "' (probability > 0) is empty in train");
    }
  }

  Rng rng(seed);
  std::vector<Example> out;
  for (std::size_t pick : rng.sample_without_replacement(zero.size(), 2)) out.push_back(train[zero[pick]]);
  for (const auto& stratum : strata) out.push_back(train[stratum[rng.uniform_index(stratum.size())]]);
  return out;
}

std::vector<Example> select_fewshot_lcp(const Partition& train, std::uint64_t seed) {
  const auto strata = likert_strata(train, /*positive_only=*/false);
  for (LikertLabel label : kLikertLabels) {
    if (strata[static_cast<int>(label)].empty()) {
      throw ValidationError("few-shot stratum '" + std::string(to_string(label)) + "' is empty in train");
    }
  }
  Rng rng(seed);
  std::vector<Example> out;
  for (const auto& stratum : strata) out.push_back(train[stratum[rng.uniform_index(stratum.size())]]);
  return out;
}

}  // namespace lexcomp
