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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexcomp/corpus.hpp"
#include "lexcomp/response_parser.hpp"

namespace lexcomp {

// Positive class is "complex".
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  double precision() const;
  double recall() const;
  // 0 when precision + recall is 0.
  double f1() const;
  double accuracy() const;

  bool operator==(const ConfusionMatrix&) const = default;
};

struct BinaryMetrics {
  double f1 = 0.0;        // fraction in [0, 1]
  double accuracy = 0.0;  // fraction in [0, 1]
  ConfusionMatrix confusion;
};

// Throws ValidationError listing the symmetric difference when the key sets
// differ.
BinaryMetrics binary_metrics(const std::map<std::string, bool>& preds, const std::map<std::string, bool>& gold);

struct RegressionMetrics {
  std::optional<double> pearson;   // absent when undefined
  std::string pearson_undefined;   // why it is absent
  double mae = 0.0;
  std::size_t n = 0;
};

// Requires equal key sets and at least two points. MAE is always returned;
// Pearson is left empty (with a reason) for a constant vector.
RegressionMetrics regression_metrics(const std::map<std::string, double>& preds,
                                     const std::map<std::string, double>& gold);

// Pearson product-moment correlation (single-pass, Welford-style
// co-moment updates). Throws DomainError for mismatched sizes, fewer than
// two points, or a constant vector.
double pearson(std::span<const double> x, std::span<const double> y);

double mean_absolute_error(std::span<const double> predicted, std::span<const double> gold);

// Rows: gold Likert bin (VeryEasy..VeryDifficult). Columns: equal-width
// prediction bins over [0, 1], the last one closed.
struct PredictionHistogram {
  std::size_t bins = 0;
  std::array<std::vector<std::size_t>, 5> counts;
  // Inclusive range of prediction bins overlapping the gold bin's interval.
  std::array<std::pair<std::size_t, std::size_t>, 5> correct_band;

  std::size_t row_total(LikertLabel gold) const;
  std::size_t in_band(LikertLabel gold) const;
};

// Index of the equal-width bin holding p; consistent with discretize() when
// bins == 5.
std::size_t prediction_bin(double p, std::size_t bins);

// Throws ConfigError if bins < 5; ValidationError on mismatched keys.
PredictionHistogram distribution_histogram(const std::map<std::string, double>& preds,
                                           const std::map<std::string, double>& gold, std::size_t bins = 10);

// "gold_bin,bin_0,...,bin_{B-1},band_first,band_last"
std::string histogram_to_csv(const PredictionHistogram& histogram);
// "actual,predicted_complex,predicted_simple" with two data rows.
std::string confusion_to_csv(const ConfusionMatrix& confusion);

// --- hallucination audit ----------------------------------------------------

struct AuditItem {
  ParsedJudgment judgment;
  Example example;
  std::size_t run = 0;  // sampling run (sample index) the response came from
};

enum class AuditMode { single_run, per_run_lcp };

struct AuditResult {
  bool audited = false;          // false when no response carried echo fields
  std::size_t audited_count = 0; // responses counted
  std::size_t runs = 0;          // runs aggregated (1 for single_run)
  double sentence_error = 0.0;   // S, percent
  double word_error = 0.0;       // W, percent
  double sentence_error_std = 0.0;
  double word_error_std = 0.0;
};

// True when the echoed text equals the source after NFC, trimming,
// whitespace collapse and case folding. An absent echo never matches.
bool echo_matches(const std::optional<std::string>& echoed, const std::string& source);

// S and W as percentages of audited responses. Failed parses are skipped;
// runs in which no response carries an echo field are skipped. per_run_lcp
// computes S and W per run and reports their mean and population std.
AuditResult hallucination_audit(std::span<const AuditItem> items, AuditMode mode);

}  // namespace lexcomp
