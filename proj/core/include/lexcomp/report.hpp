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
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexcomp/corpus.hpp"
#include "lexcomp/metrics.hpp"

namespace lexcomp {

struct CostSummary {
  std::uint64_t calls = 0;
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;
  std::int64_t picodollars = 0;
  std::set<std::string> unpriced_models;

  double dollars() const { return static_cast<double>(picodollars) * 1e-12; }
};

// Per-example prediction row.
struct PredictionRow {
  std::string id;
  double gold = 0.0;        // gold probability (LCP) or 0/1 (CWI)
  double prediction = 0.0;  // estimated score (LCP) or 0/1 (CWI)
  double spread = 0.0;      // population std of the samples
  std::size_t k_used = 0;
};

// Everything reported for one run configuration. CWI runs populate f1,
// accuracy and confusion; LCP runs populate pearson, mae and histogram.
struct EvaluationReport {
  std::string fingerprint;
  std::vector<std::pair<std::string, std::string>> parameters;  // printed verbatim, in order
  Task task = Task::cwi;

  std::size_t examples = 0;          // examples in the run
  std::size_t scored_examples = 0;   // with at least one parsed sample
  std::size_t samples_expected = 0;  // examples x K
  std::size_t responses = 0;         // samples with a response
  std::size_t parsed = 0;
  std::size_t recovered = 0;         // parsed only after lenient repair
  std::size_t parse_failures = 0;    // responses without a usable judgment
  std::size_t request_errors = 0;    // samples never answered
  double parse_failure_rate = 0.0;   // percent of responses

  std::optional<double> f1;        // percent
  std::optional<double> accuracy;  // percent
  std::optional<ConfusionMatrix> confusion;

  std::optional<double> pearson;
  std::string pearson_undefined;
  std::optional<double> mae;
  std::optional<PredictionHistogram> histogram;
  std::optional<double> mean_spread;  // average per-example std (LCP)

  AuditResult hallucination;
  CostSummary cost;
  std::vector<std::string> coverage_gaps;  // ids without any parsed sample
  std::vector<PredictionRow> predictions;
};

// Fixed-precision number formatting used by every report renderer.
std::string format_fixed(double value, int decimals);
// Picodollars as dollars with six decimals, e.g. "0.002000".
std::string format_dollars(std::int64_t picodollars);

std::string render_markdown(const EvaluationReport& report);
// "section,metric,value" rows.
std::string render_csv(const EvaluationReport& report);
// "id,gold,prediction,spread,k_used"
std::string render_predictions_csv(const EvaluationReport& report);

// One row per run with columns: run, task, F1, Acc., P, MAE, S, W,
// parse failures, cost. Inapplicable cells hold "-".
std::string render_summary_table(std::span<const std::pair<std::string, EvaluationReport>> runs);

}  // namespace lexcomp
