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

#include "lexcomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "lexcomp/error.hpp"
#include "lexcomp/text.hpp"

namespace lexcomp {

double ConfusionMatrix::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double ConfusionMatrix::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionMatrix::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double ConfusionMatrix::accuracy() const {
  return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

namespace {

template <typename A, typename B>
void require_same_keys(const std::map<std::string, A>& preds, const std::map<std::string, B>& gold) {
  std::vector<std::string> pred_keys, gold_keys, only_preds, only_gold;
  for (const auto& kv : preds) pred_keys.push_back(kv.first);
  for (const auto& kv : gold) gold_keys.push_back(kv.first);
  std::set_difference(pred_keys.begin(), pred_keys.end(), gold_keys.begin(), gold_keys.end(),
                      std::back_inserter(only_preds));
  std::set_difference(gold_keys.begin(), gold_keys.end(), pred_keys.begin(), pred_keys.end(),
                      std::back_inserter(only_gold));
  if (only_preds.empty() && only_gold.empty()) return;
  std::ostringstream msg;
  msg << "prediction and gold key sets differ;";
  auto list = [&msg](const char* label, const std::vector<std::string>& ids) {
    if (ids.empty()) return;
    msg << ' ' << label << ':';
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) msg << ' ' << ids[i];
    if (ids.size() > 20) msg << " ... (" << ids.size() << " total)";
  };
  list("only in predictions", only_preds);
  list("only in gold", only_gold);
  throw ValidationError(msg.str());
}

}  // namespace

BinaryMetrics binary_metrics(const std::map<std::string, bool>& preds, const std::map<std::string, bool>& gold) {
  require_same_keys(preds, gold);
  ConfusionMatrix cm;
  auto g = gold.begin();
  for (auto p = preds.begin(); p != preds.end(); ++p, ++g) {
    if (p->second) (g->second ? cm.tp : cm.fp)++;
    else (g->second ? cm.fn : cm.tn)++;
  }
  return {cm.f1(), cm.accuracy(), cm};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: vectors differ in length");
  if (x.size() < 2) throw DomainError("pearson: needs at least two points");
  double mean_x = 0.0, mean_y = 0.0, m2_x = 0.0, m2_y = 0.0, co = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2_x += dx * (x[i] - mean_x);
    m2_y += dy * (y[i] - mean_y);
    co += dx * (y[i] - mean_y);
  }
  if (m2_x == 0.0) throw DomainError("pearson undefined: first vector is constant");
  if (m2_y == 0.0) throw DomainError("pearson undefined: second vector is constant");
  return co / std::sqrt(m2_x * m2_y);
}

double mean_absolute_error(std::span<const double> predicted, std::span<const double> gold) {
  if (predicted.size() != gold.size()) throw DomainError("mae: vectors differ in length");
  if (predicted.empty()) throw DomainError("mae: no points");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - gold[i]);
  return sum / static_cast<double>(predicted.size());
}

RegressionMetrics regression_metrics(const std::map<std::string, double>& preds,
                                     const std::map<std::string, double>& gold) {
  require_same_keys(preds, gold);
  if (preds.size() < 2) throw ValidationError("regression metrics need at least two examples");
  std::vector<double> p, g;
  p.reserve(preds.size());
  g.reserve(gold.size());
  for (const auto& [id, value] : preds) p.push_back(value);
  for (const auto& [id, value] : gold) g.push_back(value);

  RegressionMetrics out;
  out.n = p.size();
  out.mae = mean_absolute_error(p, g);
  try {
    out.pearson = pearson(p, g);
  } catch (const DomainError& e) {
    out.pearson_undefined = e.what();
  }
  return out;
}

// --- histogram -------------------------------------------------------------

std::size_t prediction_bin(double p, std::size_t bins) {
  if (bins == 0) throw ConfigError("prediction_bin: zero bins");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("prediction outside [0, 1]");
  const double b = static_cast<double>(bins);
  auto j = static_cast<std::size_t>(std::floor(p * b));
  if (j >= bins) j = bins - 1;
  // Snap to the comparison p >= j / bins so edges agree with discretize().
  while (j + 1 < bins && p >= static_cast<double>(j + 1) / b) ++j;
  while (j > 0 && p < static_cast<double>(j) / b) --j;
  return j;
}

std::size_t PredictionHistogram::row_total(LikertLabel gold) const {
  const auto& row = counts[static_cast<int>(gold)];
  std::size_t sum = 0;
  for (std::size_t c : row) sum += c;
  return sum;
}

std::size_t PredictionHistogram::in_band(LikertLabel gold) const {
  const auto row = static_cast<int>(gold);
  std::size_t sum = 0;
  for (std::size_t j = correct_band[row].first; j <= correct_band[row].second; ++j) sum += counts[row][j];
  return sum;
}

PredictionHistogram distribution_histogram(const std::map<std::string, double>& preds,
                                           const std::map<std::string, double>& gold, std::size_t bins) {
  if (bins < 5) throw ConfigError("distribution histogram needs at least 5 prediction bins");
  require_same_keys(preds, gold);
  PredictionHistogram h;
  h.bins = bins;
  const double b = static_cast<double>(bins);
  for (LikertLabel label : kLikertLabels) {
    const int row = static_cast<int>(label);
    h.counts[row].assign(bins, 0);
    const double lo = likert_bin_lower(label);
    const double hi = likert_bin_upper(label);
    std::size_t first = bins, last = 0;
    for (std::size_t j = 0; j < bins; ++j) {
      const double bin_lo = static_cast<double>(j) / b;
      const double bin_hi = static_cast<double>(j + 1) / b;
      if (bin_lo < hi && bin_hi > lo) {
        first = std::min(first, j);
        last = std::max(last, j);
      }
    }
    h.correct_band[row] = {first, last};
  }
  auto g = gold.begin();
  for (auto p = preds.begin(); p != preds.end(); ++p, ++g) {
    h.counts[static_cast<int>(discretize(g->second))][prediction_bin(p->second, bins)]++;
  }
  return h;
}

std::string histogram_to_csv(const PredictionHistogram& histogram) {
  std::ostringstream out;
  out << "gold_bin";
  for (std::size_t j = 0; j < histogram.bins; ++j) out << ",bin_" << j;
  out << ",band_first,band_last\n";
  for (LikertLabel label : kLikertLabels) {
    const int row = static_cast<int>(label);
    out << likert_name(label);
    for (std::size_t c : histogram.counts[row]) out << ',' << c;
    out << ',' << histogram.correct_band[row].first << ',' << histogram.correct_band[row].second << '\n';
  }
  return out.str();
}

std::string confusion_to_csv(const ConfusionMatrix& confusion) {
  std::ostringstream out;
  out << "actual,predicted_complex,predicted_simple\n";
  out << "complex," << confusion.tp << ',' << confusion.fn << '\n';
  out << "simple," << confusion.fp << ',' << confusion.tn << '\n';
  return out.str();
}

// --- hallucination audit ---------------------------------------------------

bool echo_matches(const std::optional<std::string>& echoed, const std::string& source) {
  if (!echoed) return false;
  try {
    return text::comparison_key(*echoed) == text::comparison_key(source);
  } catch (const Error&) {
    return false;
  }
}

namespace {

struct RunTally {
  std::size_t count = 0;
  std::size_t sentence_errors = 0;
  std::size_t word_errors = 0;
  bool any_echo = false;
};

}  // namespace

AuditResult hallucination_audit(std::span<const AuditItem> items, AuditMode mode) {
  std::map<std::size_t, RunTally> runs;
  for (const AuditItem& item : items) {
    if (!item.judgment.parsed()) continue;
    RunTally& tally = runs[mode == AuditMode::single_run ? 0 : item.run];
    tally.count++;
    if (item.judgment.echoed_sentence || item.judgment.echoed_word) tally.any_echo = true;
    if (!echo_matches(item.judgment.echoed_sentence, item.example.sentence)) tally.sentence_errors++;
    if (!echo_matches(item.judgment.echoed_word, item.example.target)) tally.word_errors++;
  }

  AuditResult result;
  std::vector<double> s_rates, w_rates;
  for (const auto& [run, tally] : runs) {
    if (!tally.any_echo || tally.count == 0) continue;
    result.audited_count += tally.count;
    s_rates.push_back(100.0 * static_cast<double>(tally.sentence_errors) / static_cast<double>(tally.count));
    w_rates.push_back(100.0 * static_cast<double>(tally.word_errors) / static_cast<double>(tally.count));
  }
  if (s_rates.empty()) return result;

  auto mean_std = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(v.size()))};
  };
  result.audited = true;
  result.runs = s_rates.size();
  std::tie(result.sentence_error, result.sentence_error_std) = mean_std(s_rates);
  std::tie(result.word_error, result.word_error_std) = mean_std(w_rates);
  return result;
}

}  // namespace lexcomp
