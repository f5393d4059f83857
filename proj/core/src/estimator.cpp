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

#include "lexcomp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lexcomp/error.hpp"
#include "lexcomp/metrics.hpp"
#include "lexcomp/random.hpp"

namespace lexcomp {

ScoreEstimate estimate(std::span<const LikertLabel> samples) {
  if (samples.empty()) throw DomainError("estimate: no parsed samples");
  ScoreEstimate out;
  out.samples.reserve(samples.size());
  double sum = 0.0;
  for (LikertLabel label : samples) {
    out.samples.push_back(likert_to_numeric(label));
    sum += out.samples.back();
  }
  out.k_used = samples.size();
  const double n = static_cast<double>(out.k_used);
  out.mean = sum / n;
  double var = 0.0;
  for (double s : out.samples) var += (s - out.mean) * (s - out.mean);
  out.std = std::sqrt(var / n);
  return out;
}

std::string_view to_string(CurveMetric metric) { return metric == CurveMetric::pearson ? "pearson" : "mae"; }

CurveMetric parse_curve_metric(std::string_view name) {
  if (name == "pearson") return CurveMetric::pearson;
  if (name == "mae") return CurveMetric::mae;
  throw ConfigError("unknown metric '" + std::string(name) + "' (expected pearson or mae)");
}

std::vector<CurvePoint> bootstrap_k_curve(const std::map<std::string, std::vector<double>>& samples_per_example,
                                          CurveMetric metric, const std::map<std::string, double>& gold,
                                          const BootstrapOptions& options) {
  if (samples_per_example.empty()) throw ValidationError("bootstrap: no examples");

  std::vector<const std::vector<double>*> samples;
  std::vector<double> gold_values;
  std::size_t min_count = SIZE_MAX;
  for (const auto& [id, values] : samples_per_example) {
    const auto g = gold.find(id);
    if (g == gold.end()) throw ValidationError("bootstrap: no gold score for example " + id);
    samples.push_back(&values);
    gold_values.push_back(g->second);
    min_count = std::min(min_count, values.size());
  }
  const std::size_t k_max = options.k_max == 0 ? min_count : options.k_max;
  if (k_max == 0 || min_count < k_max) {
    std::ostringstream msg;
    msg << "bootstrap: every example needs at least " << std::max<std::size_t>(k_max, 1)
        << " samples; counts:";
    for (const auto& [id, values] : samples_per_example) {
      if (values.size() < std::max<std::size_t>(k_max, 1)) msg << ' ' << id << '=' << values.size();
    }
    throw ValidationError(msg.str());
  }
  if (metric == CurveMetric::pearson) {
    bool constant = true;
    for (double g : gold_values) constant = constant && g == gold_values.front();
    if (constant) throw DomainError("bootstrap: Pearson undefined because gold scores have zero variance");
  }

  auto score = [&](const std::vector<double>& preds, std::size_t k) {
    if (metric == CurveMetric::mae) return mean_absolute_error(preds, gold_values);
    try {
      return pearson(preds, gold_values);
    } catch (const DomainError&) {
      throw DomainError("bootstrap: Pearson undefined at k=" + std::to_string(k) +
                        " because the predicted means are constant");
    }
  };

  std::vector<CurvePoint> curve;
  curve.reserve(k_max);
  std::vector<double> preds(samples.size());
  for (std::size_t k = 1; k <= k_max; ++k) {
    CurvePoint point;
    point.k = k;
    if (options.resamples == 0) {
      for (std::size_t e = 0; e < samples.size(); ++e) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += (*samples[e])[i];
        preds[e] = sum / static_cast<double>(k);
      }
      point.mean = score(preds, k);
      curve.push_back(point);
      continue;
    }
    Rng rng(mix_seed(options.seed, k));
    std::vector<double> values;
    values.reserve(options.resamples);
    for (std::size_t r = 0; r < options.resamples; ++r) {
      for (std::size_t e = 0; e < samples.size(); ++e) {
        const std::vector<double>& pool = *samples[e];
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += pool[rng.uniform_index(pool.size())];
        preds[e] = sum / static_cast<double>(k);
      }
      values.push_back(score(preds, k));
    }
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
      point.mean = values.front();
      point.std = 0.0;
      curve.push_back(point);
      continue;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    point.mean = mean;
    point.std = std::sqrt(var / static_cast<double>(values.size()));
    curve.push_back(point);
  }
  return curve;
}

std::string curve_to_csv(std::span<const CurvePoint> curve) {
  std::ostringstream out;
  out.precision(17);
  out << "k,mean,std\n";
  for (const CurvePoint& p : curve) out << p.k << ',' << p.mean << ',' << p.std << '\n';
  return out.str();
}

}  // namespace lexcomp
