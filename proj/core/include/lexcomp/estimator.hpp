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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexcomp/corpus.hpp"

namespace lexcomp {

// Sample-mean estimate of the expected Likert score over K sampled
// responses. `samples` holds the numeric values (each in {0, .25, .5, .75, 1}).
struct ScoreEstimate {
  std::string example_id;
  std::vector<double> samples;
  std::size_t k_used = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

// Maps each label to its numeric value and returns the sample mean and
// population std. Throws DomainError on an empty list.
ScoreEstimate estimate(std::span<const LikertLabel> samples);

enum class CurveMetric { pearson, mae };
std::string_view to_string(CurveMetric metric);
CurveMetric parse_curve_metric(std::string_view name);

struct CurvePoint {
  std::size_t k = 0;
  double mean = 0.0;
  double std = 0.0;  // population std across resamples
};

struct BootstrapOptions {
  // Number of bootstrap datasets per k. Zero disables resampling: each
  // example then contributes its first k samples, once.
  std::size_t resamples = 100;
  std::uint64_t seed = 0;
  // Largest k on the curve; 0 means the smallest per-example sample count.
  std::size_t k_max = 0;
};

// For k = 1..k_max, draws `resamples` datasets by taking k scores per
// example with replacement from that example's samples, scores the per-
// example means against gold with `metric`, and reports mean and std across
// resamples. Resampling for a given k depends only on (seed, k).
// Throws ValidationError if an example lacks gold or has fewer than k_max
// samples; DomainError if the metric is undefined (constant gold or
// constant predictions under Pearson).
std::vector<CurvePoint> bootstrap_k_curve(const std::map<std::string, std::vector<double>>& samples_per_example,
                                          CurveMetric metric, const std::map<std::string, double>& gold,
                                          const BootstrapOptions& options);

// "k,mean,std" with one row per point.
std::string curve_to_csv(std::span<const CurvePoint> curve);

}  // namespace lexcomp
