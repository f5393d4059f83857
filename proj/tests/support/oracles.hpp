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

// Straightforward reference implementations that the library results are
// checked against. They favour obviousness over speed.

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace lexcomp::testing {

struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Recounts the confusion matrix pair by pair.
inline Counts recount(const std::vector<bool>& pred, const std::vector<bool>& gold) {
  Counts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] && gold[i]) ++c.tp;
    else if (pred[i] && !gold[i]) ++c.fp;
    else if (!pred[i] && !gold[i]) ++c.tn;
    else ++c.fn;
  }
  return c;
}

inline double oracle_f1(const Counts& c) {
  // harmonic mean written out as 2TP / (2TP + FP + FN)
  const double denom = 2.0 * c.tp + c.fp + c.fn;
  return denom == 0.0 ? 0.0 : 2.0 * c.tp / denom;
}

inline double oracle_accuracy(const Counts& c) {
  const double total = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
  return total == 0.0 ? 0.0 : (c.tp + c.tn) / total;
}

// Two-pass covariance with long double accumulators.
inline double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double oracle_mae(const std::vector<double>& x, const std::vector<double>& y) {
  long double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::fabs(static_cast<long double>(x[i]) - y[i]);
  return static_cast<double>(s / x.size());
}

// Prediction bin by scanning the edges i/bins.
inline std::size_t oracle_bin(double p, std::size_t bins) {
  for (std::size_t i = 1; i < bins; ++i) {
    if (p < static_cast<double>(i) / static_cast<double>(bins)) return i - 1;
  }
  return bins - 1;
}

inline double relative_error(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace lexcomp::testing
