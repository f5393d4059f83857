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
#include <string_view>

#include "lexcomp/fomaml.hpp"

namespace lexcomp {

enum class ToyKind { sine_regression, logistic_2class };
std::string_view to_string(ToyKind kind);
ToyKind parse_toy_kind(std::string_view name);

// Examples per support set and per query set.
inline constexpr std::size_t kToyShots = 6;

// Regressor f(x) = w2 . tanh(w1 * x + b1) + b2 with `hidden` units and mean
// squared error. Parameter layout: [w1 (hidden), b1 (hidden), w2 (hidden), b2].
LossGrad sine_mlp_loss(const ParamVector& theta, const Dataset& data, std::size_t hidden);
double sine_mlp_predict(const ParamVector& theta, double x, std::size_t hidden);

// Logistic regression on 5 features with mean binary cross-entropy.
// Parameter layout: [w (5), b].
LossGrad logistic_loss(const ParamVector& theta, const Dataset& data);

// I.i.d. toy tasks with analytic gradients.
//   sine_regression: y = A sin(x + phi), A ~ U[0.1, 5], phi ~ U[0, 2 pi],
//                    x ~ U[-5, 5]
//   logistic_2class: w* ~ N(0, I_5), b* ~ N(0, 1), x ~ N(0, I_5),
//                    y ~ Bernoulli(sigmoid(3 (w* . x + b*)))
// Each task draws 2 * kToyShots distinct inputs and splits them into support
// and query halves. The stream is a function of the seed.
class ToyTaskSampler : public TaskSampler {
 public:
  explicit ToyTaskSampler(ToyKind kind, std::uint64_t seed, std::size_t hidden = 40);

  MetaTask next() override;
  std::size_t dim() const override;
  ParamVector initial_params(Rng& rng) const override;

  ToyKind kind() const { return kind_; }
  std::size_t hidden() const { return hidden_; }

  // Task with given parameters; `rng` draws only the inputs and labels.
  MetaTask sine_task(double amplitude, double phase, Rng& rng) const;

 private:
  ToyKind kind_;
  std::size_t hidden_;
  Rng rng_;
};

// Returns the same task on every call.
class FixedTaskSampler : public TaskSampler {
 public:
  FixedTaskSampler(MetaTask task, std::size_t dim, std::function<ParamVector(Rng&)> init);

  MetaTask next() override { return task_; }
  std::size_t dim() const override { return dim_; }
  ParamVector initial_params(Rng& rng) const override { return init_(rng); }

 private:
  MetaTask task_;
  std::size_t dim_;
  std::function<ParamVector(Rng&)> init_;
};

}  // namespace lexcomp
