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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lexcomp/random.hpp"

namespace lexcomp {

using ParamVector = Eigen::VectorXd;

// Rows of x are examples; y holds one target per row.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  Eigen::Index size() const { return x.rows(); }
};

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

// Loss and its analytic gradient with respect to the parameters.
using LossFn = std::function<LossGrad(const ParamVector& theta, const Dataset& data)>;

struct MetaTask {
  Dataset support;
  Dataset query;
  LossFn loss;
};

enum class OptimizerKind { sgd, adam };
std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct MetaConfig {
  double alpha = 0.1;              // inner learning rate
  double beta = 0.01;              // outer learning rate
  std::size_t n = 5;               // inner steps
  std::size_t outer_steps = 3000;
  OptimizerKind optimizer = OptimizerKind::sgd;
  // When set, the outer rate at step t (0-based) is beta * (1 - t / outer_steps).
  bool linear_decay = false;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Training stops as diverged once a query loss exceeds this.
  double divergence_threshold = 1e6;
  // Plateau stop: when > 0, training ends after a window of this many steps
  // whose mean query loss improved on the previous window's by less than
  // plateau_tolerance (relative).
  std::size_t plateau_window = 0;
  double plateau_tolerance = 1e-4;

  // Throws ConfigError: alpha >= 0, beta > 0, n >= 1, Adam constants in range.
  void validate() const;
};

// theta'_{i+1} = theta'_i - alpha * grad L(theta'_i, support), n times from
// theta'_0 = theta. Throws NumericError on a non-finite loss or gradient.
ParamVector inner_adapt(const ParamVector& theta, const MetaTask& task, double alpha, std::size_t n);

// Outer-loop optimizer state. SGD is stateless; Adam keeps first and second
// moment estimates and the step count.
class OuterOptimizer {
 public:
  explicit OuterOptimizer(const MetaConfig& config);

  ParamVector apply(const ParamVector& theta, const ParamVector& grad);
  std::size_t steps() const { return t_; }

 private:
  OptimizerKind kind_;
  double lr_, beta1_, beta2_, epsilon_;
  std::size_t decay_steps_ = 0;  // 0: constant rate
  ParamVector m_, v_;
  std::size_t t_ = 0;
};

// Query loss and gradient at the adapted parameters: the first-order
// approximation of the meta-gradient.
LossGrad fomaml_outer_gradient(const ParamVector& theta, const MetaTask& task, const MetaConfig& config);

// One outer update with an existing optimizer.
ParamVector fomaml_step(const ParamVector& theta, const MetaTask& task, const MetaConfig& config,
                        OuterOptimizer& optimizer, double* query_loss = nullptr);
// One outer update with a fresh optimizer (plain SGD step, or Adam's first
// step).
ParamVector fomaml_step(const ParamVector& theta, const MetaTask& task, const MetaConfig& config);

// Source of meta-training tasks.
class TaskSampler {
 public:
  virtual ~TaskSampler() = default;
  virtual MetaTask next() = 0;
  virtual std::size_t dim() const = 0;
  // Random initialization for the model the tasks are defined over.
  virtual ParamVector initial_params(Rng& rng) const = 0;
};

struct TraceEntry {
  std::size_t step = 0;
  double query_loss = 0.0;  // after adaptation, before the outer update
};

enum class StopReason { budget, plateau, diverged };
std::string_view to_string(StopReason reason);

struct MetaTrainResult {
  ParamVector theta;
  std::vector<TraceEntry> trace;
  StopReason stop = StopReason::budget;
  std::string message;  // diagnostic when diverged
};

// Runs up to outer_steps iterations of sample -> adapt -> outer update.
// Divergence stops training and returns the parameters from before the
// failing step together with the trace so far.
MetaTrainResult meta_train(TaskSampler& sampler, const ParamVector& init, const MetaConfig& config);
// Initialization drawn from sampler.initial_params(Rng(seed)).
MetaTrainResult meta_train(TaskSampler& sampler, const MetaConfig& config, std::uint64_t seed);

// "step,query_loss"
std::string trace_to_csv(std::span<const TraceEntry> trace);

}  // namespace lexcomp
