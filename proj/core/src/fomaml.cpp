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

#include "lexcomp/fomaml.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lexcomp/error.hpp"

namespace lexcomp {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::sgd;
  if (name == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected sgd or adam)");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::budget: return "budget";
    case StopReason::plateau: return "plateau";
    case StopReason::diverged: return "diverged";
  }
  return "budget";
}

void MetaConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite value >= 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be a finite value > 0");
  if (n < 1) throw ConfigError("inner steps n must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam beta2 must lie in [0, 1)");
  if (!(adam_epsilon > 0.0)) throw ConfigError("adam epsilon must be > 0");
  if (!(divergence_threshold > 0.0)) throw ConfigError("divergence threshold must be > 0");
}

namespace {

LossGrad checked_loss(const MetaTask& task, const ParamVector& theta, const Dataset& data, const char* where,
                      std::size_t step) {
  LossGrad lg = task.loss(theta, data);
  if (!std::isfinite(lg.loss)) {
    throw NumericError(std::string(where) + ": non-finite loss at step " + std::to_string(step));
  }
  if (lg.grad.size() != theta.size()) {
    throw NumericError(std::string(where) + ": gradient has dimension " + std::to_string(lg.grad.size()) +
                       ", parameters have " + std::to_string(theta.size()));
  }
  if (!lg.grad.allFinite()) {
    throw NumericError(std::string(where) + ": non-finite gradient at step " + std::to_string(step));
  }
  return lg;
}

}  // namespace

ParamVector inner_adapt(const ParamVector& theta, const MetaTask& task, double alpha, std::size_t n) {
  if (n < 1) throw ConfigError("inner steps n must be >= 1");
  ParamVector adapted = theta;
  for (std::size_t i = 0; i < n; ++i) {
    adapted -= alpha * checked_loss(task, adapted, task.support, "inner_adapt", i).grad;
  }
  return adapted;
}

OuterOptimizer::OuterOptimizer(const MetaConfig& config)
    : kind_(config.optimizer),
      lr_(config.beta),
      beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      epsilon_(config.adam_epsilon),
      decay_steps_(config.linear_decay ? config.outer_steps : 0) {}

ParamVector OuterOptimizer::apply(const ParamVector& theta, const ParamVector& grad) {
  double lr = lr_;
  if (decay_steps_ > 0) lr *= std::max(0.0, 1.0 - static_cast<double>(t_) / static_cast<double>(decay_steps_));
  ++t_;
  if (kind_ == OptimizerKind::sgd) return theta - lr * grad;
  if (m_.size() != theta.size()) {
    m_ = ParamVector::Zero(theta.size());
    v_ = ParamVector::Zero(theta.size());
  }
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  const double t = static_cast<double>(t_);
  const double c1 = 1.0 - std::pow(beta1_, t);
  const double c2 = 1.0 - std::pow(beta2_, t);
  const ParamVector m_hat = m_ / c1;
  const ParamVector v_hat = v_ / c2;
  return theta - lr * m_hat.cwiseQuotient((v_hat.array().sqrt() + epsilon_).matrix());
}

LossGrad fomaml_outer_gradient(const ParamVector& theta, const MetaTask& task, const MetaConfig& config) {
  const ParamVector adapted = inner_adapt(theta, task, config.alpha, config.n);
  return checked_loss(task, adapted, task.query, "fomaml_step", config.n);
}

ParamVector fomaml_step(const ParamVector& theta, const MetaTask& task, const MetaConfig& config,
                        OuterOptimizer& optimizer, double* query_loss) {
  const LossGrad outer = fomaml_outer_gradient(theta, task, config);
  if (query_loss != nullptr) *query_loss = outer.loss;
  return optimizer.apply(theta, outer.grad);
}

ParamVector fomaml_step(const ParamVector& theta, const MetaTask& task, const MetaConfig& config) {
  config.validate();
  OuterOptimizer optimizer(config);
  return fomaml_step(theta, task, config, optimizer);
}

MetaTrainResult meta_train(TaskSampler& sampler, const ParamVector& init, const MetaConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(init.size()) != sampler.dim()) {
    throw ConfigError("initial parameters have dimension " + std::to_string(init.size()) + ", tasks expect " +
                      std::to_string(sampler.dim()));
  }
  MetaTrainResult result;
  result.theta = init;
  result.trace.reserve(config.outer_steps);
  OuterOptimizer optimizer(config);
  double previous_window = 0.0;
  double window_sum = 0.0;

  for (std::size_t step = 0; step < config.outer_steps; ++step) {
    const MetaTask task = sampler.next();
    double loss = 0.0;
    ParamVector next;
    try {
      next = fomaml_step(result.theta, task, config, optimizer, &loss);
    } catch (const NumericError& e) {
      result.stop = StopReason::diverged;
      result.message = e.what();
      return result;
    }
    result.trace.push_back({step, loss});
    if (loss > config.divergence_threshold || !next.allFinite()) {
      result.stop = StopReason::diverged;
      std::ostringstream msg;
      msg << "query loss " << loss << " at step " << step << " exceeds the divergence threshold "
          << config.divergence_threshold;
      if (!next.allFinite()) msg.str("non-finite parameters after step " + std::to_string(step));
      result.message = msg.str();
      return result;
    }
    result.theta = std::move(next);

    if (config.plateau_window > 0) {
      window_sum += loss;
      if ((step + 1) % config.plateau_window == 0) {
        const double mean = window_sum / static_cast<double>(config.plateau_window);
        window_sum = 0.0;
        if (step + 1 > config.plateau_window &&
            previous_window - mean <= config.plateau_tolerance * std::abs(previous_window)) {
          result.stop = StopReason::plateau;
          return result;
        }
        previous_window = mean;
      }
    }
  }
  return result;
}

MetaTrainResult meta_train(TaskSampler& sampler, const MetaConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return meta_train(sampler, sampler.initial_params(rng), config);
}

std::string trace_to_csv(std::span<const TraceEntry> trace) {
  std::ostringstream out;
  out.precision(17);
  out << "step,query_loss\n";
  for (const TraceEntry& e : trace) out << e.step << ',' << e.query_loss << '\n';
  return out.str();
}

}  // namespace lexcomp
