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

#include <doctest.h>

#include <cmath>

#include "fd_probe.hpp"
#include "lexcomp/error.hpp"
#include "lexcomp/fomaml.hpp"
#include "lexcomp/pipeline.hpp"
#include "lexcomp/toy_tasks.hpp"

using namespace lexcomp;
using lexcomp::testing::gradient_relative_error;
using lexcomp::testing::numeric_gradient;

namespace {

// 0.5 * ||theta - t||^2 where t is the single row of x.
LossGrad quadratic(const ParamVector& theta, const Dataset& data) {
  const ParamVector diff = theta - data.x.row(0).transpose();
  return {0.5 * diff.squaredNorm(), diff};
}

MetaTask quadratic_task(double target, double query_target) {
  MetaTask task;
  task.support.x = Eigen::MatrixXd::Constant(1, 1, target);
  task.support.y = Eigen::VectorXd::Zero(1);
  task.query.x = Eigen::MatrixXd::Constant(1, 1, query_target);
  task.query.y = Eigen::VectorXd::Zero(1);
  task.loss = quadratic;
  return task;
}

// Mean 0.5 * (x theta - y)^2.
LossGrad least_squares(const ParamVector& theta, const Dataset& data) {
  const Eigen::VectorXd r = data.x * theta - data.y;
  const double n = static_cast<double>(data.size());
  return {0.5 * r.squaredNorm() / n, data.x.transpose() * r / n};
}

MetaConfig config(double alpha, double beta, std::size_t n) {
  MetaConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.n = n;
  return c;
}

ParamVector scalar(double v) { return ParamVector::Constant(1, v); }

double query_loss_at(const MetaTask& task, const ParamVector& theta) { return task.loss(theta, task.query).loss; }

}  // namespace

TEST_CASE("inner adaptation on the quadratic") {
  const MetaTask task = quadratic_task(1.0, 1.0);
  CHECK(inner_adapt(scalar(0.0), task, 0.5, 1)[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::fabs(inner_adapt(scalar(0.0), task, 0.5, 3)[0] - 0.875) < 1e-15);
  for (std::size_t n : {1u, 4u, 9u}) CHECK(inner_adapt(scalar(0.3), task, 0.0, n)[0] == 0.3);
  const ParamVector theta = scalar(0.0);
  inner_adapt(theta, task, 0.5, 3);
  CHECK(theta[0] == 0.0);
  CHECK(inner_adapt(theta, task, 0.5, 3) == inner_adapt(theta, task, 0.5, 3));
}

TEST_CASE("hand-computed outer update") {
  const MetaTask task = quadratic_task(1.0, 1.0);
  const ParamVector next = fomaml_step(scalar(0.0), task, config(0.5, 0.1, 1));
  CHECK(std::fabs(next[0] - 0.05) <= 1e-12);
  const LossGrad outer = fomaml_outer_gradient(scalar(0.0), task, config(0.5, 0.1, 1));
  CHECK(outer.grad[0] == -0.5);
  CHECK(outer.loss == 0.125);
}

TEST_CASE("alpha = 0 reduces to gradient descent on the query loss") {
  const MetaTask task = quadratic_task(1.0, -2.0);
  const ParamVector next = fomaml_step(scalar(0.7), task, config(0.0, 0.1, 5));
  CHECK(next[0] == doctest::Approx(0.7 - 0.1 * (0.7 + 2.0)).epsilon(1e-15));
}

TEST_CASE("small alpha limit follows the query gradient at theta") {
  ToyTaskSampler sampler(ToyKind::logistic_2class, 5);
  const MetaTask task = sampler.next();
  Rng rng(1);
  const ParamVector theta = sampler.initial_params(rng);
  const MetaConfig cfg = config(1e-8, 0.1, 1);
  const ParamVector direction = (theta - fomaml_step(theta, task, cfg)) / cfg.beta;
  const ParamVector want = task.loss(theta, task.query).grad;
  CHECK((direction - want).norm() / want.norm() <= 1e-6);
}

TEST_CASE("task gradients pass the finite-difference probe") {
  for (ToyKind kind : {ToyKind::sine_regression, ToyKind::logistic_2class}) {
    ToyTaskSampler sampler(kind, 17);
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const MetaTask task = sampler.next();
      const ParamVector theta = sampler.initial_params(rng);
      for (const Dataset* data : {&task.support, &task.query}) {
        const auto f = [&](const ParamVector& p) { return task.loss(p, *data).loss; };
        CHECK(gradient_relative_error(task.loss(theta, *data).grad, numeric_gradient(f, theta)) <= 1e-4);
      }
    }
  }
}

TEST_CASE("outer update direction matches finite differences at the adapted point") {
  for (ToyKind kind : {ToyKind::logistic_2class, ToyKind::sine_regression}) {
    ToyTaskSampler sampler(kind, 29);
    Rng rng(3);
    const MetaConfig cfg = config(0.1, 0.01, 5);
    for (int trial = 0; trial < 10; ++trial) {
      const MetaTask task = sampler.next();
      const ParamVector theta = sampler.initial_params(rng);
      const ParamVector adapted = inner_adapt(theta, task, cfg.alpha, cfg.n);
      const auto f = [&](const ParamVector& p) { return query_loss_at(task, p); };
      const ParamVector direction = (theta - fomaml_step(theta, task, cfg)) / cfg.beta;
      CHECK(gradient_relative_error(direction, numeric_gradient(f, adapted)) <= 1e-4);
    }
  }
}

TEST_CASE("first adam step moves each coordinate by beta") {
  MetaTask task;
  task.support.x = Eigen::MatrixXd::Zero(1, 3);
  task.support.y = Eigen::VectorXd::Zero(1);
  task.query.x = Eigen::RowVector3d(1.0, -2.0, 0.5);
  task.query.y = Eigen::VectorXd::Zero(1);
  task.loss = quadratic;
  MetaConfig cfg = config(0.0, 0.01, 1);
  cfg.optimizer = OptimizerKind::adam;
  const ParamVector next = fomaml_step(ParamVector::Zero(3), task, cfg);
  CHECK(next[0] == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(next[1] == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(next[2] == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("non-finite losses raise NumericError") {
  MetaTask task = quadratic_task(1.0, 1.0);
  task.loss = [](const ParamVector& theta, const Dataset&) {
    return LossGrad{std::nan(""), ParamVector::Zero(theta.size())};
  };
  CHECK_THROWS_AS(inner_adapt(scalar(0.0), task, 0.1, 1), NumericError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(MetaConfig{}.validate());
  CHECK_THROWS_AS(config(0.1, 0.0, 1).validate(), ConfigError);
  CHECK_THROWS_AS(config(-0.1, 0.1, 1).validate(), ConfigError);
  CHECK_THROWS_AS(config(0.1, 0.1, 0).validate(), ConfigError);
  MetaConfig c;
  c.adam_beta1 = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_optimizer("adam") == OptimizerKind::adam);
  CHECK_THROWS_AS(parse_optimizer("rmsprop"), ConfigError);
}

TEST_CASE("toy sampler streams and task shapes") {
  ToyTaskSampler a(ToyKind::sine_regression, 9), b(ToyKind::sine_regression, 9), c(ToyKind::sine_regression, 10);
  CHECK(a.dim() == 121);
  for (int i = 0; i < 5; ++i) {
    const MetaTask ta = a.next(), tb = b.next(), tc = c.next();
    CHECK(ta.support.x == tb.support.x);
    CHECK(ta.query.y == tb.query.y);
    CHECK(ta.support.x != tc.support.x);
    CHECK(ta.support.size() == static_cast<Eigen::Index>(kToyShots));
    CHECK(ta.query.size() == static_cast<Eigen::Index>(kToyShots));
    for (Eigen::Index s = 0; s < ta.support.size(); ++s)
      for (Eigen::Index q = 0; q < ta.query.size(); ++q) CHECK(ta.support.x.row(s) != ta.query.x.row(q));
  }
  ToyTaskSampler logistic(ToyKind::logistic_2class, 1);
  CHECK(logistic.dim() == 6);
  const MetaTask t = logistic.next();
  CHECK(t.support.x.cols() == 5);
  for (Eigen::Index i = 0; i < t.support.size(); ++i) CHECK((t.support.y[i] == 0.0 || t.support.y[i] == 1.0));
}

TEST_CASE("sine task targets follow the generating function") {
  ToyTaskSampler sampler(ToyKind::sine_regression, 4);
  Rng rng(5);
  const MetaTask task = sampler.sine_task(2.0, 0.5, rng);
  for (Eigen::Index i = 0; i < task.support.size(); ++i) {
    const double x = task.support.x(i, 0);
    CHECK(x >= -5.0);
    CHECK(x <= 5.0);
    CHECK(task.support.y[i] == doctest::Approx(2.0 * std::sin(x + 0.5)));
  }
}

TEST_CASE("linear decay scales the outer rate down to zero") {
  MetaConfig cfg = config(0.0, 0.1, 1);
  cfg.linear_decay = true;
  cfg.outer_steps = 4;
  OuterOptimizer opt(cfg);
  ParamVector theta = ParamVector::Zero(1);
  const ParamVector grad = ParamVector::Ones(1);
  std::vector<double> moves;
  for (int i = 0; i < 5; ++i) {
    const ParamVector next = opt.apply(theta, grad);
    moves.push_back(theta(0) - next(0));
    theta = next;
  }
  CHECK(moves[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(moves[1] == doctest::Approx(0.075).epsilon(1e-15));
  CHECK(moves[2] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(moves[3] == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(moves[4] == 0.0);
}

TEST_CASE("zero outer steps return the initialization") {
  ToyTaskSampler sampler(ToyKind::logistic_2class, 1);
  MetaConfig cfg;
  cfg.outer_steps = 0;
  const ParamVector init = ParamVector::LinSpaced(6, -1.0, 1.0);
  const auto result = meta_train(sampler, init, cfg);
  CHECK(result.theta == init);
  CHECK(result.trace.empty());
  CHECK(result.stop == StopReason::budget);
}

TEST_CASE("training is bit-reproducible per seed") {
  MetaConfig cfg = demo_meta_defaults();
  cfg.outer_steps = 50;
  ToyTaskSampler s1(ToyKind::sine_regression, 3), s2(ToyKind::sine_regression, 3);
  const auto r1 = meta_train(s1, cfg, 11);
  const auto r2 = meta_train(s2, cfg, 11);
  REQUIRE(r1.trace.size() == 50);
  for (std::size_t i = 0; i < r1.trace.size(); ++i) CHECK(r1.trace[i].query_loss == r2.trace[i].query_loss);
  CHECK(r1.theta == r2.theta);
  CHECK(trace_to_csv(r1.trace) == trace_to_csv(r2.trace));
}

TEST_CASE("a single fixed task is optimized") {
  Rng rng(8);
  const ParamVector truth = ParamVector::LinSpaced(3, -1.0, 2.0);
  MetaTask task;
  task.support.x = Eigen::MatrixXd::NullaryExpr(6, 3, [&] { return rng.normal(); });
  task.query.x = Eigen::MatrixXd::NullaryExpr(6, 3, [&] { return rng.normal(); });
  task.support.y = task.support.x * truth;
  task.query.y = task.query.x * truth;
  task.loss = least_squares;
  FixedTaskSampler sampler(task, 3, [](Rng&) { return ParamVector::Zero(3); });
  MetaConfig cfg = config(0.1, 0.05, 5);
  cfg.outer_steps = 2000;
  const auto result = meta_train(sampler, cfg, 0);
  CHECK(result.stop == StopReason::budget);
  const ParamVector adapted = inner_adapt(result.theta, task, cfg.alpha, cfg.n);
  CHECK(query_loss_at(task, adapted) < 1e-3);
}

TEST_CASE("plateau stop") {
  FixedTaskSampler sampler(quadratic_task(1.0, 1.0), 1, [](Rng&) { return scalar(0.0); });
  MetaConfig cfg = config(0.1, 0.5, 1);
  cfg.outer_steps = 10000;
  cfg.plateau_window = 20;
  cfg.plateau_tolerance = 1e-3;
  const auto result = meta_train(sampler, cfg, 0);
  CHECK(result.stop == StopReason::plateau);
  CHECK(result.trace.size() < 10000);
  CHECK(result.trace.size() % 20 == 0);
}

TEST_CASE("divergence stops with the trace") {
  FixedTaskSampler sampler(quadratic_task(1.0, 1.0), 1, [](Rng&) { return scalar(0.0); });
  MetaConfig cfg = config(0.0, 3.0, 1);
  cfg.outer_steps = 1000;
  const auto result = meta_train(sampler, cfg, 0);
  CHECK(result.stop == StopReason::diverged);
  CHECK_FALSE(result.trace.empty());
  CHECK(result.trace.size() < 1000);
  CHECK(result.theta.allFinite());
  CHECK_FALSE(result.message.empty());
}

TEST_CASE("dimension mismatch is a configuration error") {
  ToyTaskSampler sampler(ToyKind::logistic_2class, 1);
  CHECK_THROWS_AS(meta_train(sampler, ParamVector::Zero(3), MetaConfig{}), ConfigError);
}
