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

#include "lexcomp/toy_tasks.hpp"

#include <cmath>
#include <numbers>

#include "lexcomp/error.hpp"

namespace lexcomp {

std::string_view to_string(ToyKind kind) {
  return kind == ToyKind::sine_regression ? "sine_regression" : "logistic_2class";
}

ToyKind parse_toy_kind(std::string_view name) {
  if (name == "sine_regression" || name == "sine") return ToyKind::sine_regression;
  if (name == "logistic_2class" || name == "logistic") return ToyKind::logistic_2class;
  throw ConfigError("unknown toy task '" + std::string(name) + "' (expected sine_regression or logistic_2class)");
}

namespace {

constexpr std::size_t kFeatures = 5;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_dim(const ParamVector& theta, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(theta.size()) != expected) {
    throw ConfigError(std::string(what) + ": expected " + std::to_string(expected) + " parameters, got " +
                      std::to_string(theta.size()));
  }
}

// Splits 2 * kToyShots rows into support and query halves.
std::pair<Dataset, Dataset> split_halves(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const auto k = static_cast<Eigen::Index>(kToyShots);
  Dataset support{x.topRows(k), y.head(k)};
  Dataset query{x.bottomRows(k), y.tail(k)};
  return {std::move(support), std::move(query)};
}

bool has_duplicate_row(const Eigen::MatrixXd& x, Eigen::Index upto) {
  for (Eigen::Index i = 0; i < upto; ++i) {
    if (x.row(i) == x.row(upto)) return true;
  }
  return false;
}

}  // namespace

double sine_mlp_predict(const ParamVector& theta, double x, std::size_t hidden) {
  check_dim(theta, 3 * hidden + 1, "sine_mlp");
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto w1 = theta.segment(0, h), b1 = theta.segment(h, h), w2 = theta.segment(2 * h, h);
  return w2.dot((w1 * x + b1).array().tanh().matrix()) + theta(3 * h);
}

LossGrad sine_mlp_loss(const ParamVector& theta, const Dataset& data, std::size_t hidden) {
  check_dim(theta, 3 * hidden + 1, "sine_mlp");
  const auto h = static_cast<Eigen::Index>(hidden);
  const auto w1 = theta.segment(0, h), b1 = theta.segment(h, h), w2 = theta.segment(2 * h, h);
  const double b2 = theta(3 * h);
  const double m = static_cast<double>(data.size());

  LossGrad out;
  out.grad = ParamVector::Zero(theta.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double x = data.x(i, 0);
    const Eigen::VectorXd act = (w1 * x + b1).array().tanh().matrix();
    const double r = w2.dot(act) + b2 - data.y(i);
    out.loss += r * r / m;
    const double df = 2.0 * r / m;
    const Eigen::VectorXd dz = (df * w2.array() * (1.0 - act.array().square())).matrix();
    out.grad.segment(0, h) += dz * x;
    out.grad.segment(h, h) += dz;
    out.grad.segment(2 * h, h) += df * act;
    out.grad(3 * h) += df;
  }
  return out;
}

LossGrad logistic_loss(const ParamVector& theta, const Dataset& data) {
  check_dim(theta, kFeatures + 1, "logistic");
  const auto d = static_cast<Eigen::Index>(kFeatures);
  const double m = static_cast<double>(data.size());
  LossGrad out;
  out.grad = ParamVector::Zero(theta.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double z = data.x.row(i).dot(theta.head(d)) + theta(d);
    const double y = data.y(i);
    out.loss += (softplus(z) - y * z) / m;
    const double g = (sigmoid(z) - y) / m;
    out.grad.head(d) += g * data.x.row(i).transpose();
    out.grad(d) += g;
  }
  return out;
}

ToyTaskSampler::ToyTaskSampler(ToyKind kind, std::uint64_t seed, std::size_t hidden)
    : kind_(kind), hidden_(hidden), rng_(seed) {
  if (kind == ToyKind::sine_regression && hidden < 1) throw ConfigError("sine regressor needs >= 1 hidden unit");
}

std::size_t ToyTaskSampler::dim() const {
  return kind_ == ToyKind::sine_regression ? 3 * hidden_ + 1 : kFeatures + 1;
}

ParamVector ToyTaskSampler::initial_params(Rng& rng) const {
  ParamVector theta(static_cast<Eigen::Index>(dim()));
  if (kind_ == ToyKind::logistic_2class) {
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = rng.normal(0.0, 0.1);
    return theta;
  }
  const auto h = static_cast<Eigen::Index>(hidden_);
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden_));
  for (Eigen::Index i = 0; i < h; ++i) theta(i) = rng.normal();
  for (Eigen::Index i = 0; i < h; ++i) theta(h + i) = rng.normal();
  for (Eigen::Index i = 0; i < h; ++i) theta(2 * h + i) = rng.normal(0.0, out_scale);
  theta(3 * h) = 0.0;
  return theta;
}

MetaTask ToyTaskSampler::sine_task(double amplitude, double phase, Rng& rng) const {
  const auto rows = static_cast<Eigen::Index>(2 * kToyShots);
  Eigen::MatrixXd x(rows, 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    do {
      x(i, 0) = rng.uniform(-5.0, 5.0);
    } while (has_duplicate_row(x, i));
    y(i) = amplitude * std::sin(x(i, 0) + phase);
  }
  auto [support, query] = split_halves(x, y);
  const std::size_t hidden = hidden_;
  return {std::move(support), std::move(query),
          [hidden](const ParamVector& theta, const Dataset& data) { return sine_mlp_loss(theta, data, hidden); }};
}

MetaTask ToyTaskSampler::next() {
  if (kind_ == ToyKind::sine_regression) {
    const double amplitude = rng_.uniform(0.1, 5.0);
    const double phase = rng_.uniform(0.0, 2.0 * std::numbers::pi);
    return sine_task(amplitude, phase, rng_);
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(kFeatures));
  for (Eigen::Index j = 0; j < w.size(); ++j) w(j) = rng_.normal();
  const double b = rng_.normal();
  const auto rows = static_cast<Eigen::Index>(2 * kToyShots);
  Eigen::MatrixXd x(rows, static_cast<Eigen::Index>(kFeatures));
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    do {
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng_.normal();
    } while (has_duplicate_row(x, i));
    const double p = sigmoid(3.0 * (x.row(i).dot(w) + b));
    y(i) = rng_.uniform01() < p ? 1.0 : 0.0;
  }
  auto [support, query] = split_halves(x, y);
  return {std::move(support), std::move(query), logistic_loss};
}

FixedTaskSampler::FixedTaskSampler(MetaTask task, std::size_t dim, std::function<ParamVector(Rng&)> init)
    : task_(std::move(task)), dim_(dim), init_(std::move(init)) {}

}  // namespace lexcomp
