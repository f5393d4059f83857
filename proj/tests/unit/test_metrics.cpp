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
#include <map>
#include <string>
#include <vector>

#include "lexcomp/error.hpp"
#include "lexcomp/metrics.hpp"
#include "lexcomp/random.hpp"
#include "oracles.hpp"

using namespace lexcomp;
namespace oracle = lexcomp::testing;

namespace {

std::string key(std::size_t i) { return "e" + std::to_string(i); }

}  // namespace

TEST_CASE("confusion matrix arithmetic") {
  const ConfusionMatrix c{6, 2, 10, 2};
  CHECK(c.total() == 20);
  CHECK(c.precision() == 0.75);
  CHECK(c.recall() == 0.75);
  CHECK(c.f1() == 0.75);
  CHECK(c.accuracy() == 0.8);
  CHECK(ConfusionMatrix{}.f1() == 0.0);
  CHECK(ConfusionMatrix{0, 0, 5, 0}.f1() == 0.0);
}

TEST_CASE("binary metrics against the recount oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(60);
    std::map<std::string, bool> preds, gold;
    std::vector<bool> pv, gv;
    for (std::size_t i = 0; i < n; ++i) {
      const bool p = rng.uniform_index(2), g = rng.uniform_index(3) == 0;
      preds[key(i)] = p;
      gold[key(i)] = g;
    }
    for (const auto& [k, v] : preds) pv.push_back(v);
    for (const auto& [k, v] : gold) gv.push_back(v);
    const auto m = binary_metrics(preds, gold);
    const auto c = oracle::recount(pv, gv);
    CHECK(m.confusion.tp == c.tp);
    CHECK(m.confusion.fp == c.fp);
    CHECK(m.confusion.tn == c.tn);
    CHECK(m.confusion.fn == c.fn);
    CHECK(oracle::relative_error(m.f1, oracle::oracle_f1(c)) <= 1e-12);
    CHECK(oracle::relative_error(m.accuracy, oracle::oracle_accuracy(c)) <= 1e-12);
  }
}

TEST_CASE("mismatched keys are listed") {
  std::map<std::string, bool> preds = {{"a", true}, {"b", false}};
  std::map<std::string, bool> gold = {{"a", true}, {"c", false}};
  try {
    binary_metrics(preds, gold);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("b") != std::string::npos);
    CHECK(what.find("c") != std::string::npos);
  }
}

TEST_CASE("pearson against the two-pass oracle") {
  Rng rng(202);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(100);
    std::vector<double> x(n), y(n);
    const double offset = trial % 3 == 0 ? 1e6 : 0.0;  // stresses cancellation
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = offset + rng.uniform01();
      y[i] = 0.5 * (x[i] - offset) + 0.5 * rng.uniform01();
    }
    const double want = oracle::oracle_pearson(x, y);
    CHECK(oracle::relative_error(pearson(x, y), want) <= 1e-9);
    if (offset == 0.0) CHECK(oracle::relative_error(pearson(x, y), want) <= 1e-12);
    CHECK(oracle::relative_error(mean_absolute_error(x, y), oracle::oracle_mae(x, y)) <= 1e-12);
  }
}

TEST_CASE("pearson domain errors") {
  const std::vector<double> a = {1, 2, 3}, flat = {2, 2, 2}, one = {1};
  CHECK_THROWS_AS(pearson(a, flat), DomainError);
  CHECK_THROWS_AS(pearson(one, one), DomainError);
  CHECK_THROWS_AS(pearson(a, one), DomainError);
  CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> r = {3, 2, 1};
  CHECK(pearson(a, r) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("regression metrics report an undefined correlation") {
  const auto m = regression_metrics({{"a", 0.5}, {"b", 0.5}}, {{"a", 0.2}, {"b", 0.9}});
  CHECK_FALSE(m.pearson.has_value());
  CHECK_FALSE(m.pearson_undefined.empty());
  CHECK(m.mae == doctest::Approx(0.35));
  CHECK(m.n == 2);
}

TEST_CASE("prediction bins agree with the scan oracle and discretize") {
  Rng rng(5);
  for (std::size_t bins : {5u, 7u, 10u, 20u}) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      CHECK(prediction_bin(p, bins) == oracle::oracle_bin(p, bins));
    }
    for (int i = 0; i < 1000; ++i) {
      const double p = rng.uniform01();
      CHECK(prediction_bin(p, bins) == oracle::oracle_bin(p, bins));
    }
  }
  for (int i = 0; i <= 1000; ++i) {
    const double p = i / 1000.0;
    CHECK(prediction_bin(p, 5) == static_cast<std::size_t>(discretize(p)));
  }
  CHECK_THROWS_AS(prediction_bin(1.5, 10), DomainError);
}

TEST_CASE("histogram against brute force") {
  Rng rng(9);
  std::map<std::string, double> preds, gold;
  for (std::size_t i = 0; i < 400; ++i) {
    preds[key(i)] = rng.uniform01();
    gold[key(i)] = rng.uniform01();
  }
  const auto h = distribution_histogram(preds, gold, 10);
  std::size_t total = 0;
  for (LikertLabel label : kLikertLabels) {
    const int row = static_cast<int>(label);
    for (std::size_t j = 0; j < 10; ++j) {
      std::size_t count = 0;
      for (const auto& [k, g] : gold) {
        if (discretize(g) == label && oracle::oracle_bin(preds.at(k), 10) == j) ++count;
      }
      CHECK(h.counts[row][j] == count);
    }
    total += h.row_total(label);
    // with 10 bins each gold fifth covers exactly two prediction bins
    CHECK(h.correct_band[row].first == 2 * static_cast<std::size_t>(row));
    CHECK(h.correct_band[row].second == 2 * static_cast<std::size_t>(row) + 1);
  }
  CHECK(total == 400);
  CHECK_THROWS_AS(distribution_histogram(preds, gold, 4), ConfigError);
}

TEST_CASE("histogram bands overlap the gold interval for uneven bins") {
  const auto h = distribution_histogram({{"a", 0.5}}, {{"a", 0.5}}, 7);
  // gold Neutral = [0.4, 0.6) overlaps bins [2/7,3/7) .. [4/7,5/7)
  CHECK(h.correct_band[2] == std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(h.in_band(LikertLabel::Neutral) == 1);
}

TEST_CASE("csv renderers") {
  CHECK(confusion_to_csv({6, 2, 10, 2}) == "actual,predicted_complex,predicted_simple\ncomplex,6,2\nsimple,2,10\n");
  const auto h = distribution_histogram({{"a", 0.05}}, {{"a", 0.1}}, 5);
  CHECK(histogram_to_csv(h).rfind("gold_bin,bin_0,bin_1,bin_2,bin_3,bin_4,band_first,band_last\nVeryEasy,1,0,0,0,0,0,0\n", 0) == 0);
}

TEST_CASE("echo comparison") {
  CHECK(echo_matches(std::string(" the  Cat "), "The cat"));
  CHECK_FALSE(echo_matches(std::nullopt, "x"));
  CHECK_FALSE(echo_matches(std::string("America"), "South America"));
}

TEST_CASE("audit rates and modes") {
  Example ex;
  ex.sentence = "A b c.";
  ex.target = "b";
  auto item = [&](const char* s, const char* w, std::size_t run, bool parsed = true) {
    AuditItem it;
    it.example = ex;
    it.run = run;
    it.judgment.status = parsed ? ParseStatus::ok : ParseStatus::failed;
    it.judgment.echoed_sentence = s;
    it.judgment.echoed_word = w;
    return it;
  };
  const std::vector<AuditItem> items = {item("A b c.", "b", 0), item("A b.", "b", 0), item("A b c.", "c", 1),
                                        item("A b c.", "b", 1), item("zzz", "zzz", 1, false)};
  const auto single = hallucination_audit(items, AuditMode::single_run);
  CHECK(single.audited);
  CHECK(single.audited_count == 4);
  CHECK(single.sentence_error == 25.0);
  CHECK(single.word_error == 25.0);

  const auto per_run = hallucination_audit(items, AuditMode::per_run_lcp);
  CHECK(per_run.runs == 2);
  CHECK(per_run.sentence_error == 25.0);
  CHECK(per_run.sentence_error_std == 25.0);
  CHECK(per_run.word_error == 25.0);

  std::vector<AuditItem> silent = {item("x", "y", 0)};
  silent[0].judgment.echoed_sentence.reset();
  silent[0].judgment.echoed_word.reset();
  CHECK_FALSE(hallucination_audit(silent, AuditMode::single_run).audited);
}
