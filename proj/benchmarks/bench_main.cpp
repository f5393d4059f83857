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

#include <benchmark/benchmark.h>

#include <map>
#include <string>
#include <vector>

#include "lexcomp/pipeline.hpp"

using namespace lexcomp;

namespace {

const std::string kResponse =
    "Sure, here is my answer.\n```json\n{\n  \"sentence\": \"The committee studied the proposal.\",\n"
    "  \"word\": \"proposal\",\n  \"proof\": \"A common word in formal news text.\",\n"
    "  \"complexity\": \"easy\",\n}\n```";

void bm_extract(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract(kResponse, Task::lcp));
}
BENCHMARK(bm_extract);

void bm_regression_metrics(benchmark::State& state) {
  Rng rng(1);
  std::map<std::string, double> preds, gold;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    const std::string id = "e" + std::to_string(i);
    gold[id] = rng.uniform01();
    preds[id] = rng.uniform01();
  }
  for (auto _ : state) benchmark::DoNotOptimize(regression_metrics(preds, gold));
}
BENCHMARK(bm_regression_metrics)->Arg(1000)->Arg(10000);

void bm_bootstrap_curve(benchmark::State& state) {
  Rng rng(2);
  std::map<std::string, std::vector<double>> samples;
  std::map<std::string, double> gold;
  for (int i = 0; i < 300; ++i) {
    const std::string id = "x" + std::to_string(i);
    gold[id] = rng.uniform01();
    for (int k = 0; k < 20; ++k) samples[id].push_back(gold[id] + rng.normal(0.0, 0.15));
  }
  BootstrapOptions options;
  options.resamples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_k_curve(samples, CurveMetric::mae, gold, options));
}
BENCHMARK(bm_bootstrap_curve)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_fomaml_step(benchmark::State& state) {
  ToyTaskSampler sampler(ToyKind::sine_regression, 3, 40);
  Rng rng(4);
  ParamVector theta = sampler.initial_params(rng);
  MetaConfig config = demo_meta_defaults();
  config.optimizer = OptimizerKind::sgd;
  for (auto _ : state) {
    const MetaTask task = sampler.next();
    theta = fomaml_step(theta, task, config);
  }
}
BENCHMARK(bm_fomaml_step);

}  // namespace
BENCHMARK_MAIN();
