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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexcomp/corpus.hpp"
#include "lexcomp/estimator.hpp"
#include "lexcomp/finetune_prep.hpp"
#include "lexcomp/fomaml.hpp"
#include "lexcomp/gateway.hpp"
#include "lexcomp/journal.hpp"
#include "lexcomp/metrics.hpp"
#include "lexcomp/promptkit.hpp"
#include "lexcomp/report.hpp"
#include "lexcomp/toy_tasks.hpp"

namespace lexcomp {

// Full parameter set of an evaluation run. Everything that can change the
// outputs enters the fingerprint.
struct RunConfig {
  Task task = Task::cwi;
  Language language = Language::en;
  Regime regime = Regime::zero_shot;
  bool cot = true;
  Phase phase = Phase::inference;

  std::filesystem::path dataset;        // examples to evaluate
  std::string columns;                  // preset name or .conf path; empty picks the task default
  Domain domain = Domain::news;         // CWI 2018 preset domain
  LcpTask lcp_task = LcpTask::single;
  std::size_t max_examples = 0;         // 0 = all

  // Few-shot source: a shipped set name, a JSON path, or "sample" to draw
  // from `train` with select_fewshot_*. Empty picks the shipped set for
  // (task, language, domain).
  std::string exemplars;
  std::filesystem::path train;
  std::optional<std::filesystem::path> prompts_dir;  // default: shipped catalog

  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  GenerationParams params;
  ExtendedParams extended = ExtendedParams::automatic;
  std::size_t k = 0;  // samples per example; 0 = 1 for CWI, 20 for LCP
  std::size_t limit = 8;
  std::uint64_t seed = 0;
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
  std::size_t max_regenerations = 2;
  std::size_t histogram_bins = 10;

  std::filesystem::path output_dir = "runs";
  std::string run_name;  // empty: <task>-<language>-<regime>[-cot]-<fingerprint prefix>

  std::size_t effective_k() const { return k != 0 ? k : (task == Task::cwi ? 1 : 20); }
  // Throws ConfigError.
  void validate() const;
};

// Canonical "key=value" lines for every output-relevant field.
std::vector<std::pair<std::string, std::string>> run_parameters(const RunConfig& config);

// 16 hex digits over the parameters and the evaluated examples.
std::string run_fingerprint(const RunConfig& config, const Partition& examples);

std::string run_config_json(const RunConfig& config);
RunConfig parse_run_config_json(const std::string& json);

// Loads the dataset named by the config (one partition), applying max_examples.
Partition load_run_examples(const RunConfig& config);

// Exemplars for a few-shot config; empty for zero-shot.
std::vector<Exemplar> resolve_exemplars(const RunConfig& config);

// examples.jsonl: one Example per line.
std::string examples_to_jsonl(const Partition& examples);
Partition examples_from_jsonl(const std::string& content);

// Files of a run directory.
struct RunDir {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "run.json"; }
  std::filesystem::path examples() const { return root / "examples.jsonl"; }
  std::filesystem::path journal() const { return root / "journal.jsonl"; }
  std::filesystem::path report_md() const { return root / "report.md"; }
  std::filesystem::path report_csv() const { return root / "report.csv"; }
  std::filesystem::path predictions_csv() const { return root / "predictions.csv"; }
  std::filesystem::path confusion_csv() const { return root / "confusion.csv"; }
  std::filesystem::path histogram_csv() const { return root / "histogram.csv"; }
};

// Parses every journaled response of the run with the parser for its phase.
struct ParsedSample {
  std::size_t sample_index = 0;
  ParsedJudgment judgment;
};
std::map<std::string, std::vector<ParsedSample>> parse_journal(const RunConfig& config,
                                                               const std::vector<JournalRecord>& records);

// Computes the report from journaled responses alone; no network access.
EvaluationReport evaluate_journal(const RunConfig& config, const Partition& examples,
                                  const std::vector<JournalRecord>& journal);

void write_report_files(const RunDir& dir, const EvaluationReport& report);

struct EvaluateOutcome {
  RunDir dir;
  BatchSummary batch;
  EvaluationReport report;
};

// load -> exemplars -> assemble -> run_batch -> parse -> estimate -> metrics
// -> report. Re-running an interrupted configuration resumes its journal.
EvaluateOutcome run_evaluation(const RunConfig& config, const std::atomic<bool>* cancel = nullptr,
                               const std::function<void(const JournalRecord&)>& progress = {});

// Recomputes and rewrites the report of an existing run directory.
EvaluationReport replay_run(const std::filesystem::path& run_dir, bool write_files = true);

// Per-example numeric samples of an LCP run, in sample order, and gold.
struct RunSamples {
  std::map<std::string, std::vector<double>> samples;
  std::map<std::string, double> gold;
};
RunSamples lcp_samples(const std::filesystem::path& run_dir);

std::vector<CurvePoint> bootstrap_run(const std::filesystem::path& run_dir, CurveMetric metric,
                                      const BootstrapOptions& options);

AuditResult audit_run(const std::filesystem::path& run_dir);

// Fine-tune export for one or more partitions.
struct PrepConfig {
  Task task = Task::lcp;
  Language language = Language::en;
  std::string columns;
  Domain domain = Domain::news;
  LcpTask lcp_task = LcpTask::single;
  std::size_t cap = 250;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> prompts_dir;
};
std::vector<FinetuneRecord> prepare_finetune(const PrepConfig& config, const std::filesystem::path& source);

// The toy meta-learning demo: trains on the sampler, then compares adapted
// query loss of the trained and a random initialization on held-out tasks.
// The defaults differ from MetaConfig's: alpha = 0.1 diverges on the 40-unit
// regressor, and single-task batches need a long, decaying outer schedule.
MetaConfig demo_meta_defaults();
struct DemoConfig {
  ToyKind kind = ToyKind::sine_regression;
  MetaConfig meta = demo_meta_defaults();
  std::uint64_t seed = 0;
  std::size_t hidden = 40;
  std::size_t eval_tasks = 100;
};
struct DemoResult {
  MetaTrainResult training;
  std::vector<double> trained_losses;  // adapted query loss per held-out task
  std::vector<double> random_losses;
  std::size_t wins = 0;                // tasks where trained < random
};
DemoResult run_fomaml_demo(const DemoConfig& config);

}  // namespace lexcomp
