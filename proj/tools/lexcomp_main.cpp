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

// lexcomp command-line tool.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error, 3 validation
// error, 4 network failure (including runs left with unanswered samples),
// 5 file-system error.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/pipeline.hpp"

namespace {

using namespace lexcomp;

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kValidation = 3, kNetwork = 4, kIo = 5 };

std::atomic<bool> g_cancel{false};

extern "C" void on_signal(int) { g_cancel = true; }

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

// "none" or empty clears an optional parameter.
template <typename T>
std::optional<T> optional_number(const std::string& text, const char* what) {
  if (text.empty() || text == "none") return std::nullopt;
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !in.eof()) throw ConfigError(std::string(what) + ": expected a number or 'none', got '" + text + "'");
  return value;
}

struct EvaluateArgs {
  std::string task = "cwi", language = "en", regime = "zero_shot", phase = "inference";
  bool cot = true;
  std::string dataset, columns, domain = "news", lcp_task = "single";
  std::size_t max_examples = 0;
  std::string exemplars, train, prompts_dir;
  std::string endpoint = RunConfig{}.endpoint_url;
  std::string api_key_env = "OPENAI_API_KEY";
  std::string model = GenerationParams{}.model;
  double temperature = GenerationParams{}.temperature;
  double top_p = GenerationParams{}.top_p;
  std::string top_k = "10";
  std::string repetition_penalty = "1.2";
  int max_tokens = GenerationParams{}.max_tokens;
  std::string extended = "auto";
  std::size_t k = 0, limit = 8;
  std::uint64_t seed = 0;
  long long timeout_ms = 120000;
  int retry_attempts = RetryPolicy{}.max_attempts;
  std::size_t max_regenerations = 2, histogram_bins = 10;
  std::string output_dir = "runs", run_name;

  RunConfig to_config() const {
    RunConfig c;
    c.task = parse_task(task);
    c.language = parse_language(language);
    c.regime = parse_regime(regime);
    c.cot = cot;
    c.phase = parse_phase(phase);
    c.dataset = dataset;
    c.columns = columns;
    c.domain = parse_domain(domain);
    c.lcp_task = parse_lcp_task(lcp_task);
    c.max_examples = max_examples;
    c.exemplars = exemplars;
    c.train = train;
    if (!prompts_dir.empty()) c.prompts_dir = prompts_dir;
    c.endpoint_url = endpoint;
    c.api_key_env = api_key_env;
    c.params.model = model;
    c.params.temperature = temperature;
    c.params.top_p = top_p;
    c.params.top_k = optional_number<int>(top_k, "top-k");
    c.params.repetition_penalty = optional_number<double>(repetition_penalty, "repetition-penalty");
    c.params.max_tokens = max_tokens;
    c.extended = parse_extended_params(extended);
    c.k = k;
    c.limit = limit;
    c.seed = seed;
    c.timeout = std::chrono::milliseconds(timeout_ms);
    c.retry.max_attempts = retry_attempts;
    c.max_regenerations = max_regenerations;
    c.histogram_bins = histogram_bins;
    c.output_dir = output_dir;
    c.run_name = run_name;
    return c;
  }
};

void print_headline(const EvaluationReport& r) {
  if (r.task == Task::cwi) {
    std::cout << "F1 " << (r.f1 ? format_fixed(*r.f1, 2) : "-") << "  Acc " << (r.accuracy ? format_fixed(*r.accuracy, 2) : "-");
  } else {
    std::cout << "P " << (r.pearson ? format_fixed(*r.pearson, 4) : "-") << "  MAE " << (r.mae ? format_fixed(*r.mae, 4) : "-");
  }
  std::cout << "  parse failures " << r.parse_failures << "/" << r.responses << "  cost $"
            << format_dollars(r.cost.picodollars) << '\n';
}

int cmd_evaluate(const EvaluateArgs& args, const std::string& replay) {
  if (!replay.empty()) {
    const EvaluationReport report = replay_run(replay);
    std::cout << "replayed " << replay << '\n';
    print_headline(report);
    return report.request_errors > 0 ? kNetwork : kOk;
  }
  const RunConfig config = args.to_config();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::size_t done = 0;
  const EvaluateOutcome out = run_evaluation(config, &g_cancel, [&done](const JournalRecord&) {
    if (++done % 100 == 0) std::cerr << done << " samples\n";
  });
  std::cout << "run directory " << out.dir.root.string() << '\n';
  std::cout << "requested " << out.batch.requested << ", skipped " << out.batch.skipped << ", errors "
            << out.batch.errors << '\n';
  print_headline(out.report);
  if (out.batch.cancelled) {
    std::cerr << "cancelled; rerun the same command to resume\n";
    return kOther;
  }
  if (out.report.request_errors > 0) {
    std::cerr << out.report.request_errors << " samples have no response; rerun the same command to resume\n";
    return kNetwork;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex word identification and lexical complexity prediction with LLMs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI or TOML file; keys go in a section named after the subcommand");
  app.set_version_flag("--version", "lexcomp 0.1.0");

  // evaluate
  EvaluateArgs ev;
  std::string replay;
  auto* evaluate = app.add_subcommand("evaluate", "Run or resume an evaluation and write its report");
  evaluate->add_option("--task", ev.task, "cwi or lcp")->capture_default_str();
  evaluate->add_option("--language", ev.language, "en, de or es")->capture_default_str();
  evaluate->add_option("--regime", ev.regime, "zero_shot or few_shot")->capture_default_str();
  evaluate->add_flag("--cot,!--no-cot", ev.cot, "Ask for a justification before the label");
  evaluate->add_option("--phase", ev.phase, "inference or finetune")->capture_default_str();
  evaluate->add_option("--dataset", ev.dataset, "TSV file with the examples to evaluate");
  evaluate->add_option("--columns", ev.columns, "Column preset (cwi2018, complex2021) or .conf file");
  evaluate->add_option("--domain", ev.domain, "CWI domain for presets and exemplars")->capture_default_str();
  evaluate->add_option("--lcp-task", ev.lcp_task, "single or multi")->capture_default_str();
  evaluate->add_option("--max-examples", ev.max_examples, "Evaluate only the first N examples (0 = all)");
  evaluate->add_option("--exemplars", ev.exemplars, "Shipped set name, JSON file, or 'sample'");
  evaluate->add_option("--train", ev.train, "Train TSV for --exemplars sample");
  evaluate->add_option("--prompts-dir", ev.prompts_dir, "Prompt catalog directory");
  evaluate->add_option("--endpoint", ev.endpoint, "Chat-completions URL")->capture_default_str();
  evaluate->add_option("--api-key-env", ev.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  evaluate->add_option("--model", ev.model)->capture_default_str();
  evaluate->add_option("--temperature", ev.temperature)->capture_default_str();
  evaluate->add_option("--top-p", ev.top_p)->capture_default_str();
  evaluate->add_option("--top-k", ev.top_k, "Integer or 'none'")->capture_default_str();
  evaluate->add_option("--repetition-penalty", ev.repetition_penalty, "Number or 'none'")->capture_default_str();
  evaluate->add_option("--max-tokens", ev.max_tokens)->capture_default_str();
  evaluate->add_option("--extended-params", ev.extended, "auto, always or never")->capture_default_str();
  evaluate->add_option("-k,--samples", ev.k, "Samples per example (0: 1 for CWI, 20 for LCP)");
  evaluate->add_option("--limit", ev.limit, "Concurrent requests")->capture_default_str();
  evaluate->add_option("--seed", ev.seed)->capture_default_str();
  evaluate->add_option("--timeout-ms", ev.timeout_ms)->capture_default_str();
  evaluate->add_option("--retry-attempts", ev.retry_attempts)->capture_default_str();
  evaluate->add_option("--max-regenerations", ev.max_regenerations)->capture_default_str();
  evaluate->add_option("--histogram-bins", ev.histogram_bins)->capture_default_str();
  evaluate->add_option("--output-dir", ev.output_dir)->capture_default_str();
  evaluate->add_option("--run-name", ev.run_name, "Run directory name (default: derived from the fingerprint)");
  evaluate->add_option("--replay", replay, "Recompute the report of an existing run directory, offline");

  // bootstrap-k
  std::string boot_run, boot_metric = "pearson", boot_output;
  BootstrapOptions boot;
  auto* bootstrap = app.add_subcommand("bootstrap-k", "Metric as a function of the number of samples K");
  bootstrap->add_option("--run", boot_run, "LCP run directory")->required();
  bootstrap->add_option("--metric", boot_metric, "pearson or mae")->capture_default_str();
  bootstrap->add_option("--resamples", boot.resamples, "0 uses each example's first k samples")
      ->capture_default_str();
  bootstrap->add_option("--seed", boot.seed)->capture_default_str();
  bootstrap->add_option("--k-max", boot.k_max, "0: smallest per-example sample count");
  bootstrap->add_option("--output", boot_output, "CSV path (default: <run>/bootstrap_<metric>.csv)");

  // audit
  std::string audit_dir;
  auto* audit = app.add_subcommand("audit", "Sentence and word echo error rates of a run");
  audit->add_option("--run", audit_dir, "Run directory")->required();

  // prep-finetune
  PrepConfig prep;
  std::string prep_task = "lcp", prep_language = "en", prep_domain = "news", prep_lcp_task = "single";
  std::string prep_source, prep_output, prep_prompts;
  auto* finetune = app.add_subcommand("prep-finetune", "Write a label-balanced fine-tuning JSONL file");
  finetune->add_option("--task", prep_task)->capture_default_str();
  finetune->add_option("--language", prep_language)->capture_default_str();
  finetune->add_option("--columns", prep.columns);
  finetune->add_option("--domain", prep_domain)->capture_default_str();
  finetune->add_option("--lcp-task", prep_lcp_task)->capture_default_str();
  finetune->add_option("--cap", prep.cap, "Examples to export")->capture_default_str();
  finetune->add_option("--seed", prep.seed)->capture_default_str();
  finetune->add_option("--prompts-dir", prep_prompts);
  finetune->add_option("--source", prep_source, "Train TSV")->required();
  finetune->add_option("--output", prep_output, "JSONL path")->required();

  // fomaml-demo
  DemoConfig demo;
  std::string demo_kind = "sine_regression", demo_optimizer = "adam", demo_output = "runs";
  auto* fomaml = app.add_subcommand("fomaml-demo", "First-order meta-learning on toy task families");
  fomaml->add_option("--kind", demo_kind, "sine_regression or logistic_2class")->capture_default_str();
  fomaml->add_option("--alpha", demo.meta.alpha, "Inner learning rate")->capture_default_str();
  fomaml->add_option("--beta", demo.meta.beta, "Outer learning rate")->capture_default_str();
  fomaml->add_option("--inner-steps", demo.meta.n)->capture_default_str();
  fomaml->add_option("--outer-steps", demo.meta.outer_steps)->capture_default_str();
  fomaml->add_option("--optimizer", demo_optimizer, "sgd or adam")->capture_default_str();
  fomaml->add_flag("--linear-decay,!--constant-rate", demo.meta.linear_decay, "Decay the outer rate to 0");
  fomaml->add_option("--plateau-window", demo.meta.plateau_window, "0 disables the plateau stop");
  fomaml->add_option("--plateau-tolerance", demo.meta.plateau_tolerance)->capture_default_str();
  fomaml->add_option("--hidden", demo.hidden, "Hidden units of the sine regressor")->capture_default_str();
  fomaml->add_option("--eval-tasks", demo.eval_tasks)->capture_default_str();
  fomaml->add_option("--seed", demo.seed)->capture_default_str();
  fomaml->add_option("--output-dir", demo_output)->capture_default_str();

  // report
  std::vector<std::string> report_runs;
  std::string report_output;
  auto* report = app.add_subcommand("report", "Rebuild reports from journals; several runs give a summary table");
  report->add_option("--run", report_runs, "Run directories")->required();
  report->add_option("--output", report_output, "Write the Markdown here instead of stdout");

  // split-summary
  std::string split_name, split_task = "cwi", split_language = "en", split_columns, split_domain = "news";
  std::string split_train, split_validation, split_test;
  auto* split = app.add_subcommand("split-summary", "Count the examples of each partition of a dataset");
  split->add_option("--name", split_name)->required();
  split->add_option("--task", split_task)->capture_default_str();
  split->add_option("--language", split_language)->capture_default_str();
  split->add_option("--columns", split_columns);
  split->add_option("--domain", split_domain)->capture_default_str();
  split->add_option("--train", split_train);
  split->add_option("--validation", split_validation);
  split->add_option("--test", split_test);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev, replay);

    if (*bootstrap) {
      const CurveMetric metric = parse_curve_metric(boot_metric);
      const auto curve = bootstrap_run(boot_run, metric, boot);
      const std::filesystem::path out = boot_output.empty()
                                            ? std::filesystem::path(boot_run) / ("bootstrap_" + boot_metric + ".csv")
                                            : std::filesystem::path(boot_output);
      write_text(out, curve_to_csv(curve));
      std::cout << curve_to_csv(curve);
      return kOk;
    }

    if (*audit) {
      const AuditResult a = audit_run(audit_dir);
      if (!a.audited) {
        std::cout << "no response echoed the sentence or word; nothing to audit\n";
        return kOk;
      }
      std::cout << "runs " << a.runs << "  audited responses " << a.audited_count << '\n';
      std::cout << "S " << format_fixed(a.sentence_error, 2) << " +- " << format_fixed(a.sentence_error_std, 2)
                << "  W " << format_fixed(a.word_error, 2) << " +- " << format_fixed(a.word_error_std, 2) << '\n';
      return kOk;
    }

    if (*finetune) {
      prep.task = parse_task(prep_task);
      prep.language = parse_language(prep_language);
      prep.domain = parse_domain(prep_domain);
      prep.lcp_task = parse_lcp_task(prep_lcp_task);
      if (!prep_prompts.empty()) prep.prompts_dir = prep_prompts;
      const auto records = prepare_finetune(prep, prep_source);
      emit_jsonl(records, prep_output);
      std::cout << "wrote " << records.size() << " records to " << prep_output << '\n';
      for (const auto& [answer, count] : answer_histogram(records)) std::cout << "  " << answer << ": " << count << '\n';
      return kOk;
    }

    if (*fomaml) {
      demo.kind = parse_toy_kind(demo_kind);
      demo.meta.optimizer = parse_optimizer(demo_optimizer);
      demo.meta.validate();
      const DemoResult result = run_fomaml_demo(demo);
      const std::filesystem::path dir =
          std::filesystem::path(demo_output) / ("fomaml-" + std::string(to_string(demo.kind)) + "-seed" +
                                                std::to_string(demo.seed));
      write_text(dir / "trace.csv", trace_to_csv(result.training.trace));
      nlohmann::ordered_json summary;
      summary["kind"] = to_string(demo.kind);
      summary["seed"] = demo.seed;
      summary["alpha"] = demo.meta.alpha;
      summary["beta"] = demo.meta.beta;
      summary["inner_steps"] = demo.meta.n;
      summary["outer_steps"] = demo.meta.outer_steps;
      summary["optimizer"] = to_string(demo.meta.optimizer);
      summary["linear_decay"] = demo.meta.linear_decay;
      summary["stop"] = to_string(result.training.stop);
      summary["steps_run"] = result.training.trace.size();
      summary["eval_tasks"] = demo.eval_tasks;
      summary["wins"] = result.wins;
      summary["trained_losses"] = result.trained_losses;
      summary["random_losses"] = result.random_losses;
      write_text(dir / "summary.json", summary.dump(2) + "\n");
      std::cout << "stop " << to_string(result.training.stop) << " after " << result.training.trace.size()
                << " steps; trained init wins on " << result.wins << "/" << demo.eval_tasks << " held-out tasks\n";
      std::cout << "wrote " << (dir / "trace.csv").string() << '\n';
      if (result.training.stop == StopReason::diverged) {
        std::cerr << result.training.message << '\n';
        return kOther;
      }
      return kOk;
    }

    if (*report) {
      std::vector<std::pair<std::string, EvaluationReport>> runs;
      bool gaps = false;
      for (const std::string& dir : report_runs) {
        runs.emplace_back(std::filesystem::path(dir).filename().string(), replay_run(dir));
        gaps = gaps || runs.back().second.request_errors > 0;
      }
      const std::string text =
          runs.size() == 1 ? render_markdown(runs.front().second) : render_summary_table(runs);
      if (report_output.empty()) std::cout << text;
      else write_text(report_output, text);
      return gaps ? kNetwork : kOk;
    }

    if (*split) {
      const Task task = parse_task(split_task);
      RunConfig base;
      base.task = task;
      base.language = parse_language(split_language);
      base.columns = split_columns;
      base.domain = parse_domain(split_domain);
      auto load = [&base](const std::string& path) {
        if (path.empty()) return Partition{};
        RunConfig c = base;
        c.dataset = path;
        return load_run_examples(c);
      };
      DataSplit s;
      s.name = split_name;
      s.train = load(split_train);
      s.validation = load(split_validation);
      s.test = load(split_test);
      std::cout << split_summary_json(s) << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const NetworkError& e) {
    std::cerr << "network error: " << e.what() << '\n';
    return kNetwork;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
