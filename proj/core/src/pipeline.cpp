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

#include "lexcomp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/estimator.hpp"
#include "lexcomp/random.hpp"

namespace lexcomp {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

// Shortest round-trip text for a double.
std::string num(double v) { return nlohmann::json(v).dump(); }

ColumnMap resolve_columns(const std::string& spec, Task task, Domain domain) {
  if (spec.empty()) return task == Task::cwi ? ColumnMap::cwi2018(domain) : ColumnMap::complex2021();
  if (std::filesystem::is_regular_file(spec)) return ColumnMap::from_config(KeyValueConfig::load(spec));
  if (spec == "cwi2018") return ColumnMap::cwi2018(domain);
  return ColumnMap::preset(spec);
}

Partition load_partition(const std::filesystem::path& path, Task task, Language language, LcpTask lcp_task,
                         const std::string& columns, Domain domain) {
  const ColumnMap map = resolve_columns(columns, task, domain);
  return task == Task::cwi ? load_cwi_tsv(path, language, map) : load_lcp_tsv(path, lcp_task, map);
}

PromptCatalog catalog_for(const std::optional<std::filesystem::path>& dir) {
  return dir ? PromptCatalog::load(*dir) : PromptCatalog::shipped();
}

std::string default_exemplar_set(const RunConfig& c) {
  if (c.task == Task::lcp) return c.lcp_task == LcpTask::single ? "lcp-single" : "lcp-multi";
  switch (c.language) {
    case Language::de: return "cwi-de";
    case Language::es: return "cwi-es";
    case Language::en: break;
  }
  switch (c.domain) {
    case Domain::news: return "cwi-en-news";
    case Domain::wikinews: return "cwi-en-wikinews";
    case Domain::wikipedia: return "cwi-en-wikipedia";
    default: break;
  }
  throw ConfigError("no shipped English CWI exemplars for domain " + std::string(to_string(c.domain)) +
                    "; pass an exemplar file or 'sample'");
}

bool gold_label(const Example& ex) {
  if (ex.gold_binary) return *ex.gold_binary;
  return ex.gold_probability.value_or(0.0) > 0.0;
}

ParsedJudgment parse_response(const RunConfig& config, const std::string& text) {
  return config.phase == Phase::finetune ? extract_bare(text, config.task) : extract(text, config.task);
}

RunConfig load_config_file(const RunDir& dir) { return parse_run_config_json(read_file(dir.config())); }

Partition load_examples_file(const RunDir& dir) { return examples_from_jsonl(read_file(dir.examples())); }

}  // namespace

void RunConfig::validate() const {
  if (task == Task::lcp && language != Language::en) throw ConfigError("LCP runs are English only");
  if (regime == Regime::zero_shot && !exemplars.empty()) {
    throw ConfigError("exemplars given for a zero-shot run; use --regime few_shot");
  }
  if (effective_k() < 1) throw ConfigError("K must be >= 1");
  if (limit < 1) throw ConfigError("concurrency limit must be >= 1");
  if (histogram_bins < 5) throw ConfigError("histogram needs at least 5 bins");
  if (retry.max_attempts < 1) throw ConfigError("retry attempts must be >= 1");
  if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
  params.validate();
}

std::vector<std::pair<std::string, std::string>> run_parameters(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> p;
  p.emplace_back("task", std::string(to_string(c.task)));
  p.emplace_back("language", std::string(to_string(c.language)));
  p.emplace_back("regime", std::string(to_string(c.regime)));
  p.emplace_back("cot", c.cot ? "true" : "false");
  p.emplace_back("phase", std::string(to_string(c.phase)));
  p.emplace_back("dataset", c.dataset.filename().string());
  p.emplace_back("columns", c.columns.empty() ? "default" : std::filesystem::path(c.columns).filename().string());
  p.emplace_back("domain", std::string(to_string(c.domain)));
  p.emplace_back("lcp_task", std::string(to_string(c.lcp_task)));
  p.emplace_back("max_examples", std::to_string(c.max_examples));
  if (c.regime == Regime::few_shot) {
    p.emplace_back("exemplars", c.exemplars.empty() ? default_exemplar_set(c) : c.exemplars);
  }
  p.emplace_back("model", c.params.model);
  p.emplace_back("endpoint", c.endpoint_url);
  p.emplace_back("temperature", num(c.params.temperature));
  p.emplace_back("top_p", num(c.params.top_p));
  p.emplace_back("top_k", c.params.top_k ? std::to_string(*c.params.top_k) : "none");
  p.emplace_back("repetition_penalty", c.params.repetition_penalty ? num(*c.params.repetition_penalty) : "none");
  p.emplace_back("max_tokens", std::to_string(c.params.max_tokens));
  p.emplace_back("extended_params", std::string(to_string(c.extended)));
  p.emplace_back("k", std::to_string(c.effective_k()));
  p.emplace_back("seed", std::to_string(c.seed));
  p.emplace_back("max_regenerations", std::to_string(c.max_regenerations));
  p.emplace_back("histogram_bins", std::to_string(c.histogram_bins));
  p.emplace_back("timeout_ms", std::to_string(c.timeout.count()));
  p.emplace_back("retry_attempts", std::to_string(c.retry.max_attempts));
  return p;
}

std::string run_fingerprint(const RunConfig& config, const Partition& examples) {
  std::string canonical;
  for (const auto& [k, v] : run_parameters(config)) canonical += k + "=" + v + "\n";
  canonical += examples_to_jsonl(examples);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

std::string run_config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["task"] = to_string(c.task);
  j["language"] = to_string(c.language);
  j["regime"] = to_string(c.regime);
  j["cot"] = c.cot;
  j["phase"] = to_string(c.phase);
  j["dataset"] = c.dataset.string();
  j["columns"] = c.columns;
  j["domain"] = to_string(c.domain);
  j["lcp_task"] = to_string(c.lcp_task);
  j["max_examples"] = c.max_examples;
  j["exemplars"] = c.exemplars;
  j["train"] = c.train.string();
  j["prompts_dir"] = c.prompts_dir ? nlohmann::ordered_json(c.prompts_dir->string()) : nlohmann::ordered_json();
  j["endpoint_url"] = c.endpoint_url;
  j["api_key_env"] = c.api_key_env;
  j["model"] = c.params.model;
  j["temperature"] = c.params.temperature;
  j["top_p"] = c.params.top_p;
  j["top_k"] = c.params.top_k ? nlohmann::ordered_json(*c.params.top_k) : nlohmann::ordered_json();
  j["repetition_penalty"] =
      c.params.repetition_penalty ? nlohmann::ordered_json(*c.params.repetition_penalty) : nlohmann::ordered_json();
  j["max_tokens"] = c.params.max_tokens;
  j["extended_params"] = to_string(c.extended);
  j["k"] = c.k;
  j["limit"] = c.limit;
  j["seed"] = c.seed;
  j["timeout_ms"] = c.timeout.count();
  j["retry_attempts"] = c.retry.max_attempts;
  j["retry_initial_backoff_ms"] = c.retry.initial_backoff.count();
  j["retry_multiplier"] = c.retry.multiplier;
  j["retry_max_backoff_ms"] = c.retry.max_backoff.count();
  j["max_regenerations"] = c.max_regenerations;
  j["histogram_bins"] = c.histogram_bins;
  j["output_dir"] = c.output_dir.string();
  j["run_name"] = c.run_name;
  return j.dump(2) + "\n";
}

RunConfig parse_run_config_json(const std::string& json) {
  const nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("run.json is not a JSON object");
  RunConfig c;
  try {
    c.task = parse_task(j.at("task").get<std::string>());
    c.language = parse_language(j.at("language").get<std::string>());
    c.regime = parse_regime(j.at("regime").get<std::string>());
    c.cot = j.at("cot").get<bool>();
    c.phase = parse_phase(j.at("phase").get<std::string>());
    c.dataset = j.value("dataset", "");
    c.columns = j.value("columns", "");
    c.domain = parse_domain(j.value("domain", "other"));
    c.lcp_task = parse_lcp_task(j.value("lcp_task", "single"));
    c.max_examples = j.value("max_examples", std::size_t{0});
    c.exemplars = j.value("exemplars", "");
    c.train = j.value("train", "");
    if (j.contains("prompts_dir") && j["prompts_dir"].is_string()) c.prompts_dir = j["prompts_dir"].get<std::string>();
    c.endpoint_url = j.value("endpoint_url", c.endpoint_url);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.params.model = j.at("model").get<std::string>();
    c.params.temperature = j.at("temperature").get<double>();
    c.params.top_p = j.at("top_p").get<double>();
    c.params.top_k = j.at("top_k").is_null() ? std::nullopt : std::optional<int>(j.at("top_k").get<int>());
    c.params.repetition_penalty = j.at("repetition_penalty").is_null()
                                      ? std::nullopt
                                      : std::optional<double>(j.at("repetition_penalty").get<double>());
    c.params.max_tokens = j.at("max_tokens").get<int>();
    c.extended = parse_extended_params(j.value("extended_params", "auto"));
    c.k = j.at("k").get<std::size_t>();
    c.limit = j.value("limit", c.limit);
    c.seed = j.at("seed").get<std::uint64_t>();
    c.timeout = std::chrono::milliseconds(j.value("timeout_ms", std::int64_t{120000}));
    c.retry.max_attempts = j.value("retry_attempts", c.retry.max_attempts);
    c.retry.initial_backoff = std::chrono::milliseconds(j.value("retry_initial_backoff_ms", std::int64_t{1000}));
    c.retry.multiplier = j.value("retry_multiplier", c.retry.multiplier);
    c.retry.max_backoff = std::chrono::milliseconds(j.value("retry_max_backoff_ms", std::int64_t{30000}));
    c.max_regenerations = j.value("max_regenerations", c.max_regenerations);
    c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
    c.output_dir = j.value("output_dir", "runs");
    c.run_name = j.value("run_name", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run.json: ") + e.what());
  }
  return c;
}

Partition load_run_examples(const RunConfig& config) {
  if (config.dataset.empty()) throw ConfigError("no dataset given");
  Partition examples =
      load_partition(config.dataset, config.task, config.language, config.lcp_task, config.columns, config.domain);
  if (config.max_examples != 0 && examples.size() > config.max_examples) examples.resize(config.max_examples);
  validate_partition(examples, true);
  return examples;
}

std::vector<Exemplar> resolve_exemplars(const RunConfig& config) {
  if (config.regime == Regime::zero_shot) return {};
  const std::string spec = config.exemplars.empty() ? default_exemplar_set(config) : config.exemplars;
  if (spec == "sample") {
    if (config.cot) {
      throw ConfigError("chain-of-thought few-shot needs exemplars with proofs; sampled train rows have none. "
                        "Use a shipped set or an exemplar file");
    }
    if (config.train.empty()) throw ConfigError("'sample' exemplars need a train file");
    const Partition train =
        load_partition(config.train, config.task, config.language, config.lcp_task, config.columns, config.domain);
    const std::vector<Example> picked =
        config.task == Task::cwi ? select_fewshot_cwi(train, config.seed) : select_fewshot_lcp(train, config.seed);
    return exemplars_from_examples(picked, config.task);
  }
  const ExemplarSet set = (spec.ends_with(".json") || std::filesystem::is_regular_file(spec))
                              ? load_exemplar_set(spec)
                              : shipped_exemplar_set(spec);
  if (set.task != config.task || set.language != config.language) {
    throw ConfigError("exemplar set '" + spec + "' is for " + std::string(to_string(set.task)) + "/" +
                      std::string(to_string(set.language)));
  }
  return set.exemplars;
}

std::string examples_to_jsonl(const Partition& examples) {
  std::string out;
  for (const Example& ex : examples) {
    nlohmann::ordered_json j;
    j["id"] = ex.id;
    j["sentence"] = ex.sentence;
    j["target"] = ex.target;
    j["span"] = ex.span ? nlohmann::ordered_json::array({ex.span->begin, ex.span->end}) : nlohmann::ordered_json();
    j["language"] = to_string(ex.language);
    j["domain"] = to_string(ex.domain);
    j["gold_binary"] = ex.gold_binary ? nlohmann::ordered_json(*ex.gold_binary) : nlohmann::ordered_json();
    j["gold_probability"] =
        ex.gold_probability ? nlohmann::ordered_json(*ex.gold_probability) : nlohmann::ordered_json();
    out += j.dump();
    out += '\n';
  }
  return out;
}

Partition examples_from_jsonl(const std::string& content) {
  Partition out;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError("examples line " + std::to_string(line_no) + " is not JSON");
    try {
      Example ex;
      ex.id = j.at("id").get<std::string>();
      ex.sentence = j.at("sentence").get<std::string>();
      ex.target = j.at("target").get<std::string>();
      if (j.contains("span") && j["span"].is_array()) {
        ex.span = TextSpan{j["span"][0].get<std::size_t>(), j["span"][1].get<std::size_t>()};
      }
      ex.language = parse_language(j.at("language").get<std::string>());
      ex.domain = parse_domain(j.value("domain", "other"));
      if (j.contains("gold_binary") && !j["gold_binary"].is_null()) ex.gold_binary = j["gold_binary"].get<bool>();
      if (j.contains("gold_probability") && !j["gold_probability"].is_null()) {
        ex.gold_probability = j["gold_probability"].get<double>();
      }
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("examples line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, std::vector<ParsedSample>> parse_journal(const RunConfig& config,
                                                               const std::vector<JournalRecord>& records) {
  std::map<std::string, std::vector<ParsedSample>> out;
  const std::size_t k = config.effective_k();
  for (const JournalRecord& r : latest_records(records)) {
    if (!r.completed() || r.sample_index >= k) continue;
    out[r.example_id].push_back({r.sample_index, parse_response(config, r.text)});
  }
  return out;
}

EvaluationReport evaluate_journal(const RunConfig& config, const Partition& examples,
                                  const std::vector<JournalRecord>& journal) {
  EvaluationReport report;
  report.task = config.task;
  report.fingerprint = run_fingerprint(config, examples);
  report.parameters = run_parameters(config);
  const std::size_t k = config.effective_k();
  report.examples = examples.size();
  report.samples_expected = examples.size() * k;

  const auto parsed = parse_journal(config, journal);
  std::map<std::string, bool> bin_preds, bin_gold;
  std::map<std::string, double> reg_preds, reg_gold;
  std::vector<AuditItem> audit_items;
  double spread_sum = 0.0;

  for (const Example& ex : examples) {
    const auto it = parsed.find(ex.id);
    std::vector<LikertLabel> labels;
    std::size_t yes = 0, no = 0;
    if (it != parsed.end()) {
      for (const ParsedSample& s : it->second) {
        ++report.responses;
        if (!s.judgment.parsed()) {
          ++report.parse_failures;
          continue;
        }
        ++report.parsed;
        if (s.judgment.status == ParseStatus::recovered) ++report.recovered;
        audit_items.push_back({s.judgment, ex, s.sample_index});
        if (config.task == Task::cwi) (*s.judgment.binary_label ? yes : no)++;
        else labels.push_back(*s.judgment.likert_label);
      }
    }
    const std::size_t used = config.task == Task::cwi ? yes + no : labels.size();
    if (used == 0) {
      report.coverage_gaps.push_back(ex.id);
      continue;
    }
    ++report.scored_examples;
    PredictionRow row;
    row.id = ex.id;
    row.k_used = used;
    if (config.task == Task::cwi) {
      // Majority vote; ties go to "not complex".
      const bool pred = yes > no;
      bin_preds[ex.id] = pred;
      bin_gold[ex.id] = gold_label(ex);
      row.gold = gold_label(ex) ? 1.0 : 0.0;
      row.prediction = pred ? 1.0 : 0.0;
      const double share = static_cast<double>(yes) / static_cast<double>(used);
      row.spread = std::sqrt(share * (1.0 - share));
    } else {
      ScoreEstimate est = estimate(labels);
      reg_preds[ex.id] = est.mean;
      reg_gold[ex.id] = ex.gold_probability.value_or(0.0);
      row.gold = reg_gold[ex.id];
      row.prediction = est.mean;
      row.spread = est.std;
      spread_sum += est.std;
    }
    report.predictions.push_back(std::move(row));
  }
  report.request_errors = report.samples_expected - report.responses;
  report.parse_failure_rate =
      report.responses == 0 ? 0.0
                            : 100.0 * static_cast<double>(report.parse_failures) / static_cast<double>(report.responses);

  if (config.task == Task::cwi) {
    if (!bin_preds.empty()) {
      const BinaryMetrics m = binary_metrics(bin_preds, bin_gold);
      report.f1 = 100.0 * m.f1;
      report.accuracy = 100.0 * m.accuracy;
      report.confusion = m.confusion;
    }
    report.hallucination = hallucination_audit(audit_items, AuditMode::single_run);
  } else {
    if (reg_preds.size() >= 2) {
      const RegressionMetrics m = regression_metrics(reg_preds, reg_gold);
      report.pearson = m.pearson;
      report.pearson_undefined = m.pearson_undefined;
      report.mae = m.mae;
    } else if (!reg_preds.empty()) {
      report.mae = std::abs(reg_preds.begin()->second - reg_gold.begin()->second);
      report.pearson_undefined = "fewer than two scored examples";
    }
    if (!reg_preds.empty()) {
      report.histogram = distribution_histogram(reg_preds, reg_gold, config.histogram_bins);
      report.mean_spread = spread_sum / static_cast<double>(reg_preds.size());
    }
    report.hallucination = hallucination_audit(audit_items, AuditMode::per_run_lcp);
  }

  CostLedger ledger;
  for (const JournalRecord& r : journal) {
    const std::uint64_t calls = r.regenerations + (r.completed() ? 1 : 0);
    report.cost.calls += calls;
    report.cost.input_tokens += r.input_tokens;
    report.cost.output_tokens += r.output_tokens;
    if (calls == 0) continue;
    const std::string model = r.model.empty() ? config.params.model : r.model;
    if (const auto price = ledger.price_for(model)) {
      report.cost.picodollars += CostLedger::cost_picodollars(*price, {r.input_tokens, r.output_tokens});
    } else {
      report.cost.unpriced_models.insert(model);
    }
  }
  return report;
}

void write_report_files(const RunDir& dir, const EvaluationReport& report) {
  write_file(dir.report_md(), render_markdown(report));
  write_file(dir.report_csv(), render_csv(report));
  write_file(dir.predictions_csv(), render_predictions_csv(report));
  if (report.confusion) write_file(dir.confusion_csv(), confusion_to_csv(*report.confusion));
  if (report.histogram) write_file(dir.histogram_csv(), histogram_to_csv(*report.histogram));
}

EvaluateOutcome run_evaluation(const RunConfig& config, const std::atomic<bool>* cancel,
                               const std::function<void(const JournalRecord&)>& progress) {
  config.validate();
  const Partition examples = load_run_examples(config);
  if (examples.empty()) throw ValidationError("dataset " + config.dataset.string() + " has no examples");
  const std::vector<Exemplar> exemplars = resolve_exemplars(config);
  const std::string fingerprint = run_fingerprint(config, examples);

  std::string name = config.run_name;
  if (name.empty()) {
    name = std::string(to_string(config.task)) + "-" + std::string(to_string(config.language)) + "-" +
           std::string(to_string(config.regime)) + (config.cot ? "-cot" : "") + "-" + fingerprint.substr(0, 8);
  }
  EvaluateOutcome outcome;
  outcome.dir.root = config.output_dir / name;
  const RunDir& dir = outcome.dir;
  std::filesystem::create_directories(dir.root);

  if (std::filesystem::exists(dir.config())) {
    const RunConfig previous = load_config_file(dir);
    const Partition previous_examples = load_examples_file(dir);
    if (run_fingerprint(previous, previous_examples) != fingerprint) {
      throw ConfigError("run directory " + dir.root.string() + " holds a different configuration");
    }
  }
  write_file(dir.config(), run_config_json(config));
  write_file(dir.examples(), examples_to_jsonl(examples));

  const PromptCatalog catalog = catalog_for(config.prompts_dir);
  PromptConfig prompt;
  prompt.task = config.task;
  prompt.language = config.language;
  prompt.regime = config.regime;
  prompt.cot = config.cot;
  prompt.phase = config.phase;
  prompt.exemplars = exemplars;
  prompt.shuffle_seed = config.seed;

  std::vector<BatchJob> jobs;
  jobs.reserve(examples.size());
  for (const Example& ex : examples) jobs.push_back({ex.id, assemble(catalog, prompt, ex), config.effective_k()});

  EndpointConfig endpoint;
  endpoint.url = config.endpoint_url;
  endpoint.api_key_env = config.api_key_env;
  endpoint.timeout = config.timeout;
  endpoint.retry = config.retry;
  endpoint.extended = config.extended;
  CostLedger ledger;
  ChatClient client(endpoint, &ledger);

  BatchOptions options;
  options.limit = config.limit;
  options.seed = config.seed;
  options.max_regenerations = config.max_regenerations;
  options.accept = [&config](const RawResponse& r) { return parse_response(config, r.text).parsed(); };
  options.cancel = cancel;
  options.on_record = progress;

  Journal journal(dir.journal());
  outcome.batch = run_batch(client, jobs, config.params, journal, options);
  outcome.report = evaluate_journal(config, examples, journal.records());
  write_report_files(dir, outcome.report);
  return outcome;
}

EvaluationReport replay_run(const std::filesystem::path& run_dir, bool write_files) {
  const RunDir dir{run_dir};
  const RunConfig config = load_config_file(dir);
  const Partition examples = load_examples_file(dir);
  const std::vector<JournalRecord> journal =
      std::filesystem::exists(dir.journal()) ? read_journal(dir.journal()) : std::vector<JournalRecord>{};
  EvaluationReport report = evaluate_journal(config, examples, journal);
  if (write_files) write_report_files(dir, report);
  return report;
}

RunSamples lcp_samples(const std::filesystem::path& run_dir) {
  const RunDir dir{run_dir};
  const RunConfig config = load_config_file(dir);
  if (config.task != Task::lcp) throw ConfigError("bootstrap needs an LCP run");
  const Partition examples = load_examples_file(dir);
  const auto parsed = parse_journal(config, read_journal(dir.journal()));
  RunSamples out;
  for (const Example& ex : examples) {
    std::vector<double>& values = out.samples[ex.id];
    if (const auto it = parsed.find(ex.id); it != parsed.end()) {
      std::vector<ParsedSample> ordered = it->second;
      std::sort(ordered.begin(), ordered.end(),
                [](const ParsedSample& a, const ParsedSample& b) { return a.sample_index < b.sample_index; });
      for (const ParsedSample& s : ordered) {
        if (s.judgment.parsed()) values.push_back(likert_to_numeric(*s.judgment.likert_label));
      }
    }
    if (ex.gold_probability) out.gold[ex.id] = *ex.gold_probability;
  }
  return out;
}

std::vector<CurvePoint> bootstrap_run(const std::filesystem::path& run_dir, CurveMetric metric,
                                      const BootstrapOptions& options) {
  const RunSamples s = lcp_samples(run_dir);
  std::size_t smallest = SIZE_MAX;
  for (const auto& [id, values] : s.samples) smallest = std::min(smallest, values.size());
  if (smallest < 2) {
    std::ostringstream msg;
    msg << "bootstrap needs at least 2 parsed samples per example; counts:";
    for (const auto& [id, values] : s.samples) {
      if (values.size() < 2) msg << ' ' << id << '=' << values.size();
    }
    throw ValidationError(msg.str());
  }
  return bootstrap_k_curve(s.samples, metric, s.gold, options);
}

AuditResult audit_run(const std::filesystem::path& run_dir) { return replay_run(run_dir, false).hallucination; }

std::vector<FinetuneRecord> prepare_finetune(const PrepConfig& config, const std::filesystem::path& source) {
  const Partition train =
      load_partition(source, config.task, config.language, config.lcp_task, config.columns, config.domain);
  return build_finetune_set(catalog_for(config.prompts_dir), train, config.task, config.language, config.cap,
                            config.seed);
}

MetaConfig demo_meta_defaults() {
  MetaConfig meta;
  meta.alpha = 0.02;
  meta.beta = 0.001;
  meta.n = 5;
  meta.outer_steps = 300000;
  meta.optimizer = OptimizerKind::adam;
  meta.linear_decay = true;
  return meta;
}

DemoResult run_fomaml_demo(const DemoConfig& config) {
  ToyTaskSampler train(config.kind, config.seed, config.hidden);
  DemoResult result;
  result.training = meta_train(train, config.meta, config.seed);

  ToyTaskSampler held_out(config.kind, mix_seed(config.seed, 1), config.hidden);
  Rng init_rng(mix_seed(config.seed, 2));
  for (std::size_t t = 0; t < config.eval_tasks; ++t) {
    const MetaTask task = held_out.next();
    // A fresh random initialization per task, so one lucky draw cannot decide the comparison.
    const ParamVector random_init = held_out.initial_params(init_rng);
    const ParamVector trained = inner_adapt(result.training.theta, task, config.meta.alpha, config.meta.n);
    const ParamVector baseline = inner_adapt(random_init, task, config.meta.alpha, config.meta.n);
    result.trained_losses.push_back(task.loss(trained, task.query).loss);
    result.random_losses.push_back(task.loss(baseline, task.query).loss);
    if (result.trained_losses.back() < result.random_losses.back()) ++result.wins;
  }
  return result;
}

}  // namespace lexcomp
