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

#include "lexcomp/gateway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <regex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/random.hpp"

namespace lexcomp {

void GenerationParams::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must lie in (0, 1]");
  if (top_k && *top_k < 1) throw ConfigError("top_k must be a positive integer");
  if (repetition_penalty && !(*repetition_penalty >= 1.0)) throw ConfigError("repetition_penalty must be >= 1");
  if (max_tokens < 1) throw ConfigError("max_tokens must be positive");
  if (model.empty()) throw ConfigError("model name is empty");
}

ExtendedParams parse_extended_params(std::string_view name) {
  if (name == "auto" || name == "automatic") return ExtendedParams::automatic;
  if (name == "always") return ExtendedParams::always;
  if (name == "never") return ExtendedParams::never;
  throw ConfigError("unknown extended-params mode '" + std::string(name) + "' (expected auto, always or never)");
}

std::string_view to_string(ExtendedParams mode) {
  switch (mode) {
    case ExtendedParams::automatic: return "auto";
    case ExtendedParams::always: return "always";
    case ExtendedParams::never: return "never";
  }
  return "auto";
}

std::chrono::milliseconds RetryPolicy::backoff(int attempt) const {
  const double base = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, std::max(0, attempt - 1));
  const double capped = std::min(base, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

// --- cost ledger -------------------------------------------------------------

CostLedger::CostLedger() : prices_(default_price_table()) {}

CostLedger::CostLedger(std::map<std::string, Price> prices) : prices_(std::move(prices)) {}

std::map<std::string, Price> CostLedger::default_price_table() {
  return {
      {"gpt-3.5-turbo", {0.0005, 0.0015}},
      {"ft:gpt-3.5-turbo", {0.003, 0.006}},
      {"gpt-4o", {0.005, 0.015}},
  };
}

void CostLedger::set_price(const std::string& model_prefix, Price price) {
  std::lock_guard lock(mutex_);
  prices_[model_prefix] = price;
}

std::optional<Price> CostLedger::price_for(const std::string& model) const {
  std::lock_guard lock(mutex_);
  std::optional<Price> best;
  std::size_t best_len = 0;
  for (const auto& [prefix, price] : prices_) {
    if (model.compare(0, prefix.size(), prefix) == 0 && (!best || prefix.size() > best_len)) {
      best = price;
      best_len = prefix.size();
    }
  }
  return best;
}

std::int64_t CostLedger::cost_picodollars(const Price& price, const TokenUsage& usage) {
  // Dollars per 1k tokens -> picodollars per token is a factor of 1e9.
  const std::int64_t in_rate = std::llround(price.input_per_1k * 1e9);
  const std::int64_t out_rate = std::llround(price.output_per_1k * 1e9);
  return in_rate * static_cast<std::int64_t>(usage.input_tokens) +
         out_rate * static_cast<std::int64_t>(usage.output_tokens);
}

void CostLedger::record(const std::string& model, const TokenUsage& usage) {
  const std::optional<Price> price = price_for(model);
  std::lock_guard lock(mutex_);
  ++calls_;
  input_tokens_ += usage.input_tokens;
  output_tokens_ += usage.output_tokens;
  if (price) picodollars_ += cost_picodollars(*price, usage);
  else unpriced_.insert(model);
}

std::uint64_t CostLedger::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::uint64_t CostLedger::input_tokens() const {
  std::lock_guard lock(mutex_);
  return input_tokens_;
}

std::uint64_t CostLedger::output_tokens() const {
  std::lock_guard lock(mutex_);
  return output_tokens_;
}

std::int64_t CostLedger::accrued_picodollars() const {
  std::lock_guard lock(mutex_);
  return picodollars_;
}

double CostLedger::accrued_cost() const { return static_cast<double>(accrued_picodollars()) * 1e-12; }

std::set<std::string> CostLedger::unpriced_models() const {
  std::lock_guard lock(mutex_);
  return unpriced_;
}

// --- client ------------------------------------------------------------------

namespace {

bool is_openai_host(const std::string& origin) {
  return origin.find("://api.openai.com") != std::string::npos;
}

bool retryable(int status) { return status == 429 || (status >= 500 && status <= 599); }

std::string truncate(const std::string& s, std::size_t n = 500) {
  return s.size() <= n ? s : s.substr(0, n) + "...";
}

}  // namespace

ChatClient::ChatClient(EndpointConfig config, CostLedger* ledger, Sleeper sleeper)
    : config_(std::move(config)), ledger_(ledger), sleeper_(std::move(sleeper)) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, url_re)) {
    throw ConfigError("endpoint URL must look like http(s)://host[:port]/path, got '" + config_.url + "'");
  }
  origin_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/v1/chat/completions";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (origin_.rfind("https", 0) == 0) throw ConfigError("this build has no TLS support; use an http:// endpoint");
#endif
  if (config_.retry.max_attempts < 1) throw ConfigError("retry attempts must be >= 1");
  if (config_.api_key) {
    api_key_ = *config_.api_key;
  } else if (!config_.api_key_env.empty()) {
    if (const char* v = std::getenv(config_.api_key_env.c_str())) api_key_ = v;
  }
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

bool ChatClient::extended_params_active() const {
  switch (config_.extended) {
    case ExtendedParams::always: return true;
    case ExtendedParams::never: return false;
    case ExtendedParams::automatic: return !is_openai_host(origin_) && !extended_rejected_.load();
  }
  return false;
}

std::string ChatClient::request_body(const Chat& turns, const GenerationParams& params, bool extended,
                                     std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json body;
  body["model"] = params.model;
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const ChatTurn& turn : turns) {
    messages.push_back({{"role", to_string(turn.role)}, {"content", turn.content}});
  }
  body["messages"] = std::move(messages);
  body["temperature"] = params.temperature;
  body["top_p"] = params.top_p;
  body["max_tokens"] = params.max_tokens;
  if (extended && params.top_k) body["top_k"] = *params.top_k;
  if (extended && params.repetition_penalty) body["repetition_penalty"] = *params.repetition_penalty;
  // OpenAI-style seeds are signed 64-bit; keep the value in range.
  if (seed) body["seed"] = static_cast<std::int64_t>(*seed >> 1);
  return body.dump();
}

RawResponse parse_completion(const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw NetworkError("completion body is not JSON: " + truncate(body), 200);
  RawResponse out;
  try {
    const auto& choices = j.at("choices");
    if (!choices.is_array() || choices.empty()) throw NetworkError("completion has no choices", 200);
    const auto& message = choices.at(0).at("message");
    const auto content = message.find("content");
    if (content != message.end() && content->is_string()) out.text = content->get<std::string>();
    out.model = j.value("model", "");
    if (const auto usage = j.find("usage"); usage != j.end() && usage->is_object()) {
      out.usage.input_tokens = usage->value("prompt_tokens", std::uint64_t{0});
      out.usage.output_tokens = usage->value("completion_tokens", std::uint64_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(std::string("malformed completion: ") + e.what(), 200);
  }
  return out;
}

RawResponse ChatClient::send_chat(const Chat& turns, const GenerationParams& params,
                                  std::optional<std::uint64_t> seed) {
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::string last_error = "no attempt made";
  int last_status = 0;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    const bool extended = extended_params_active();
    const std::string body = request_body(turns, params, extended, seed);

    httplib::Client http(origin_);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
    http.set_connection_timeout(seconds.count(), micros.count());
    http.set_read_timeout(seconds.count(), micros.count());
    http.set_write_timeout(seconds.count(), micros.count());

    const auto start = std::chrono::steady_clock::now();
    httplib::Result res = http.Post(path_, headers, body, "application/json");
    const auto latency =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

    std::chrono::milliseconds wait = config_.retry.backoff(attempt);
    if (!res) {
      last_status = 0;
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 200) {
      RawResponse out = parse_completion(res->body);
      if (out.model.empty()) out.model = params.model;
      out.latency = latency;
      out.attempt = attempt;
      if (ledger_ != nullptr) ledger_->record(out.model, out.usage);
      return out;
    } else if ((res->status == 400 || res->status == 422) && extended &&
               config_.extended == ExtendedParams::automatic) {
      // The server refused top_k / repetition_penalty; resend without them.
      extended_rejected_ = true;
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status) + ": " + truncate(res->body);
      continue;
    } else if (retryable(res->status)) {
      last_status = res->status;
      last_error = "HTTP " + std::to_string(res->status) + ": " + truncate(res->body);
      if (res->has_header("Retry-After")) {
        const std::string value = res->get_header_value("Retry-After");
        char* end = nullptr;
        const double secs = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && secs > 0) {
          const auto hinted = std::chrono::milliseconds(static_cast<std::int64_t>(secs * 1000.0));
          wait = std::min(std::max(wait, hinted), config_.retry.max_backoff);
        }
      }
    } else {
      throw NetworkError("HTTP " + std::to_string(res->status) + ": " + truncate(res->body), res->status);
    }
    if (attempt < config_.retry.max_attempts) sleeper_(wait);
  }
  throw NetworkError("giving up after " + std::to_string(config_.retry.max_attempts) + " attempts; last error " +
                         last_error,
                     last_status);
}

// --- batch runner ------------------------------------------------------------

std::uint64_t request_seed(std::uint64_t run_seed, const std::string& example_id, std::size_t sample_index,
                           std::size_t regeneration) {
  return mix_seed(mix_seed(mix_seed(run_seed, fnv1a64(example_id)), sample_index), regeneration);
}

BatchSummary run_batch(ChatClient& client, const std::vector<BatchJob>& jobs, const GenerationParams& params,
                       Journal& journal, const BatchOptions& options) {
  if (options.limit < 1) throw ConfigError("concurrency limit must be >= 1");
  params.validate();

  struct Work {
    const BatchJob* job;
    std::size_t sample;
  };
  BatchSummary summary;
  std::vector<Work> pending;
  std::set<std::string> seen;
  for (const BatchJob& job : jobs) {
    if (job.samples < 1) throw ConfigError("job " + job.example_id + " asks for zero samples");
    if (!seen.insert(job.example_id).second) throw ValidationError("duplicate job id " + job.example_id);
    for (std::size_t s = 0; s < job.samples; ++s) {
      if (journal.completed(job.example_id, s)) ++summary.skipped;
      else pending.push_back({&job, s});
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> aborted{false};
  std::exception_ptr fatal;
  std::mutex summary_mutex;
  auto worker = [&] {
    for (;;) {
      if (aborted.load() || (options.cancel != nullptr && options.cancel->load())) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const Work& w = pending[i];

      JournalRecord record;
      record.example_id = w.job->example_id;
      record.sample_index = w.sample;
      TokenUsage usage;
      std::size_t regen = 0;
      try {
        for (;; ++regen) {
          const std::uint64_t seed = request_seed(options.seed, w.job->example_id, w.sample, regen);
          RawResponse r = client.send_chat(w.job->turns, params, seed);
          r.example_id = w.job->example_id;
          r.sample_index = w.sample;
          usage += r.usage;
          record.text = r.text;
          record.model = r.model;
          record.latency_ms = r.latency.count();
          record.attempts = r.attempt;
          record.request_seed = seed;
          if (!options.accept || options.accept(r)) {
            record.status = RecordStatus::ok;
            break;
          }
          if (regen >= options.max_regenerations) {
            record.status = RecordStatus::parse_failed;
            break;
          }
        }
      } catch (const NetworkError& e) {
        record.status = RecordStatus::error;
        record.http_status = e.status();
        record.error = e.what();
      } catch (const std::exception& e) {
        record.status = RecordStatus::error;
        record.error = e.what();
      }
      record.regenerations = regen;
      record.input_tokens = usage.input_tokens;
      record.output_tokens = usage.output_tokens;
      try {
        journal.append(record);
      } catch (...) {
        std::lock_guard lock(summary_mutex);
        if (!fatal) fatal = std::current_exception();
        aborted = true;
        return;
      }
      {
        std::lock_guard lock(summary_mutex);
        ++summary.requested;
        summary.regenerations += regen;
        switch (record.status) {
          case RecordStatus::ok: ++summary.ok; break;
          case RecordStatus::parse_failed: ++summary.parse_failed; break;
          case RecordStatus::error: ++summary.errors; break;
        }
      }
      if (options.on_record) {
        try {
          options.on_record(record);
        } catch (...) {
          std::lock_guard lock(summary_mutex);
          if (!fatal) fatal = std::current_exception();
          aborted = true;
          return;
        }
      }
    }
  };

  const std::size_t threads = std::min(options.limit, std::max<std::size_t>(pending.size(), 1));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);
  summary.cancelled = options.cancel != nullptr && options.cancel->load() && next.load() < pending.size();
  return summary;
}

}  // namespace lexcomp
