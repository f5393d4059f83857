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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexcomp/journal.hpp"
#include "lexcomp/promptkit.hpp"

namespace lexcomp {

// Sampling parameters sent with every request.
struct GenerationParams {
  double temperature = 0.8;
  double top_p = 0.95;
  std::optional<int> top_k = 10;
  std::optional<double> repetition_penalty = 1.2;
  int max_tokens = 4096;
  std::string model = "gpt-3.5-turbo";

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

// Whether top_k / repetition_penalty go on the wire.
//   automatic: sent unless the host is api.openai.com; dropped for the rest
//              of the client's life after the endpoint rejects them (400/422)
enum class ExtendedParams { automatic, always, never };

ExtendedParams parse_extended_params(std::string_view name);
std::string_view to_string(ExtendedParams mode);

struct RetryPolicy {
  int max_attempts = 5;  // total HTTP attempts per request
  std::chrono::milliseconds initial_backoff{1000};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};

  // Delay before attempt `attempt + 1`, for attempt >= 1.
  std::chrono::milliseconds backoff(int attempt) const;
};

struct EndpointConfig {
  std::string url = "https://api.openai.com/v1/chat/completions";
  std::string api_key_env = "OPENAI_API_KEY";
  std::optional<std::string> api_key;  // takes precedence over the variable
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
  ExtendedParams extended = ExtendedParams::automatic;
};

struct TokenUsage {
  std::uint64_t input_tokens = 0;
  std::uint64_t output_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  bool operator==(const TokenUsage&) const = default;
};

// Dollars per 1,000 tokens.
struct Price {
  double input_per_1k = 0.0;
  double output_per_1k = 0.0;
};

// Thread-safe token and cost accumulator. Costs are kept as integer
// picodollars per token, so totals are exact and independent of the order
// in which calls are recorded.
class CostLedger {
 public:
  // Starts with default_price_table().
  CostLedger();
  explicit CostLedger(std::map<std::string, Price> prices);

  static std::map<std::string, Price> default_price_table();

  void set_price(const std::string& model_prefix, Price price);
  // Longest matching model-name prefix.
  std::optional<Price> price_for(const std::string& model) const;

  // Calls for models with no price still count tokens; the model name is
  // remembered in unpriced_models().
  void record(const std::string& model, const TokenUsage& usage);

  std::uint64_t calls() const;
  std::uint64_t input_tokens() const;
  std::uint64_t output_tokens() const;
  std::int64_t accrued_picodollars() const;
  double accrued_cost() const;  // dollars
  std::set<std::string> unpriced_models() const;

  static std::int64_t cost_picodollars(const Price& price, const TokenUsage& usage);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Price> prices_;
  std::uint64_t calls_ = 0;
  std::uint64_t input_tokens_ = 0;
  std::uint64_t output_tokens_ = 0;
  std::int64_t picodollars_ = 0;
  std::set<std::string> unpriced_;
};

struct RawResponse {
  std::string example_id;
  std::size_t sample_index = 0;
  std::string text;
  std::string model;
  TokenUsage usage;
  std::chrono::milliseconds latency{0};
  int attempt = 0;  // 1 when the first HTTP attempt succeeded
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// OpenAI-compatible chat-completions client. Safe to share between threads;
// each request uses its own connection.
class ChatClient {
 public:
  // `ledger` may be null. `sleeper` defaults to std::this_thread::sleep_for.
  explicit ChatClient(EndpointConfig config, CostLedger* ledger = nullptr, Sleeper sleeper = {});

  // Retries 429, 5xx and transport failures with exponential backoff (a
  // Retry-After header in seconds lengthens the wait). Throws NetworkError
  // with the HTTP status and body for other statuses, or the last error once
  // the attempt cap is reached.
  RawResponse send_chat(const Chat& turns, const GenerationParams& params,
                        std::optional<std::uint64_t> seed = std::nullopt);

  bool extended_params_active() const;
  const EndpointConfig& config() const { return config_; }

  // The JSON body sent for a request.
  static std::string request_body(const Chat& turns, const GenerationParams& params, bool extended,
                                  std::optional<std::uint64_t> seed);

 private:
  EndpointConfig config_;
  CostLedger* ledger_;
  Sleeper sleeper_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  std::atomic<bool> extended_rejected_{false};
};

// Extracts (text, model, usage) from a chat-completions response body.
// Throws NetworkError when the body lacks choices[0].message.
RawResponse parse_completion(const std::string& body);

struct BatchJob {
  std::string example_id;
  Chat turns;
  std::size_t samples = 1;  // K
};

struct BatchOptions {
  std::size_t limit = 8;  // max requests in flight
  std::uint64_t seed = 0;
  // Extra requests for a response that `accept` rejects.
  std::size_t max_regenerations = 2;
  // Decides whether a response is usable; null accepts everything.
  std::function<bool(const RawResponse&)> accept;
  // Polled before each request; set to stop dispatching new work.
  const std::atomic<bool>* cancel = nullptr;
  // Called after each record is journaled, from worker threads.
  std::function<void(const JournalRecord&)> on_record;
};

struct BatchSummary {
  std::size_t requested = 0;      // pairs dispatched in this call
  std::size_t skipped = 0;        // pairs already completed in the journal
  std::size_t ok = 0;
  std::size_t parse_failed = 0;
  std::size_t errors = 0;
  std::size_t regenerations = 0;
  bool cancelled = false;
};

// Seed sent with sample `sample_index` of `example_id`, attempt `regeneration`.
std::uint64_t request_seed(std::uint64_t run_seed, const std::string& example_id, std::size_t sample_index,
                           std::size_t regeneration);

// Sends K samples per job using `limit` worker threads. Pairs already
// completed in the journal are skipped; every outcome, including failures,
// is journaled. Individual failures never abort the batch.
BatchSummary run_batch(ChatClient& client, const std::vector<BatchJob>& jobs, const GenerationParams& params,
                       Journal& journal, const BatchOptions& options);

}  // namespace lexcomp
