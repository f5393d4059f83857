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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lexcomp::testing {

struct MockReply {
  int status = 200;
  std::string content;             // assistant message text
  std::uint64_t prompt_tokens = 10;
  std::uint64_t completion_tokens = 5;
  std::string model;               // echoed request model when empty
  std::chrono::milliseconds delay{0};
  std::optional<std::string> raw_body;  // sent verbatim instead of a completion
  std::map<std::string, std::string> headers;
};

// Receives the parsed request body and the 0-based index of the call.
using Responder = std::function<MockReply(const nlohmann::json& request, std::size_t call_index)>;

// OpenAI-style chat-completions server on 127.0.0.1 with a random port.
// Tracks the peak number of requests being handled at once.
class MockChatServer {
 public:
  explicit MockChatServer(Responder responder, std::size_t threads = 16);
  ~MockChatServer();
  MockChatServer(const MockChatServer&) = delete;
  MockChatServer& operator=(const MockChatServer&) = delete;

  std::string url() const;
  int port() const { return port_; }

  std::size_t max_in_flight() const { return max_in_flight_.load(); }
  std::size_t requests() const { return requests_.load(); }
  std::vector<nlohmann::json> received() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Responder responder_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
  std::atomic<std::size_t> requests_{0};
  mutable std::mutex mutex_;
  std::vector<nlohmann::json> received_;
};

// Text of the last user turn of a request.
std::string last_user_message(const nlohmann::json& request);

// Splits "Is `{token}` complex in `{sentence}`?" and the LCP / fine-tune
// variants back into (token, sentence). Empty strings when the text does not
// match any known user template.
std::pair<std::string, std::string> query_fields(const std::string& user_message);

// Canonical judgment JSON as a cooperative model would return it.
std::string judgment_json(const std::string& sentence, const std::string& word, const std::string& label,
                          const std::string& proof = "It is a short, common word.");

}  // namespace lexcomp::testing
