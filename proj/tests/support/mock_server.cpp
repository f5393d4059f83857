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

#include "mock_server.hpp"

#include <regex>
#include <stdexcept>

#include <httplib.h>

namespace lexcomp::testing {

struct MockChatServer::Impl {
  httplib::Server server;
};

MockChatServer::MockChatServer(Responder responder, std::size_t threads)
    : impl_(std::make_unique<Impl>()), responder_(std::move(responder)) {
  impl_->server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  impl_->server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
    const std::size_t now = ++in_flight_;
    std::size_t peak = max_in_flight_.load();
    while (now > peak && !max_in_flight_.compare_exchange_weak(peak, now)) {
    }
    const std::size_t index = requests_++;
    nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
    {
      std::lock_guard lock(mutex_);
      received_.push_back(body);
    }
    MockReply reply = responder_(body, index);
    if (reply.delay.count() > 0) std::this_thread::sleep_for(reply.delay);
    res.status = reply.status;
    for (const auto& [k, v] : reply.headers) res.set_header(k, v);
    if (reply.raw_body) {
      res.set_content(*reply.raw_body, "application/json");
    } else if (reply.status == 200) {
      nlohmann::json out;
      out["id"] = "mock-" + std::to_string(index);
      out["object"] = "chat.completion";
      out["model"] = reply.model.empty() ? body.value("model", "mock") : reply.model;
      out["choices"] = nlohmann::json::array(
          {{{"index", 0},
            {"message", {{"role", "assistant"}, {"content", reply.content}}},
            {"finish_reason", "stop"}}});
      out["usage"] = {{"prompt_tokens", reply.prompt_tokens},
                      {"completion_tokens", reply.completion_tokens},
                      {"total_tokens", reply.prompt_tokens + reply.completion_tokens}};
      res.set_content(out.dump(), "application/json");
    } else {
      res.set_content(R"({"error":{"message":"mock error"}})", "application/json");
    }
    --in_flight_;
  });
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock server could not bind");
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

MockChatServer::~MockChatServer() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockChatServer::url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
}

std::vector<nlohmann::json> MockChatServer::received() const {
  std::lock_guard lock(mutex_);
  return received_;
}

std::string last_user_message(const nlohmann::json& request) {
  const auto& messages = request.at("messages");
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if ((*it).at("role") == "user") return (*it).at("content").get<std::string>();
  }
  return {};
}

std::pair<std::string, std::string> query_fields(const std::string& user_message) {
  static const std::regex cwi_en(R"(^Is `([^`]*)` complex in `([\s\S]*)`\?$)");
  static const std::regex lcp_en(R"(^What is the difficulty of `([^`]*)` from `([\s\S]*)`\?$)");
  static const std::regex finetune(R"(^sentence: `([\s\S]*)`\nword: `([^`]*)`$)");
  std::smatch m;
  if (std::regex_match(user_message, m, cwi_en) || std::regex_match(user_message, m, lcp_en)) {
    return {m[1], m[2]};
  }
  if (std::regex_match(user_message, m, finetune)) return {m[2], m[1]};
  return {};
}

std::string judgment_json(const std::string& sentence, const std::string& word, const std::string& label,
                          const std::string& proof) {
  nlohmann::ordered_json j;
  j["sentence"] = sentence;
  j["word"] = word;
  j["proof"] = proof;
  j["complex"] = label;
  return j.dump(4);
}

}  // namespace lexcomp::testing
