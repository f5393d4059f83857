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

#include "lexcomp/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lexcomp/error.hpp"

namespace lexcomp {

std::string_view to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::parse_failed: return "parse_failed";
    case RecordStatus::error: return "error";
  }
  return "error";
}

RecordStatus parse_record_status(std::string_view name) {
  if (name == "ok") return RecordStatus::ok;
  if (name == "parse_failed") return RecordStatus::parse_failed;
  if (name == "error") return RecordStatus::error;
  throw ValidationError("unknown journal status '" + std::string(name) + "'");
}

std::string to_json_line(const JournalRecord& r) {
  nlohmann::ordered_json j;
  j["example_id"] = r.example_id;
  j["sample_index"] = r.sample_index;
  j["status"] = to_string(r.status);
  j["text"] = r.text;
  j["model"] = r.model;
  j["input_tokens"] = r.input_tokens;
  j["output_tokens"] = r.output_tokens;
  j["latency_ms"] = r.latency_ms;
  j["attempts"] = r.attempts;
  j["regenerations"] = r.regenerations;
  j["request_seed"] = r.request_seed;
  j["http_status"] = r.http_status;
  j["error"] = r.error;
  // Invalid UTF-8 from a server is replaced rather than aborting the run.
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

JournalRecord parse_journal_line(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("journal line is not a JSON object");
  try {
    JournalRecord r;
    r.example_id = j.at("example_id").get<std::string>();
    r.sample_index = j.at("sample_index").get<std::size_t>();
    r.status = parse_record_status(j.at("status").get<std::string>());
    r.text = j.value("text", "");
    r.model = j.value("model", "");
    r.input_tokens = j.value("input_tokens", std::uint64_t{0});
    r.output_tokens = j.value("output_tokens", std::uint64_t{0});
    r.latency_ms = j.value("latency_ms", std::int64_t{0});
    r.attempts = j.value("attempts", 0);
    r.regenerations = j.value("regenerations", std::size_t{0});
    r.request_seed = j.value("request_seed", std::uint64_t{0});
    r.http_status = j.value("http_status", 0);
    r.error = j.value("error", "");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("journal record: ") + e.what());
  }
}

namespace {

// Returns the records and the byte length of the complete-line prefix.
std::pair<std::vector<JournalRecord>, std::size_t> scan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open journal " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();

  std::vector<JournalRecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;  // interrupted write
    ++line_no;
    const std::string_view line(content.data() + pos, nl - pos);
    if (!line.empty()) {
      try {
        records.push_back(parse_journal_line(line));
      } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    pos = nl + 1;
  }
  return {std::move(records), pos};
}

}  // namespace

std::vector<JournalRecord> read_journal(const std::filesystem::path& path) { return scan(path).first; }

Journal::Journal(const std::filesystem::path& path) : path_(path) {
  if (std::filesystem::exists(path)) {
    auto [records, valid_bytes] = scan(path);
    records_ = std::move(records);
    if (valid_bytes != std::filesystem::file_size(path)) std::filesystem::resize_file(path, valid_bytes);
  } else if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  for (const JournalRecord& r : records_) {
    if (r.completed()) completed_.insert({r.example_id, r.sample_index});
  }
  file_ = std::fopen(path.c_str(), "ab");
  if (file_ == nullptr) throw IoError("cannot open journal " + path.string() + ": " + std::strerror(errno));
}

Journal::~Journal() {
  if (file_ != nullptr) std::fclose(file_);
}

std::vector<JournalRecord> Journal::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

bool Journal::completed(const std::string& example_id, std::size_t sample_index) const {
  std::lock_guard lock(mutex_);
  return completed_.count({example_id, sample_index}) != 0;
}

void Journal::append(const JournalRecord& record) {
  const std::string line = to_json_line(record) + "\n";
  std::lock_guard lock(mutex_);
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0 ||
      ::fsync(::fileno(file_)) != 0) {
    throw IoError("journal write failed for " + path_.string() + ": " + std::strerror(errno));
  }
  records_.push_back(record);
  if (record.completed()) completed_.insert({record.example_id, record.sample_index});
}

std::vector<JournalRecord> latest_records(const std::vector<JournalRecord>& records) {
  std::map<std::pair<std::string, std::size_t>, const JournalRecord*> last;
  for (const JournalRecord& r : records) {
    auto& slot = last[{r.example_id, r.sample_index}];
    // A completed record is never superseded by a later error.
    if (slot == nullptr || r.completed() || !slot->completed()) slot = &r;
  }
  std::vector<JournalRecord> out;
  out.reserve(last.size());
  for (const auto& [key, r] : last) out.push_back(*r);
  return out;
}

}  // namespace lexcomp
