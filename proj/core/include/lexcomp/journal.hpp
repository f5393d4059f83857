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

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexcomp {

// Status of one journaled (example, sample) pair.
//   ok            response received and accepted
//   parse_failed  response received but rejected after every regeneration
//   error         transport failure; the pair is re-sent on resume
enum class RecordStatus { ok, parse_failed, error };

std::string_view to_string(RecordStatus status);
RecordStatus parse_record_status(std::string_view name);

struct JournalRecord {
  std::string example_id;
  std::size_t sample_index = 0;
  RecordStatus status = RecordStatus::ok;
  std::string text;                 // final response text, verbatim
  std::string model;                // model name reported by the endpoint
  std::uint64_t input_tokens = 0;   // summed over regenerations
  std::uint64_t output_tokens = 0;  // summed over regenerations
  std::int64_t latency_ms = 0;      // of the final request
  int attempts = 0;                 // HTTP attempts of the final request
  std::size_t regenerations = 0;    // extra requests after rejected parses
  std::uint64_t request_seed = 0;   // seed of the final request
  int http_status = 0;              // last status for error records
  std::string error;                // message for error records

  bool completed() const { return status != RecordStatus::error; }
  bool operator==(const JournalRecord&) const = default;
};

// One compact JSON object, no trailing newline.
std::string to_json_line(const JournalRecord& record);
// Throws ValidationError on malformed input.
JournalRecord parse_journal_line(std::string_view line);

// Reads every complete record. A final line without a newline is an
// interrupted write and is ignored; any other malformed line throws.
std::vector<JournalRecord> read_journal(const std::filesystem::path& path);

// Append-only JSONL journal. Opening an existing file replays its records
// and drops a partial trailing line. Every append is flushed and fsync'd.
class Journal {
 public:
  explicit Journal(const std::filesystem::path& path);
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  const std::filesystem::path& path() const { return path_; }

  // Records present when the journal was opened plus those appended since.
  std::vector<JournalRecord> records() const;

  bool completed(const std::string& example_id, std::size_t sample_index) const;

  // Thread-safe.
  void append(const JournalRecord& record);

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  mutable std::mutex mutex_;
  std::vector<JournalRecord> records_;
  std::set<std::pair<std::string, std::size_t>> completed_;
};

// Keeps the last record per (example, sample): later lines supersede
// earlier ones, so an error record followed by a successful retry yields the
// success. A completed record is never replaced by a later error. Sorted by
// (example_id, sample_index).
std::vector<JournalRecord> latest_records(const std::vector<JournalRecord>& records);

}  // namespace lexcomp
