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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lexcomp/corpus.hpp"
#include "lexcomp/promptkit.hpp"

namespace lexcomp {

// One chat-format training example: fine-tune system prompt, user query,
// assistant answer.
struct FinetuneRecord {
  Chat messages;
  bool operator==(const FinetuneRecord&) const = default;
};

// Samples at most `cap` training examples with balanced labels and renders
// them with the fine-tune prompts.
//
// LCP: gold probabilities are discretized; each of the five labels gets
// cap / 5 records, the remainder going one each to the labels in scale order.
// CWI: cap / 2 (rounded down) positives and the rest negatives
// (probability 0). Positives are spread evenly over the five Likert strata of
// their probability, the remainder again in scale order.
//
// Records are shuffled; the output is a pure function of the inputs and
// seed. Throws ConfigError when cap is below the number of labels, and
// ValidationError naming any stratum with too few examples.
std::vector<FinetuneRecord> build_finetune_set(const PromptCatalog& catalog, const Partition& train, Task task,
                                               Language language, std::size_t cap = 250, std::uint64_t seed = 0);

// {"messages":[{"role":...,"content":...},...]} on one line.
std::string to_json_line(const FinetuneRecord& record);
FinetuneRecord parse_finetune_line(std::string_view line);

// One record per line, each terminated by '\n'.
std::string to_jsonl(const std::vector<FinetuneRecord>& records);
std::vector<FinetuneRecord> parse_jsonl(std::string_view content);

// Throws ValidationError for an empty record list, IoError on write failure.
void emit_jsonl(const std::vector<FinetuneRecord>& records, const std::filesystem::path& path);
std::vector<FinetuneRecord> read_jsonl(const std::filesystem::path& path);

// Count of records per assistant answer.
std::map<std::string, std::size_t> answer_histogram(const std::vector<FinetuneRecord>& records);

}  // namespace lexcomp
