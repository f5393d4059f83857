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

#include "lexcomp/finetune_prep.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/random.hpp"

namespace lexcomp {

namespace {

struct Stratum {
  std::string name;
  std::vector<const Example*> members;
  std::size_t quota = 0;
};

// quota[i] = total / n, plus one for the first total % n strata.
void spread(std::vector<Stratum*> strata, std::size_t total) {
  const std::size_t n = strata.size();
  for (std::size_t i = 0; i < n; ++i) strata[i]->quota = total / n + (i < total % n ? 1 : 0);
}

FinetuneRecord render(const PromptCatalog& catalog, const PromptConfig& config, const Example& example,
                      std::string answer) {
  FinetuneRecord record;
  record.messages.push_back({Role::system, render_system_prompt(catalog, config)});
  record.messages.push_back({Role::user, render_user_prompt(catalog, config, example)});
  record.messages.push_back({Role::assistant, std::move(answer)});
  return record;
}

}  // namespace

std::vector<FinetuneRecord> build_finetune_set(const PromptCatalog& catalog, const Partition& train, Task task,
                                               Language language, std::size_t cap, std::uint64_t seed) {
  const std::size_t label_count = task == Task::cwi ? 2 : 5;
  if (cap < label_count) {
    throw ConfigError("fine-tune cap " + std::to_string(cap) + " is below the number of labels (" +
                      std::to_string(label_count) + ")");
  }
  if (train.empty()) throw ValidationError("fine-tune source partition is empty");

  PromptConfig config;
  config.task = task;
  config.language = language;
  config.phase = Phase::finetune;
  config.validate();

  // Strata in scale order; for CWI the negative stratum comes first.
  std::vector<Stratum> strata;
  if (task == Task::cwi) strata.push_back({"probability 0 (not complex)", {}, 0});
  for (LikertLabel label : kLikertLabels) {
    const std::string prefix = task == Task::cwi ? "positive probability, " : "";
    strata.push_back({prefix + std::string(to_string(label)), {}, 0});
  }
  const std::size_t offset = task == Task::cwi ? 1 : 0;

  for (const Example& ex : train) {
    if (ex.language != language) {
      throw ValidationError("example " + ex.id + " is " + std::string(to_string(ex.language)) + ", expected " +
                            std::string(to_string(language)));
    }
    if (!ex.gold_probability) throw ValidationError("example " + ex.id + " has no gold probability");
    const double p = *ex.gold_probability;
    if (task == Task::cwi && p == 0.0) strata[0].members.push_back(&ex);
    else strata[offset + static_cast<std::size_t>(discretize(p))].members.push_back(&ex);
  }

  std::vector<Stratum*> likert_strata;
  for (std::size_t i = offset; i < strata.size(); ++i) likert_strata.push_back(&strata[i]);
  if (task == Task::cwi) {
    const std::size_t positives = cap / 2;
    strata[0].quota = cap - positives;
    spread(likert_strata, positives);
  } else {
    spread(likert_strata, cap);
  }

  for (const Stratum& s : strata) {
    if (s.quota > s.members.size()) {
      throw ValidationError("stratum '" + s.name + "' has " + std::to_string(s.members.size()) +
                            " examples but " + std::to_string(s.quota) + " are needed");
    }
  }

  Rng rng(seed);
  std::vector<FinetuneRecord> records;
  records.reserve(cap);
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const Stratum& s = strata[i];
    for (std::size_t idx : rng.sample_without_replacement(s.members.size(), s.quota)) {
      const Example& ex = *s.members[idx];
      std::string answer;
      if (task == Task::lcp) answer = finetune_answer(static_cast<LikertLabel>(i));
      else answer = finetune_answer(language, i != 0);
      records.push_back(render(catalog, config, ex, std::move(answer)));
    }
  }
  rng.shuffle(records);
  return records;
}

std::string to_json_line(const FinetuneRecord& record) {
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const ChatTurn& turn : record.messages) {
    messages.push_back({{"role", to_string(turn.role)}, {"content", turn.content}});
  }
  nlohmann::ordered_json j;
  j["messages"] = std::move(messages);
  return j.dump();
}

FinetuneRecord parse_finetune_line(std::string_view line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("fine-tune line is not a JSON object");
  FinetuneRecord record;
  try {
    for (const auto& m : j.at("messages")) {
      record.messages.push_back({parse_role(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("fine-tune record: ") + e.what());
  }
  return record;
}

std::string to_jsonl(const std::vector<FinetuneRecord>& records) {
  std::string out;
  for (const FinetuneRecord& r : records) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

std::vector<FinetuneRecord> parse_jsonl(std::string_view content) {
  std::vector<FinetuneRecord> out;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const std::size_t nl = content.find('\n');
    const std::string_view line = content.substr(0, nl);
    ++line_no;
    if (!line.empty()) {
      try {
        out.push_back(parse_finetune_line(line));
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    content.remove_prefix(nl + 1);
  }
  return out;
}

void emit_jsonl(const std::vector<FinetuneRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw ValidationError("refusing to write an empty fine-tune file");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string content = to_jsonl(records);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<FinetuneRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str());
}

std::map<std::string, std::size_t> answer_histogram(const std::vector<FinetuneRecord>& records) {
  std::map<std::string, std::size_t> out;
  for (const FinetuneRecord& r : records) {
    if (!r.messages.empty() && r.messages.back().role == Role::assistant) out[r.messages.back().content]++;
  }
  return out;
}

}  // namespace lexcomp
