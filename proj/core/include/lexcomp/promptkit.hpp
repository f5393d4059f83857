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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "lexcomp/corpus.hpp"

namespace lexcomp {

enum class Role { system, user, assistant };
enum class Regime { zero_shot, few_shot };
enum class Phase { inference, finetune };

std::string_view to_string(Role role);
std::string_view to_string(Regime regime);
std::string_view to_string(Phase phase);
Role parse_role(std::string_view name);
Regime parse_regime(std::string_view name);
Phase parse_phase(std::string_view name);

struct ChatTurn {
  Role role = Role::user;
  std::string content;
  bool operator==(const ChatTurn&) const = default;
};

using Chat = std::vector<ChatTurn>;

// A few-shot demonstration: the example, its gold answer text as it appears
// in the JSON "complex" field ("true"/"false" or a Likert phrase), and the
// proof shown under chain-of-thought.
struct Exemplar {
  Example example;
  std::string answer;
  std::string proof;
  bool operator==(const Exemplar&) const = default;
};

struct PromptConfig {
  Task task = Task::cwi;
  Language language = Language::en;
  Regime regime = Regime::zero_shot;
  bool cot = false;
  Phase phase = Phase::inference;
  std::vector<Exemplar> exemplars;
  std::uint64_t shuffle_seed = 0;

  // Throws ConfigError: exemplars present iff few-shot; LCP is English only;
  // CoT few-shot needs a proof on every exemplar.
  void validate() const;
};

// Directory of UTF-8 templates laid out as
//   <root>/<task>/<language>/<variant>.system.txt
//   <root>/<task>/<language>/<variant>.user.txt
// with variant one of inference-cot, inference, finetune. A single trailing
// newline in a template file is ignored.
class PromptCatalog {
 public:
  static PromptCatalog load(const std::filesystem::path& root);
  // The catalog shipped under data_dir()/prompts.
  static PromptCatalog shipped();

  // Throws ConfigError for a (task, language, variant) the catalog lacks.
  const std::string& system_template(Task task, Language language, std::string_view variant) const;
  const std::string& user_template(Task task, Language language, std::string_view variant) const;

  bool has(Task task, Language language, std::string_view variant) const;

 private:
  using Key = std::tuple<Task, Language, std::string>;
  std::map<Key, std::string> system_;
  std::map<Key, std::string> user_;
};

// "inference-cot", "inference" or "finetune".
std::string_view template_variant(const PromptConfig& config);

std::string render_system_prompt(const PromptCatalog& catalog, const PromptConfig& config);

// Single-pass substitution of {token} and {sentence}; nothing else changes.
std::string render_user_prompt(const PromptCatalog& catalog, const PromptConfig& config, const Example& example);

// Warnings for inputs that survive substitution but may confuse a model:
// backticks (the templates quote with backticks) and literal placeholders.
std::vector<std::string> lint_example(const Example& example);

// JSON object an assistant is expected to return for an exemplar, pretty
// printed with the field order of the catalog schema; proof only if cot.
std::string exemplar_answer_json(const Exemplar& exemplar, bool cot);

// Bare answer used by fine-tune prompts: yes/no, ja/nein, sí/no, or a
// Likert phrase.
std::string finetune_answer(Language language, bool complex);
std::string finetune_answer(LikertLabel label);

// [system] + shuffled (user, assistant) exemplar pairs + [user]. The exemplar
// permutation is a function of (shuffle_seed, example.id).
Chat assemble(const PromptCatalog& catalog, const PromptConfig& config, const Example& example);

// Loads one of the data/fewshot/*.json exemplar sets.
struct ExemplarSet {
  Task task = Task::cwi;
  Language language = Language::en;
  Domain domain = Domain::other;
  std::vector<Exemplar> exemplars;
};
ExemplarSet load_exemplar_set(const std::filesystem::path& path);
// Name of a shipped set, e.g. "cwi-en-news" or "lcp-single".
ExemplarSet shipped_exemplar_set(std::string_view name);

// Wraps sampled train examples as exemplars without proofs. CWI answers come
// from gold_binary (or probability > 0); LCP answers from discretize().
std::vector<Exemplar> exemplars_from_examples(const std::vector<Example>& examples, Task task);

}  // namespace lexcomp
