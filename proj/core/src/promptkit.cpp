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

#include "lexcomp/promptkit.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lexcomp/data_paths.hpp"
#include "lexcomp/error.hpp"
#include "lexcomp/random.hpp"

namespace lexcomp {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(Regime regime) { return regime == Regime::zero_shot ? "zero_shot" : "few_shot"; }

std::string_view to_string(Phase phase) { return phase == Phase::inference ? "inference" : "finetune"; }

Role parse_role(std::string_view name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw ValidationError("unknown chat role '" + std::string(name) + "'");
}

Regime parse_regime(std::string_view name) {
  if (name == "zero_shot" || name == "zero-shot") return Regime::zero_shot;
  if (name == "few_shot" || name == "few-shot") return Regime::few_shot;
  throw ConfigError("unknown regime '" + std::string(name) + "' (expected zero_shot or few_shot)");
}

Phase parse_phase(std::string_view name) {
  if (name == "inference") return Phase::inference;
  if (name == "finetune") return Phase::finetune;
  throw ConfigError("unknown phase '" + std::string(name) + "' (expected inference or finetune)");
}

void PromptConfig::validate() const {
  if (regime == Regime::few_shot && exemplars.empty()) throw ConfigError("few-shot prompting needs exemplars");
  if (regime == Regime::zero_shot && !exemplars.empty()) throw ConfigError("zero-shot prompting takes no exemplars");
  if (task == Task::lcp && language != Language::en) {
    throw ConfigError("LCP prompts exist only for English, not '" + std::string(to_string(language)) + "'");
  }
  if (cot && phase == Phase::inference) {
    for (const auto& ex : exemplars) {
      if (ex.proof.empty()) {
        throw ConfigError("chain-of-thought few-shot needs a proof for exemplar '" + ex.example.id + "'");
      }
    }
  }
}

// --- catalog --------------------------------------------------------------

namespace {

std::string read_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read template " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();
  if (!content.empty() && content.back() == '\n') content.pop_back();
  return content;
}

constexpr std::string_view kVariants[] = {"inference-cot", "inference", "finetune"};

}  // namespace

PromptCatalog PromptCatalog::load(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw ConfigError("prompt catalog not found at " + root.string());
  PromptCatalog catalog;
  for (Task task : {Task::cwi, Task::lcp}) {
    for (Language language : {Language::en, Language::de, Language::es}) {
      const fs::path dir = root / std::string(to_string(task)) / std::string(to_string(language));
      for (std::string_view variant : kVariants) {
        const fs::path system = dir / (std::string(variant) + ".system.txt");
        const fs::path user = dir / (std::string(variant) + ".user.txt");
        if (!fs::exists(system) && !fs::exists(user)) continue;
        if (!fs::exists(system) || !fs::exists(user)) {
          throw ConfigError("incomplete template pair for " + dir.string() + "/" + std::string(variant));
        }
        const Key key{task, language, std::string(variant)};
        catalog.system_[key] = read_template(system);
        catalog.user_[key] = read_template(user);
      }
    }
  }
  return catalog;
}

PromptCatalog PromptCatalog::shipped() { return load(data_dir() / "prompts"); }

bool PromptCatalog::has(Task task, Language language, std::string_view variant) const {
  return system_.count(Key{task, language, std::string(variant)}) != 0;
}

const std::string& PromptCatalog::system_template(Task task, Language language, std::string_view variant) const {
  const auto it = system_.find(Key{task, language, std::string(variant)});
  if (it == system_.end()) {
    throw ConfigError("no " + std::string(variant) + " prompt for task " + std::string(to_string(task)) +
                      ", language " + std::string(to_string(language)));
  }
  return it->second;
}

const std::string& PromptCatalog::user_template(Task task, Language language, std::string_view variant) const {
  const auto it = user_.find(Key{task, language, std::string(variant)});
  if (it == user_.end()) {
    throw ConfigError("no " + std::string(variant) + " prompt for task " + std::string(to_string(task)) +
                      ", language " + std::string(to_string(language)));
  }
  return it->second;
}

// --- rendering ------------------------------------------------------------

std::string_view template_variant(const PromptConfig& config) {
  if (config.phase == Phase::finetune) return "finetune";
  return config.cot ? "inference-cot" : "inference";
}

std::string render_system_prompt(const PromptCatalog& catalog, const PromptConfig& config) {
  if (config.task == Task::lcp && config.language != Language::en) {
    throw ConfigError("LCP prompts exist only for English");
  }
  return catalog.system_template(config.task, config.language, template_variant(config));
}

std::string render_user_prompt(const PromptCatalog& catalog, const PromptConfig& config, const Example& example) {
  const std::string& tpl = catalog.user_template(config.task, config.language, template_variant(config));
  static constexpr std::string_view kToken = "{token}";
  static constexpr std::string_view kSentence = "{sentence}";
  std::string out;
  out.reserve(tpl.size() + example.sentence.size() + example.target.size());
  std::size_t i = 0;
  while (i < tpl.size()) {
    const std::string_view rest = std::string_view(tpl).substr(i);
    if (rest.starts_with(kToken)) {
      out += example.target;
      i += kToken.size();
    } else if (rest.starts_with(kSentence)) {
      out += example.sentence;
      i += kSentence.size();
    } else {
      out += tpl[i++];
    }
  }
  return out;
}

std::vector<std::string> lint_example(const Example& example) {
  std::vector<std::string> warnings;
  if (example.target.find('`') != std::string::npos) {
    warnings.push_back("example " + example.id + ": target contains a backtick");
  }
  if (example.sentence.find('`') != std::string::npos) {
    warnings.push_back("example " + example.id + ": sentence contains a backtick");
  }
  for (const std::string* field : {&example.target, &example.sentence}) {
    if (field->find("{token}") != std::string::npos || field->find("{sentence}") != std::string::npos) {
      warnings.push_back("example " + example.id + ": text contains a literal template placeholder");
      break;
    }
  }
  return warnings;
}

std::string exemplar_answer_json(const Exemplar& exemplar, bool cot) {
  nlohmann::ordered_json j;
  j["sentence"] = exemplar.example.sentence;
  j["word"] = exemplar.example.target;
  if (cot) j["proof"] = exemplar.proof;
  j["complex"] = exemplar.answer;
  return j.dump(4);
}

std::string finetune_answer(Language language, bool complex) {
  switch (language) {
    case Language::de: return complex ? "ja" : "nein";
    case Language::es: return complex ? "sí" : "no";
    case Language::en: break;
  }
  return complex ? "yes" : "no";
}

std::string finetune_answer(LikertLabel label) { return std::string(to_string(label)); }

namespace {

std::string exemplar_assistant_turn(const PromptConfig& config, const Exemplar& exemplar) {
  if (config.phase == Phase::inference) return exemplar_answer_json(exemplar, config.cot);
  if (config.task == Task::lcp) return exemplar.answer;
  const bool complex = exemplar.answer == "true";
  return finetune_answer(config.language, complex);
}

}  // namespace

Chat assemble(const PromptCatalog& catalog, const PromptConfig& config, const Example& example) {
  config.validate();
  Chat chat;
  chat.reserve(2 + 2 * config.exemplars.size());
  chat.push_back({Role::system, render_system_prompt(catalog, config)});

  std::vector<std::size_t> order(config.exemplars.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(config.shuffle_seed, fnv1a64(example.id)));
  rng.shuffle(order);
  for (std::size_t index : order) {
    const Exemplar& exemplar = config.exemplars[index];
    chat.push_back({Role::user, render_user_prompt(catalog, config, exemplar.example)});
    chat.push_back({Role::assistant, exemplar_assistant_turn(config, exemplar)});
  }

  chat.push_back({Role::user, render_user_prompt(catalog, config, example)});
  return chat;
}

// --- exemplar sets --------------------------------------------------------

ExemplarSet load_exemplar_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open exemplar set " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("exemplar set " + path.string() + ": " + e.what());
  }
  ExemplarSet set;
  try {
    set.task = parse_task(doc.at("task").get<std::string>());
    set.language = parse_language(doc.at("language").get<std::string>());
    set.domain = parse_domain(doc.value("domain", std::string("other")));
    for (const auto& row : doc.at("exemplars")) {
      Exemplar ex;
      ex.example.id = row.at("id").get<std::string>();
      ex.example.sentence = row.at("sentence").get<std::string>();
      ex.example.target = row.at("token").get<std::string>();
      ex.example.language = set.language;
      ex.example.domain = set.domain;
      ex.answer = row.at("answer").get<std::string>();
      ex.proof = row.value("proof", std::string());
      if (set.task == Task::cwi) {
        if (ex.answer != "true" && ex.answer != "false") {
          throw ValidationError("CWI exemplar " + ex.example.id + " answer must be true or false");
        }
        ex.example.gold_binary = ex.answer == "true";
      } else {
        bool matched = false;
        for (LikertLabel label : kLikertLabels) {
          if (ex.answer == to_string(label)) {
            ex.example.gold_probability = likert_to_numeric(label);
            matched = true;
          }
        }
        if (!matched) throw ValidationError("LCP exemplar " + ex.example.id + " has unknown label '" + ex.answer + "'");
      }
      set.exemplars.push_back(std::move(ex));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("exemplar set " + path.string() + ": " + e.what());
  }
  return set;
}

ExemplarSet shipped_exemplar_set(std::string_view name) {
  const auto path = data_dir() / "fewshot" / (std::string(name) + ".json");
  if (!std::filesystem::exists(path)) throw ConfigError("no shipped exemplar set named '" + std::string(name) + "'");
  return load_exemplar_set(path);
}

std::vector<Exemplar> exemplars_from_examples(const std::vector<Example>& examples, Task task) {
  std::vector<Exemplar> out;
  out.reserve(examples.size());
  for (const Example& ex : examples) {
    Exemplar exemplar{ex, {}, {}};
    if (task == Task::cwi) {
      bool complex = false;
      if (ex.gold_binary) complex = *ex.gold_binary;
      else if (ex.gold_probability) complex = *ex.gold_probability > 0.0;
      else throw ValidationError("exemplar " + ex.id + " has no gold label");
      exemplar.answer = complex ? "true" : "false";
    } else {
      if (!ex.gold_probability) throw ValidationError("exemplar " + ex.id + " has no gold probability");
      exemplar.answer = std::string(to_string(discretize(*ex.gold_probability)));
    }
    out.push_back(std::move(exemplar));
  }
  return out;
}

}  // namespace lexcomp
