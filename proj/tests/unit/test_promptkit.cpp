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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "lexcomp/error.hpp"
#include "lexcomp/promptkit.hpp"
#include "test_paths.hpp"

using namespace lexcomp;
using lexcomp::testing::golden;
using lexcomp::testing::slurp;

namespace {

Example make_example(const std::string& id, const std::string& sentence, const std::string& target) {
  Example ex;
  ex.id = id;
  ex.sentence = sentence;
  ex.target = target;
  return ex;
}

std::string strip_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

TEST_CASE("shipped templates match the golden files") {
  const auto catalog = PromptCatalog::shipped();
  const std::filesystem::path root = golden("prompts");
  std::size_t compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), root);
    auto it = rel.begin();
    const Task task = parse_task(it->string());
    const Language language = parse_language((++it)->string());
    const std::string file = (++it)->string();
    const auto dot = file.find('.');
    const std::string variant = file.substr(0, dot);
    const bool system = file.substr(dot) == ".system.txt";
    const std::string want = strip_newline(slurp(entry.path()));
    CAPTURE(rel.string());
    CHECK((system ? catalog.system_template(task, language, variant) : catalog.user_template(task, language, variant)) ==
          want);
    ++compared;
  }
  CHECK(compared == 24);
}

TEST_CASE("user prompt substitution is literal and single pass") {
  const auto catalog = PromptCatalog::shipped();
  PromptConfig cfg;
  cfg.cot = true;
  const auto ex = make_example("1", "He wrote {token} on {sentence} $1 \\n.", "{sentence}");
  CHECK(render_user_prompt(catalog, cfg, ex) == "Is `{sentence}` complex in `He wrote {token} on {sentence} $1 \\n.`?");
  cfg.task = Task::lcp;
  CHECK(render_user_prompt(catalog, cfg, make_example("2", "A b c.", "b")) == "What is the difficulty of `b` from `A b c.`?");
  cfg.phase = Phase::finetune;
  CHECK(render_user_prompt(catalog, cfg, make_example("2", "A b c.", "b")) == "sentence: `A b c.`\nword: `b`");
}

TEST_CASE("non-cot inference prompt drops the proof field") {
  const auto catalog = PromptCatalog::shipped();
  for (Language lang : {Language::en, Language::de, Language::es}) {
    PromptConfig cfg;
    cfg.language = lang;
    cfg.cot = false;
    const std::string plain = render_system_prompt(catalog, cfg);
    cfg.cot = true;
    const std::string cot = render_system_prompt(catalog, cfg);
    CHECK(cot.find("\"proof\"") != std::string::npos);
    CHECK(plain.find("\"proof\"") == std::string::npos);
    CHECK(plain.find("Do not explain.") != std::string::npos);
  }
}

TEST_CASE("lcp is English only") {
  const auto catalog = PromptCatalog::shipped();
  PromptConfig cfg;
  cfg.task = Task::lcp;
  cfg.language = Language::de;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(render_system_prompt(catalog, cfg), ConfigError);
}

TEST_CASE("few-shot cwi assembly has 16 turns") {
  const auto catalog = PromptCatalog::shipped();
  const auto set = shipped_exemplar_set("cwi-en-news");
  REQUIRE(set.exemplars.size() == 7);
  PromptConfig cfg;
  cfg.regime = Regime::few_shot;
  cfg.cot = true;
  cfg.exemplars = set.exemplars;
  const auto ex = make_example("q", "The cat sat on the mat.", "mat");
  const Chat chat = assemble(catalog, cfg, ex);
  REQUIRE(chat.size() == 16);
  CHECK(chat.front().role == Role::system);
  for (std::size_t i = 1; i < 15; i += 2) {
    CHECK(chat[i].role == Role::user);
    CHECK(chat[i + 1].role == Role::assistant);
    const auto answer = nlohmann::json::parse(chat[i + 1].content);
    CHECK(answer.contains("proof"));
    CHECK((answer["complex"] == "true" || answer["complex"] == "false"));
  }
  CHECK(chat.back().role == Role::user);
  CHECK(chat.back().content == "Is `mat` complex in `The cat sat on the mat.`?");
}

TEST_CASE("seed shuffles keep the exemplar multiset") {
  const auto catalog = PromptCatalog::shipped();
  PromptConfig cfg;
  cfg.regime = Regime::few_shot;
  cfg.cot = true;
  cfg.exemplars = shipped_exemplar_set("cwi-en-news").exemplars;
  const auto ex = make_example("q", "The cat sat on the mat.", "mat");

  auto pairs_of = [](const Chat& chat) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 1; i + 1 < chat.size(); i += 2) pairs.emplace_back(chat[i].content, chat[i + 1].content);
    return pairs;
  };
  cfg.shuffle_seed = 0;
  auto reference = pairs_of(assemble(catalog, cfg, ex));
  std::sort(reference.begin(), reference.end());
  std::set<std::vector<std::pair<std::string, std::string>>> orders;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.shuffle_seed = seed;
    auto pairs = pairs_of(assemble(catalog, cfg, ex));
    orders.insert(pairs);
    std::sort(pairs.begin(), pairs.end());
    CHECK(pairs == reference);
  }
  CHECK(orders.size() > 1);
  cfg.shuffle_seed = 7;
  CHECK(assemble(catalog, cfg, ex) == assemble(catalog, cfg, ex));
}

TEST_CASE("every shipped exemplar set loads") {
  for (const char* name : {"cwi-en-news", "cwi-en-wikinews", "cwi-en-wikipedia", "cwi-de", "cwi-es"}) {
    const auto set = shipped_exemplar_set(name);
    CHECK(set.task == Task::cwi);
    CHECK(set.exemplars.size() == 7);
    for (const auto& ex : set.exemplars) CHECK_FALSE(ex.proof.empty());
  }
  for (const char* name : {"lcp-single", "lcp-multi"}) {
    const auto set = shipped_exemplar_set(name);
    CHECK(set.task == Task::lcp);
    CHECK_FALSE(set.exemplars.empty());
  }
  CHECK_THROWS_AS(shipped_exemplar_set("nope"), ConfigError);
}

TEST_CASE("config validation") {
  PromptConfig cfg;
  cfg.regime = Regime::few_shot;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.exemplars = exemplars_from_examples({[] {
                                             Example e;
                                             e.id = "a";
                                             e.sentence = "x";
                                             e.target = "x";
                                             e.gold_probability = 0.3;
                                             return e;
                                           }()},
                                          Task::cwi);
  CHECK(cfg.exemplars[0].answer == "true");
  cfg.cot = true;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.cot = false;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("fine-tune answers") {
  CHECK(finetune_answer(Language::en, true) == "yes");
  CHECK(finetune_answer(Language::de, false) == "nein");
  CHECK(finetune_answer(Language::es, true) == "s\xC3\xAD");
  CHECK(finetune_answer(LikertLabel::Difficult) == "difficult");
}

TEST_CASE("exemplar answer json keeps field order") {
  Exemplar ex{make_example("1", "A b.", "b"), "false", "short"};
  CHECK(exemplar_answer_json(ex, true) ==
        "{\n    \"sentence\": \"A b.\",\n    \"word\": \"b\",\n    \"proof\": \"short\",\n    \"complex\": \"false\"\n}");
  CHECK(exemplar_answer_json(ex, false).find("proof") == std::string::npos);
}

TEST_CASE("lint flags backticks and placeholders") {
  CHECK(lint_example(make_example("1", "plain", "plain")).empty());
  CHECK(lint_example(make_example("1", "a `b`", "b")).size() == 1);
  CHECK(lint_example(make_example("1", "{token}", "x")).size() == 1);
}
