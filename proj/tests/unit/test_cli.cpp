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

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include <json.hpp>

#include "lexcomp/pipeline.hpp"
#include "mock_server.hpp"
#include "test_paths.hpp"

using namespace lexcomp;
using namespace lexcomp::testing;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

CliResult run_cli(const std::string& args, const TempDir& tmp) {
  const std::filesystem::path out = tmp / "stdout.txt";
  const std::filesystem::path err = tmp / "stderr.txt";
  const std::string cmd = quote(LEXCOMP_CLI_PATH) + " " + args + " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

MockReply echo_false(const nlohmann::json& req, std::size_t) {
  const auto [token, sentence] = query_fields(last_user_message(req));
  MockReply reply;
  reply.content = judgment_json(sentence, token, "false");
  return reply;
}

std::string cwi_args(const MockChatServer& server, const TempDir& tmp) {
  return "evaluate --dataset " + quote(fixture("cwi_en_eval.tsv").string()) + " --columns cwi2018 --endpoint " +
         quote(server.url()) + " --api-key-env '' --retry-attempts 1 --output-dir " + quote((tmp / "runs").string());
}

}  // namespace

TEST_CASE("help, version and usage errors") {
  TempDir tmp;
  CHECK(run_cli("--help", tmp).code == 0);
  CHECK(run_cli("--version", tmp).code == 0);
  CHECK(run_cli("", tmp).code == 2);
  CHECK(run_cli("evaluate --no-such-flag", tmp).code == 2);
  const CliResult bad = run_cli("evaluate --task nope --dataset x.tsv", tmp);
  CHECK(bad.code == 2);
  CHECK(bad.err.find("configuration error") != std::string::npos);
}

TEST_CASE("evaluate, replay and report") {
  TempDir tmp;
  MockChatServer server(echo_false);
  const CliResult run = run_cli(cwi_args(server, tmp) + " --max-examples 10 --run-name cwi", tmp);
  INFO(run.err);
  REQUIRE(run.code == 0);
  CHECK(server.requests() == 10);
  CHECK(run.out.find("F1 0.00  Acc") != std::string::npos);
  const std::filesystem::path dir = tmp / "runs/cwi";
  const std::string md = slurp(dir / "report.md");

  std::filesystem::remove(dir / "report.md");
  CHECK(run_cli("evaluate --replay " + quote(dir.string()), tmp).code == 0);
  CHECK(slurp(dir / "report.md") == md);
  const CliResult report = run_cli("report --run " + quote(dir.string()), tmp);
  CHECK(report.code == 0);
  CHECK(report.out == md);
  CHECK(server.requests() == 10);

  // Rerunning the finished configuration sends nothing.
  CHECK(run_cli(cwi_args(server, tmp) + " --max-examples 10 --run-name cwi", tmp).code == 0);
  CHECK(server.requests() == 10);
  // Same directory, different parameters.
  CHECK(run_cli(cwi_args(server, tmp) + " --max-examples 10 --run-name cwi --temperature 0.3", tmp).code == 2);
}

TEST_CASE("settings come from a config file and flags override them") {
  TempDir tmp;
  MockChatServer server(echo_false);
  spit(tmp / "lexcomp.ini", "[evaluate]\nmax-examples = 4\nrun-name = from_file\nseed = 9\n");
  const CliResult r = run_cli("--config " + quote((tmp / "lexcomp.ini").string()) + " " + cwi_args(server, tmp) +
                                  " --seed 3",
                              tmp);
  INFO(r.err);
  REQUIRE(r.code == 0);
  CHECK(server.requests() == 4);
  const RunConfig saved = parse_run_config_json(slurp(tmp / "runs/from_file/run.json"));
  CHECK(saved.max_examples == 4);
  CHECK(saved.seed == 3);
}

TEST_CASE("exit codes for network, validation and file errors") {
  TempDir tmp;
  int dead_port = 0;
  {
    MockChatServer gone(echo_false);
    dead_port = gone.port();
  }
  const std::string dead = "http://127.0.0.1:" + std::to_string(dead_port) + "/v1/chat/completions";
  const CliResult net = run_cli("evaluate --dataset " + quote(fixture("cwi_en_eval.tsv").string()) +
                                    " --columns cwi2018 --max-examples 2 --api-key-env '' --retry-attempts 1 "
                                    "--endpoint " + quote(dead) + " --output-dir " + quote((tmp / "runs").string()),
                                tmp);
  CHECK(net.code == 4);

  spit(tmp / "broken.tsv", "H1\tA sentence here.\t2\t5\twrong\t10\t10\t0\t0\t0\t0\n");
  const CliResult bad = run_cli("evaluate --columns cwi2018 --dataset " + quote((tmp / "broken.tsv").string()), tmp);
  CHECK(bad.code == 3);

  const CliResult missing = run_cli("evaluate --dataset " + quote((tmp / "absent.tsv").string()), tmp);
  CHECK(missing.code == 5);
}

TEST_CASE("prep-finetune writes a balanced JSONL file") {
  TempDir tmp;
  const std::filesystem::path out = tmp / "ft.jsonl";
  const CliResult r = run_cli("prep-finetune --task lcp --source " + quote(fixture("lcp_single_train.tsv").string()) +
                                  " --output " + quote(out.string()),
                              tmp);
  INFO(r.err);
  REQUIRE(r.code == 0);
  const auto records = read_jsonl(out);
  CHECK(records.size() == 250);
  for (const auto& [answer, count] : answer_histogram(records)) CHECK(count == 50);
  CHECK(slurp(out) == slurp(golden("finetune/lcp_single_cap250_seed0.jsonl")));
}

TEST_CASE("fomaml-demo traces are identical across runs") {
  TempDir tmp;
  const std::string args = "fomaml-demo --outer-steps 200 --eval-tasks 10 --seed 5 --output-dir ";
  REQUIRE(run_cli(args + quote((tmp / "a").string()), tmp).code == 0);
  REQUIRE(run_cli(args + quote((tmp / "b").string()), tmp).code == 0);
  const std::string trace = slurp(tmp / "a/fomaml-sine_regression-seed5/trace.csv");
  CHECK(trace == slurp(tmp / "b/fomaml-sine_regression-seed5/trace.csv"));
  CHECK(trace.rfind("step,query_loss\n", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(tmp / "a/fomaml-sine_regression-seed5/summary.json"));
  CHECK(summary["steps_run"] == 200);
  CHECK(run_cli("fomaml-demo --beta 0", tmp).code == 2);
}

TEST_CASE("report on the golden run matches the stored Markdown") {
  TempDir tmp;
  for (const std::string f : {"run.json", "examples.jsonl", "journal.jsonl"}) {
    spit(tmp / f, slurp(golden("run_lcp") / f));
  }
  const CliResult r = run_cli("report --run " + quote(tmp.path().string()), tmp);
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(golden("run_lcp/report.md")));

  const CliResult boot = run_cli("bootstrap-k --run " + quote(tmp.path().string()) + " --metric mae --resamples 10", tmp);
  CHECK(boot.code == 0);
  CHECK(std::filesystem::exists(tmp / "bootstrap_mae.csv"));
  CHECK(boot.out == slurp(tmp / "bootstrap_mae.csv"));

  const CliResult audit = run_cli("audit --run " + quote(tmp.path().string()), tmp);
  CHECK(audit.code == 0);
  CHECK(audit.out.find("W 6.67 +- 9.43") != std::string::npos);

  const CliResult summary =
      run_cli("report --run " + quote(tmp.path().string()) + " --run " + quote(tmp.path().string()), tmp);
  CHECK(summary.code == 0);
  CHECK(summary.out.find("| run |") != std::string::npos);
}

TEST_CASE("split-summary counts partitions") {
  TempDir tmp;
  const CliResult r = run_cli("split-summary --name toy --columns cwi2018 --train " +
                                  quote(fixture("cwi_en_train.tsv").string()) + " --test " +
                                  quote(fixture("cwi_en_eval.tsv").string()),
                              tmp);
  INFO(r.err);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["name"] == "toy");
  CHECK(j["train"] == 600);
  CHECK(j["validation"] == 0);
  CHECK(j["test"] == 50);
}
