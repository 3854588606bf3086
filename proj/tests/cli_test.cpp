// Copyright 2026 The Verdict Authors
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

// Runs the built `verdict` binary and checks output and exit codes.

#include <chrono>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "verdict/subprocess.hpp"
#include "verdict/wire.hpp"

namespace verdict {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), testutil::verdict_cli_path().string());
  ProcessLimits lim;
  lim.timeout = std::chrono::seconds(120);
  lim.memory_cap = 0;
  lim.max_output = std::size_t{8} << 20;
  return run_process(args, lim);
}

std::string fixture(const std::string& rel) { return (testutil::fixture_dir() / rel).string(); }

class CliTest : public ::testing::Test {
 protected:
  // Config with the shipped defaults plus the evaluation fixture.
  std::string write_config(const std::string& extra = "") {
    json j = {{"datasets", {{"gsm8k-test", fixture("eval/gsm_eval5.jsonl")}}},
              {"report_dir", (dir_.path() / "reports").string()}};
    if (!extra.empty()) j.merge_patch(json::parse(extra));
    auto p = dir_.path() / ("config" + std::to_string(n_++) + ".json");
    testutil::write_file(p, j.dump());
    return p.string();
  }

  testutil::ScratchDir dir_;
  int n_ = 0;
};

TEST_F(CliTest, ScoreRequestFile) {
  auto p = cli({"score", "--request", fixture("golden_group.json")});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  auto r = score_response_from_json(json::parse(p.out));
  ASSERT_EQ(r.group_size(), 4u);
  double sum = 0;
  for (double a : r.advantages) sum += a;
  EXPECT_NEAR(sum / 4, 0.0, 1e-9);
  EXPECT_EQ(r.candidates[0].outcome, OutcomeKind::Success);
  EXPECT_EQ(r.regime, "no-KL");
}

TEST_F(CliTest, ScoreCompletionsFile) {
  auto req = json::parse(testutil::read_file(fixture("golden_group.json")));
  std::string lines;
  for (const auto& c : req["completions"]) lines += json({{"text", c}}).dump() + "\n";
  auto path = dir_.path() / "completions.jsonl";
  testutil::write_file(path, lines);
  auto p = cli({"--group-size", "4", "score", "--completions", path.string(), "--problem-id",
                "golden-bakery", "--ground-truth", "18", "--regime", "no-KL"});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  auto from_file = cli({"score", "--request", fixture("golden_group.json")});
  auto a = without_timing(nlohmann::ordered_json::parse(p.out));
  auto b = without_timing(nlohmann::ordered_json::parse(from_file.out));
  b.erase("question");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(CliTest, ScoreFromDatasetUsesChecks) {
  auto gens = testutil::read_file(testutil::data_dir() / "generations" / "rosetta20_reference.jsonl");
  auto first = json::parse(gens.substr(0, gens.find('\n')));
  auto path = dir_.path() / "c.json";
  testutil::write_file(path, first["completions"].dump());
  auto p = cli({"score", "--completions", path.string(), "--problem-id", first["problem_id"],
                "--dataset", "rosetta20"});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  for (const auto& c : json::parse(p.out)["candidates"]) EXPECT_EQ(c["outcome"], "Success");
}

TEST_F(CliTest, GroupSizeMismatchIsDataError) {
  auto p = cli({"--group-size", "3", "score", "--request", fixture("golden_group.json")});
  EXPECT_EQ(p.exit_code, 4);
}

TEST_F(CliTest, LengthRewardFlag) {
  auto p = cli({"--length-reward", "score", "--request", fixture("golden_group.json")});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  auto j = json::parse(p.out);
  EXPECT_TRUE(j["length_reward"].get<bool>());
  EXPECT_EQ(j["candidates"][0]["breakdown"]["length"], 0.0);
}

TEST_F(CliTest, MissingInterpreterExits3) {
  auto cfg = write_config(R"({"backends": {"logic-prolog": {"executable": "/nonexistent/swipl"}}})");
  auto p = cli({"--config", cfg, "score", "--request", fixture("golden_group.json")});
  EXPECT_EQ(p.exit_code, 3) << p.err;
}

TEST_F(CliTest, MalformedConfigExits2) {
  auto bad = dir_.path() / "bad.json";
  testutil::write_file(bad, "{\"group_size\": ");
  EXPECT_EQ(cli({"--config", bad.string(), "score", "--request", fixture("golden_group.json")}).exit_code, 2);
  auto unknown = write_config(R"({"sandbox": {"cpu": 1}})");
  EXPECT_EQ(cli({"--config", unknown, "score", "--request", fixture("golden_group.json")}).exit_code, 2);
  EXPECT_EQ(cli({"--config", "/nonexistent.json", "serve"}).exit_code, 2);
  EXPECT_EQ(cli({"score", "--bogus"}).exit_code, 2);
  EXPECT_EQ(cli({}).exit_code, 2);
  EXPECT_EQ(cli({"--help"}).exit_code, 0);
}

TEST_F(CliTest, ConfigFromEnvironment) {
  auto cfg = write_config(R"({"backends": {"logic-prolog": {"executable": "/nonexistent/swipl"}}})");
  std::vector<std::string> args = {"/usr/bin/env", "VERDICT_CONFIG=" + cfg,
                                   testutil::verdict_cli_path().string(), "score", "--request",
                                   fixture("golden_group.json")};
  ProcessLimits lim;
  lim.timeout = std::chrono::seconds(60);
  lim.memory_cap = 0;
  EXPECT_EQ(run_process(args, lim).exit_code, 3);
}

TEST_F(CliTest, EvaluateFixture) {
  auto cfg = write_config();
  auto p = cli({"--config", cfg, "evaluate", "--dataset", "gsm8k-test", "--generations",
                fixture("eval/generations5.jsonl"), "--prompt-mode", "one-shot", "--checkpoint",
                "1500"});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  EXPECT_NE(p.out.find("pass@4 = 0.800000 (4/5)"), std::string::npos) << p.out;
  EXPECT_NE(p.out.find("pass^4 = 0.400000 (2/5)"), std::string::npos) << p.out;
  auto dir = dir_.path() / "reports" / "gsm8k-test" / "one-shot" / "1500";
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
}

TEST_F(CliTest, EvaluateShapeMismatch) {
  auto cfg = write_config();
  auto gens = dir_.path() / "short.jsonl";
  testutil::write_file(gens, R"({"problem_id": "e1", "completions": ["a", "b"]})" "\n");
  auto p = cli({"--config", cfg, "evaluate", "--dataset", "gsm8k-test", "--generations",
                gens.string()});
  EXPECT_EQ(p.exit_code, 4);
  auto padded = cli({"--config", cfg, "evaluate", "--dataset", "gsm8k-test", "--generations",
                     gens.string(), "--pad"});
  ASSERT_EQ(padded.exit_code, 0) << padded.err;
  EXPECT_NE(padded.out.find("pass@4 = 0.000000 (0/5)"), std::string::npos) << padded.out;
}

TEST_F(CliTest, ReplayCleanAndEdited) {
  auto log = dir_.path() / "score.jsonl";
  auto p = cli({"--length-reward", "score", "--request", fixture("golden_group.json"),
                "--score-log", log.string()});
  ASSERT_EQ(p.exit_code, 0) << p.err;
  auto clean = cli({"replay", log.string()});
  EXPECT_EQ(clean.exit_code, 0) << clean.out << clean.err;

  // Moving the window's lower edge below 3 tokens turns length rewards on.
  auto edited = write_config(R"({"length_reward": {"lower": 0.0001}})");
  auto diff = cli({"--config", edited, "replay", log.string()});
  EXPECT_EQ(diff.exit_code, 1);
  EXPECT_NE(diff.out.find("candidates[0].breakdown.length: 0.0 -> 1.0"), std::string::npos)
      << diff.out;

  auto missing = write_config(R"({"backends": {"logic-prolog": {"executable": "/nonexistent/swipl"}}})");
  EXPECT_EQ(cli({"--config", missing, "replay", log.string()}).exit_code, 3);
}

TEST_F(CliTest, ServeRefusesWithoutDefaultBackend) {
  auto cfg = write_config(R"({"backends": {"logic-prolog": {"executable": "/nonexistent/swipl"}}})");
  EXPECT_EQ(cli({"--config", cfg, "serve", "--bind", "127.0.0.1:0"}).exit_code, 3);
  EXPECT_EQ(cli({"serve", "--bind", "nonsense"}).exit_code, 2);
}

}  // namespace
}  // namespace verdict
