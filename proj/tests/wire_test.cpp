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

#include <stdlib.h>

#include <string>

#include <gtest/gtest.h>

#include "schema_check.hpp"
#include "test_util.hpp"
#include "verdict/config.hpp"
#include "verdict/wire.hpp"

namespace verdict {
namespace {

using nlohmann::json;
using testutil::load_schema;
using testutil::schema_errors;

json minimal_request() {
  return json::parse(R"({"problem_id": "p", "ground_truth": "18", "completions": ["a", "b"]})");
}

TEST(ScoreRequestTest, Minimal) {
  auto r = score_request_from_json(minimal_request());
  EXPECT_EQ(r.problem_id, "p");
  EXPECT_EQ(r.ground_truth, AnswerValue::integer(18));
  EXPECT_EQ(r.completions.size(), 2u);
  EXPECT_FALSE(r.backend);
  EXPECT_FALSE(r.flags.length_reward);
  EXPECT_TRUE(r.checks.empty());
}

TEST(ScoreRequestTest, FullRoundTrip) {
  auto j = json::parse(R"({
    "schema_version": 1, "problem_id": "fib", "question": "Compute.", "ground_truth": 55,
    "backend": "functional-lisp", "completions": ["x"],
    "checks": [{"query": "fib(10, F).", "expected": 55}, {"query": "fib(0, F).", "expected": "0"}],
    "flags": {"length_reward": true, "regime": "no-KL"}})");
  auto r = score_request_from_json(j);
  EXPECT_EQ(r.backend, BackendId::FunctionalLisp);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_EQ(r.checks[0].expected, AnswerValue::integer(55));
  EXPECT_EQ(r.flags.length_reward, true);
  EXPECT_EQ(r.flags.regime, "no-KL");
  auto back = score_request_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(back, r);
  EXPECT_TRUE(schema_errors(load_schema("score_request"), json::parse(to_json(r).dump())).empty());
}

TEST(ScoreRequestTest, RejectsBadShapes) {
  const char* bad[] = {
      R"([])",
      R"({"ground_truth": "1", "completions": []})",
      R"({"problem_id": 3, "ground_truth": "1", "completions": []})",
      R"({"problem_id": "p", "completions": []})",
      R"({"problem_id": "p", "ground_truth": [1], "completions": []})",
      R"({"problem_id": "p", "ground_truth": "1"})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [1]})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [], "extra": 1})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [], "backend": "python"})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [], "flags": {"kl": 0}})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [], "flags": {"length_reward": 1}})",
      R"({"problem_id": "p", "ground_truth": "1", "completions": [], "checks": [{"query": "q"}]})",
      R"({"schema_version": 2, "problem_id": "p", "ground_truth": "1", "completions": []})",
  };
  for (const char* b : bad) EXPECT_THROW(score_request_from_json(json::parse(b)), BadRequest) << b;
}

TEST(ScoreRequestTest, EmptyGroupParsesButIsNotScored) {
  auto j = minimal_request();
  j["completions"] = json::array();
  EXPECT_NO_THROW(score_request_from_json(j));
}

ScoreResponse sample_response() {
  ScoreResponse r;
  r.problem_id = "p";
  r.question = "Q?";
  r.regime = "standard";
  r.length_reward = true;
  r.rewards = {2.625, -1.0};
  r.advantages = {1.0, -1.0};
  CandidateResult a;
  a.index = 0;
  a.outcome = OutcomeKind::Success;
  a.value = "18";
  a.breakdown = {0.625, 0.5, 0.5, 1.0, 0.0, 2.625};
  a.reasoning_tokens = 12;
  a.wall_time_ms = 4.5;
  CandidateResult b;
  b.index = 1;
  b.outcome = OutcomeKind::Timeout;
  b.breakdown = {0.0, 0.0, 0.0, -0.1, std::nullopt, -0.1};
  r.candidates = {a, b};
  return r;
}

TEST(ScoreResponseTest, RoundTripAndSchema) {
  auto r = sample_response();
  auto j = to_json(r);
  EXPECT_TRUE(schema_errors(load_schema("score_response"), json::parse(j.dump())).empty());
  auto back = score_response_from_json(json::parse(j.dump()));
  EXPECT_EQ(to_json(back).dump(), j.dump());
  EXPECT_EQ(j["group_size"], 2);
  EXPECT_TRUE(j["candidates"][1]["value"].is_null());
  EXPECT_TRUE(j["candidates"][1]["breakdown"]["length"].is_null());
}

TEST(ScoreResponseTest, FieldOrderIsStable) {
  auto j = to_json(sample_response());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "problem_id", "question", "backend",
                                            "regime", "length_reward", "group_size", "rewards",
                                            "advantages", "candidates"}));
}

TEST(ScoreResponseTest, WithoutTimingDropsOnlyWallTime) {
  auto j = without_timing(to_json(sample_response()));
  for (const auto& c : j["candidates"]) {
    EXPECT_FALSE(c.contains("wall_time_ms"));
    EXPECT_TRUE(c.contains("breakdown"));
  }
}

TEST(ScoreResponseTest, RejectsInconsistentVectors) {
  auto j = json::parse(to_json(sample_response()).dump());
  j["rewards"].push_back(0.0);
  EXPECT_THROW(score_response_from_json(j), BadRequest);
}

// ---------------------------------------------------------------------------
// Config

TEST(ConfigTest, DefaultsValidate) {
  auto c = default_config(testutil::data_dir());
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.group_size, 4u);
  EXPECT_EQ(c.limits.wall_timeout, std::chrono::seconds(5));
  EXPECT_EQ(c.limits.memory_cap, std::size_t{512} << 20);
  EXPECT_EQ(c.limits.max_output, std::size_t{64} << 10);
  EXPECT_FALSE(c.length.enabled);
  EXPECT_EQ(c.length.counter, "whitespace");
  EXPECT_EQ(c.bind, "127.0.0.1:8080");
  EXPECT_GE(c.worker_count(), 1u);
  EXPECT_TRUE(c.datasets.count("rosetta20"));
  EXPECT_TRUE(schema_errors(load_schema("config"), json::parse(to_json(c).dump())).empty());
}

TEST(ConfigTest, ShippedConfigLoads) {
  auto path = testutil::data_dir() / "config" / "verdict.json";
  EXPECT_TRUE(schema_errors(load_schema("config"), json::parse(testutil::read_file(path))).empty());
  auto c = load_config(path, HarnessConfig{});
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.datasets.at("rosetta20"), (testutil::data_dir() / "rosetta20").lexically_normal());
  EXPECT_EQ(c.prompts_dir, (testutil::data_dir() / "prompts").lexically_normal());
  EXPECT_EQ(c.default_backend, BackendId::LogicProlog);
}

TEST(ConfigTest, MergeOverrides) {
  auto c = default_config();
  merge_config(c, json::parse(R"({
    "sandbox": {"wall_timeout_ms": 1500, "memory_cap_mb": 128},
    "length_reward": {"enabled": true},
    "group_size": 8, "workers": 3, "default_backend": "functional-lisp",
    "score_log": "logs/score.jsonl", "on_malformed": "skip"})"),
               "/base");
  EXPECT_EQ(c.limits.wall_timeout, std::chrono::milliseconds(1500));
  EXPECT_EQ(c.limits.memory_cap, std::size_t{128} << 20);
  EXPECT_TRUE(c.length.enabled);
  EXPECT_EQ(c.group_size, 8u);
  EXPECT_EQ(c.worker_count(), 3u);
  EXPECT_EQ(c.default_backend, BackendId::FunctionalLisp);
  EXPECT_EQ(c.score_log, "/base/logs/score.jsonl");
  EXPECT_TRUE(c.skip_malformed);
}

TEST(ConfigTest, ExecutablePathsResolve) {
  auto c = default_config();
  merge_config(c, json::parse(R"({"backends": {"logic-prolog": {"executable": "bin/swipl"}}})"), "/opt/x");
  EXPECT_EQ(c.backends.at(BackendId::LogicProlog).executable_path, "/opt/x/bin/swipl");
  merge_config(c, json::parse(R"({"backends": {"logic-prolog": {"executable": "sh"}}})"));
  EXPECT_EQ(std::filesystem::path(c.backends.at(BackendId::LogicProlog).executable_path).filename(), "sh");
  EXPECT_TRUE(std::filesystem::path(c.backends.at(BackendId::LogicProlog).executable_path).is_absolute());
}

TEST(ConfigTest, RejectsBadDocuments) {
  const char* bad[] = {
      R"({"colour": 1})",
      R"({"schema_version": 9})",
      R"({"backends": {"python": {}}})",
      R"({"backends": {"logic-prolog": {"exe": "x"}}})",
      R"({"default_backend": "cobol"})",
      R"({"sandbox": {"wall_timeout_ms": 0}})",
      R"({"sandbox": {"wall_timeout_ms": "5s"}})",
      R"({"group_size": 0})",
      R"({"workers": -1})",
      R"({"datasets": {"gsm8k-train": "x"}})",
      R"({"on_malformed": "ignore"})",
      R"({"length_reward": {"tokens": 3}})",
  };
  for (const char* b : bad) {
    auto c = default_config();
    EXPECT_THROW(merge_config(c, json::parse(b)), ConfigError) << b;
  }
}

TEST(ConfigTest, ValidateCatchesInconsistency) {
  auto c = default_config();
  c.bind = "localhost";
  EXPECT_THROW(c.validate(), ConfigError);
  c = default_config();
  c.length.counter = "bpe";
  EXPECT_THROW(c.validate(), ConfigError);
  c = default_config();
  c.length.lower = 0.02;
  EXPECT_THROW(c.validate(), ConfigError);
  c = default_config();
  c.backends.erase(BackendId::LogicProlog);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConfigTest, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/verdict.json", HarnessConfig{}), ConfigError);
}

TEST(ConfigTest, BindFromEnvironment) {
  auto c = default_config();
  ::setenv("VERDICT_BIND", "0.0.0.0:9999", 1);
  apply_environment(c);
  ::unsetenv("VERDICT_BIND");
  EXPECT_EQ(c.bind, "0.0.0.0:9999");
}

TEST(ConfigTest, ParseBind) {
  auto b = parse_bind("127.0.0.1:8080");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->host, "127.0.0.1");
  EXPECT_EQ(b->port, 8080);
  EXPECT_TRUE(parse_bind("[::1]:0"));
  EXPECT_FALSE(parse_bind(":80"));
  EXPECT_FALSE(parse_bind("host:"));
  EXPECT_FALSE(parse_bind("host:70000"));
  EXPECT_FALSE(parse_bind("host:8o"));
}

}  // namespace
}  // namespace verdict
