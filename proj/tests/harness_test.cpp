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

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "harness_fixture.hpp"
#include "schema_check.hpp"
#include "verdict/harness.hpp"

namespace verdict {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<GenerationSet> fixture_generations() {
  std::ifstream in(testutil::fixture_dir() / "eval" / "generations5.jsonl");
  return read_generations(in);
}

ScoreRequest golden_group() {
  return score_request_from_json(
      json::parse(testutil::read_file(testutil::fixture_dir() / "golden_group.json")));
}

EvalRequest fixture_eval() {
  EvalRequest r;
  r.dataset_id = "gsm8k-test";
  r.checkpoint_label = "500";
  r.prompt_mode = PromptMode::OneShot;
  r.regime = "no-KL";
  r.generations = fixture_generations();
  return r;
}

TEST(HarnessScoreTest, GoldenGroupMatchesHandTrace) {
  Harness h(testutil::test_config());
  auto resp = h.score(golden_group());
  ASSERT_EQ(resp.group_size(), 4u);
  ASSERT_EQ(resp.rewards.size(), 4u);
  ASSERT_EQ(resp.advantages.size(), 4u);
  // Every candidate is well formed: 0.625 + 0.5 + 0.5 before correctness.
  const OutcomeKind kinds[] = {OutcomeKind::Success, OutcomeKind::LogicalMismatch,
                               OutcomeKind::SyntaxError, OutcomeKind::NoOutput};
  const double totals[] = {2.625, 0.625, 1.125, 1.525};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(resp.candidates[i].outcome, kinds[i]) << i;
    EXPECT_DOUBLE_EQ(resp.rewards[i], totals[i]) << i;
    EXPECT_DOUBLE_EQ(resp.candidates[i].breakdown.total, totals[i]) << i;
    EXPECT_FALSE(resp.candidates[i].breakdown.length);
  }
  EXPECT_EQ(resp.candidates[0].value, "18");
  EXPECT_EQ(resp.candidates[1].value, "9");
  EXPECT_FALSE(resp.candidates[2].value);
  // Population standard deviation of the hand-traced totals.
  double mean = (2.625 + 0.625 + 1.125 + 1.525) / 4;
  double var = 0;
  for (double t : totals) var += (t - mean) * (t - mean);
  double sd = std::sqrt(var / 4);
  double sum = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(resp.advantages[i], (totals[i] - mean) / sd, 1e-12);
    sum += resp.advantages[i];
  }
  EXPECT_NEAR(sum / 4, 0.0, 1e-9);
  EXPECT_EQ(resp.regime, "no-KL");
  EXPECT_EQ(resp.backend, BackendId::LogicProlog);
}

TEST(HarnessScoreTest, LengthFlagOverridesConfig) {
  Harness h(testutil::test_config());
  auto req = golden_group();
  req.flags.length_reward = true;
  auto resp = h.score(req);
  EXPECT_TRUE(resp.length_reward);
  for (const auto& c : resp.candidates) {
    ASSERT_TRUE(c.breakdown.length);
    EXPECT_EQ(*c.breakdown.length, 0.0);  // three reasoning tokens is far below 90
  }
}

TEST(HarnessScoreTest, EmptyGroupIsInvariantViolation) {
  Harness h(testutil::test_config());
  auto req = golden_group();
  req.completions.clear();
  EXPECT_THROW(h.score(req), InvariantViolation);
}

TEST(HarnessScoreTest, MissingBackendIsUnavailable) {
  auto cfg = testutil::test_config();
  cfg.backends[BackendId::FunctionalLisp].executable_path = "/nonexistent/vlisp";
  Harness h(cfg);
  auto req = golden_group();
  req.backend = BackendId::FunctionalLisp;
  EXPECT_THROW(h.score(req), BackendUnavailable);
  auto status = h.probe_all();
  ASSERT_EQ(status.size(), 2u);
  for (const auto& s : status) EXPECT_EQ(s.probe.ok, s.id == BackendId::LogicProlog);
}

TEST(HarnessScoreTest, InvalidConfigAbortsConstruction) {
  auto cfg = testutil::test_config();
  cfg.group_size = 0;
  EXPECT_THROW(Harness{cfg}, ConfigError);
}

TEST(HarnessEvalTest, FiveProblemFixture) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  auto r = h.evaluate(fixture_eval());
  const auto& rep = r.report;
  EXPECT_EQ(rep.k, 4u);
  EXPECT_EQ(rep.n_problems, 5u);
  // e1, e2, e4, e5 have a correct candidate; e1 and e5 are correct throughout.
  EXPECT_EQ(rep.pass_at_k_ratio.solved, 4u);
  EXPECT_EQ(rep.pass_hat_k_ratio.solved, 2u);
  EXPECT_DOUBLE_EQ(rep.pass_at_k, 0.8);
  EXPECT_DOUBLE_EQ(rep.pass_hat_k, 0.4);
  // Correctness sum: 4 + (2 - 1 - 0.5) + (-4) + (1 - 0.3) + 4 = 5.2 over 20 slots.
  EXPECT_NEAR(rep.component_means.correctness, 0.26, 1e-12);
  EXPECT_NEAR(rep.component_means.total, 1.885, 1e-12);
  EXPECT_DOUBLE_EQ(rep.component_means.xmlcount, 0.625);
  EXPECT_DOUBLE_EQ(rep.component_means.strict_format, 0.5);
  const std::size_t n_correct[] = {4, 2, 0, 1, 4};
  ASSERT_EQ(rep.per_problem.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(rep.per_problem[i].problem_id, "e" + std::to_string(i + 1));
    EXPECT_EQ(rep.per_problem[i].n_correct, n_correct[i]) << i;
    EXPECT_EQ(rep.per_problem[i].n_padded, 0u);
  }
  EXPECT_EQ(rep.per_problem[3].outcomes,
            (std::vector<OutcomeKind>{OutcomeKind::Success, OutcomeKind::NoOutput,
                                      OutcomeKind::NoOutput, OutcomeKind::NoOutput}));
}

TEST(HarnessEvalTest, ReportLayoutAndSchema) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  auto r = h.evaluate(fixture_eval());
  EXPECT_EQ(r.json_path, dir.path() / "gsm8k-test" / "one-shot" / "500" / "report.json");
  EXPECT_EQ(r.csv_path, dir.path() / "gsm8k-test" / "one-shot" / "500" / "report.csv");
  auto j = json::parse(testutil::read_file(r.json_path));
  auto errs = testutil::schema_errors(testutil::load_schema("report"), j);
  EXPECT_TRUE(errs.empty()) << (errs.empty() ? "" : errs.front());
  EXPECT_EQ(j["regime"], "no-KL");
  std::istringstream csv(testutil::read_file(r.csv_path));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 6u);
}

TEST(HarnessEvalTest, StrictShapeMismatch) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  auto req = fixture_eval();
  req.generations[2].completions.pop_back();
  EXPECT_THROW(h.evaluate(req), ShapeMismatch);
  req = fixture_eval();
  req.generations[2].completions.push_back("extra");
  req.pad = true;
  EXPECT_THROW(h.evaluate(req), ShapeMismatch);
  req = fixture_eval();
  req.generations.pop_back();
  EXPECT_THROW(h.evaluate(req), ShapeMismatch);
  EXPECT_FALSE(fs::exists(dir.path() / "gsm8k-test"));
}

TEST(HarnessEvalTest, PaddingScoresMissingSlots) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  auto req = fixture_eval();
  req.pad = true;
  req.generations[2].completions.resize(2);  // e3: two wrong answers kept
  req.generations.pop_back();                // e5: nothing recorded
  auto rep = h.evaluate(req).report;
  EXPECT_EQ(rep.per_problem[2].n_padded, 2u);
  EXPECT_EQ(rep.per_problem[4].n_padded, 4u);
  EXPECT_EQ(rep.per_problem[4].n_correct, 0u);
  EXPECT_EQ(rep.per_problem[4].outcomes, std::vector<OutcomeKind>(4, OutcomeKind::SyntaxError));
  EXPECT_DOUBLE_EQ(rep.per_problem[4].component_stats.correctness, -0.5);
  EXPECT_DOUBLE_EQ(rep.per_problem[4].component_stats.total, -0.5);
  EXPECT_DOUBLE_EQ(rep.per_problem[2].component_stats.correctness, (-1.0 - 1.0 - 0.5 - 0.5) / 4);
  EXPECT_EQ(rep.pass_at_k_ratio.solved, 3u);
  EXPECT_EQ(rep.pass_hat_k_ratio.solved, 1u);
}

TEST(HarnessEvalTest, UnknownProblemAndEmptyDataset) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  auto req = fixture_eval();
  req.generations.push_back({"nope", {"a", "b", "c", "d"}});
  EXPECT_THROW(h.evaluate(req), UnknownProblem);
  req = fixture_eval();
  req.dataset_path = testutil::fixture_dir() / "corpus" / "empty.jsonl";
  EXPECT_THROW(h.evaluate(req), EmptyMatrix);
}

TEST(HarnessEvalTest, BadCheckpointLabel) {
  Harness h(testutil::test_config());
  auto req = fixture_eval();
  req.checkpoint_label = "../escape";
  EXPECT_THROW(h.evaluate(req, false), BadRequest);
}

TEST(HarnessEvalTest, ProgressAndCancel) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  EvalProgress progress;
  h.evaluate(fixture_eval(), false, &progress);
  EXPECT_EQ(progress.total.load(), 20u);
  EXPECT_EQ(progress.done.load(), 20u);
  std::atomic<bool> cancel{true};
  EXPECT_THROW(h.evaluate(fixture_eval(), false, nullptr, &cancel), Cancelled);
}

TEST(HarnessEvalTest, RosettaReferencesSolveEverything) {
  testutil::ScratchDir dir;
  Harness h(testutil::test_config(dir.path()));
  EvalRequest req;
  req.dataset_id = "rosetta20";
  req.checkpoint_label = "reference";
  std::ifstream in(testutil::data_dir() / "generations" / "rosetta20_reference.jsonl");
  req.generations = read_generations(in);
  auto rep = h.evaluate(req).report;
  EXPECT_EQ(rep.n_problems, 20u);
  EXPECT_EQ(rep.pass_at_k, 1.0);
  EXPECT_EQ(rep.pass_hat_k, 1.0);
}

TEST(GenerationsTest, RoundTripAndDuplicates) {
  auto gens = fixture_generations();
  std::stringstream buf;
  write_generations(buf, gens);
  auto back = read_generations(buf);
  ASSERT_EQ(back.size(), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    EXPECT_EQ(back[i].problem_id, gens[i].problem_id);
    EXPECT_EQ(back[i].completions, gens[i].completions);
  }
  std::istringstream dup(R"({"problem_id": "a", "completions": []}
{"problem_id": "a", "completions": []}
)");
  EXPECT_THROW(read_generations(dup), MalformedRecord);
  std::istringstream bad("{\"problem_id\": 1}\n");
  EXPECT_THROW(read_generations(bad), MalformedRecord);
}

TEST(ScoreLogTest, AppendsAndReplaysClean) {
  testutil::ScratchDir dir;
  auto cfg = testutil::test_config();
  cfg.score_log = dir.path() / "score.jsonl";
  {
    Harness h(cfg);
    h.score(golden_group());
    auto req = golden_group();
    req.flags.length_reward = true;
    h.score(req);
  }
  std::ifstream in(cfg.score_log);
  auto entries = read_score_log(in);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].line_no, 1u);
  EXPECT_EQ(entries[1].request.flags.length_reward, true);
  cfg.score_log.clear();
  Harness h(cfg);
  EXPECT_TRUE(replay(h, entries).empty());
}

TEST(ScoreLogTest, EditedLengthWindowIsReported) {
  auto cfg = testutil::test_config();
  Harness before(cfg);
  auto req = golden_group();
  req.flags.length_reward = true;
  // Pad the first completion's reasoning to 100 whitespace tokens.
  std::string words;
  for (int i = 0; i < 100; ++i) words += " w";
  auto pos = req.completions[0].find("</reasoning>");
  req.completions[0].insert(pos, words);
  LogEntry e{7, req, before.score(req, false)};
  ASSERT_EQ(e.response.candidates[0].breakdown.length, 1.0);

  cfg.length.lower = 0.0105;  // 100 tokens -> 0.0100 now falls outside the window
  Harness after(cfg);
  auto diffs = replay(after, {e});
  ASSERT_FALSE(diffs.empty());
  bool length_diff = false;
  for (const auto& d : diffs) {
    EXPECT_EQ(d.line_no, 7u);
    EXPECT_EQ(d.problem_id, "golden-bakery");
    if (d.field == "candidates[0].breakdown.length") {
      length_diff = true;
      EXPECT_EQ(d.logged, "1.0");
      EXPECT_EQ(d.current, "0.0");
    }
  }
  EXPECT_TRUE(length_diff);
}

TEST(ScoreLogTest, MalformedLogLine) {
  std::istringstream in("{\"request\": {}}\n");
  EXPECT_THROW(read_score_log(in), MalformedRecord);
}

}  // namespace
}  // namespace verdict
