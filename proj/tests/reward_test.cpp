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

#include "verdict/reward.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "verdict/errors.hpp"

namespace verdict {
namespace {

StructuralReport report(int count, bool nested) {
  StructuralReport r;
  r.required_tag_count = count;
  r.query_nested_in_code = nested;
  return r;
}

TEST(Xmlcount, Examples) {
  EXPECT_DOUBLE_EQ(xmlcount_reward(report(5, false)), 0.625);
  EXPECT_DOUBLE_EQ(xmlcount_reward(report(0, true)), -0.5);
  EXPECT_DOUBLE_EQ(xmlcount_reward(report(2, false)), 0.25);
}

TEST(FormatRewards, Binary) {
  EXPECT_EQ(strict_format_reward(true), 0.5);
  EXPECT_EQ(strict_format_reward(false), 0.0);
  EXPECT_EQ(soft_format_reward(true), 0.5);
  EXPECT_EQ(soft_format_reward(false), 0.0);
}

TEST(Correctness, RuleTable) {
  auto truth = AnswerValue::integer(18);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::success(AnswerValue::integer(18)), truth), 1.0);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::success(AnswerValue::integer(17)), truth), -1.0);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::failure(OutcomeKind::LogicalMismatch), truth),
            -1.0);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::failure(OutcomeKind::SyntaxError), truth), -0.5);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::failure(OutcomeKind::Timeout), truth), -0.1);
  EXPECT_EQ(correctness_reward(ExecutionOutcome::failure(OutcomeKind::NoOutput), truth), -0.1);
}

TEST(Correctness, OrderingIsStrict) {
  double timeout = correctness_reward_for(OutcomeKind::Timeout);
  double syntax = correctness_reward_for(OutcomeKind::SyntaxError);
  double wrong = correctness_reward_for(OutcomeKind::LogicalMismatch);
  double right = correctness_reward_for(OutcomeKind::Success);
  EXPECT_GT(timeout, syntax);
  EXPECT_GT(syntax, wrong);
  EXPECT_GT(right, timeout);
}

// Independent oracle: with scale 1/10^4 and bounds 9/10^3 and 13/10^3,
// lower < L * scale < upper  <=>  90 < L < 130 in integers.
bool length_oracle(std::size_t tokens) { return tokens * 10 > 900 && tokens * 10 < 1300; }

TEST(LengthReward, BoundaryCounts) {
  LengthRewardConfig cfg;
  cfg.enabled = true;
  const std::size_t counts[] = {89, 90, 91, 129, 130, 131};
  const double expected[] = {0, 0, 1, 1, 0, 0};
  for (std::size_t i = 0; i < 6; ++i)
    EXPECT_EQ(length_reward_for_tokens(counts[i], cfg), expected[i]) << counts[i];
}

TEST(LengthReward, MatchesIntegerOracleOverRange) {
  LengthRewardConfig cfg;
  for (std::size_t n = 0; n < 400; ++n)
    EXPECT_EQ(length_reward_for_tokens(n, cfg), length_oracle(n) ? 1.0 : 0.0) << n;
}

TEST(LengthReward, CountsWhitespaceTokens) {
  LengthRewardConfig cfg;
  auto words = [](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i % 7 == 0 ? "\n w" : " w");
    return s;
  };
  EXPECT_EQ(length_reward(words(100), cfg), 1.0);
  EXPECT_EQ(length_reward(words(90), cfg), 0.0);
  EXPECT_EQ(length_reward("", cfg), 0.0);
}

TEST(LengthReward, PluggableCounter) {
  register_token_counter("chars", [](std::string_view s) { return s.size(); });
  LengthRewardConfig cfg;
  cfg.counter = "chars";
  EXPECT_EQ(length_reward(std::string(100, 'x'), cfg), 1.0);
  cfg.counter = "nope";
  EXPECT_THROW(length_reward("x", cfg), std::invalid_argument);
}

TEST(LengthReward, ConfigValidation) {
  LengthRewardConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lower = 0.02;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.scale = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(TotalReward, SumsOfTableBounds) {
  RewardBreakdown top{0.625, 0.5, 0.5, 1.0, std::nullopt, 0.0};
  EXPECT_EQ(total_reward(top), 2.625);
  EXPECT_EQ(top.total, 2.625);
  RewardBreakdown bottom{-0.5, 0, 0, -1.0, std::nullopt, 0.0};
  EXPECT_EQ(total_reward(bottom), -1.5);
  RewardBreakdown zero{};
  EXPECT_EQ(total_reward(zero), 0.0);
  RewardBreakdown with_len{0.625, 0.5, 0.5, 1.0, 1.0, 0.0};
  EXPECT_EQ(total_reward(with_len), 3.625);
}

TEST(GroupAdvantages, Examples) {
  EXPECT_EQ(group_advantages({1, 1, 1, 1}), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(group_advantages({2, 0}), (std::vector<double>{1, -1}));
  EXPECT_EQ(group_advantages({3}), (std::vector<double>{0}));
  EXPECT_TRUE(group_advantages({}).empty());
}

TEST(GroupAdvantages, Properties) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> r(-1.5, 3.625);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t g = 1 + rng() % 16;
    std::vector<double> rewards(g);
    for (auto& x : rewards) x = r(rng);
    auto adv = group_advantages(rewards);
    ASSERT_EQ(adv.size(), g);
    double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / g;
    EXPECT_NEAR(mean, 0.0, 1e-9);
    if (g > 1) {
      double var = 0;
      for (double a : adv) var += a * a;
      EXPECT_NEAR(var / g, 1.0, 1e-9);
    }
    double shift = r(rng) * 10;
    auto shifted = rewards;
    for (auto& x : shifted) x += shift;
    auto adv2 = group_advantages(shifted);
    for (std::size_t i = 0; i < g; ++i) EXPECT_NEAR(adv[i], adv2[i], 1e-9);
  }
}

// --------------------------------------------------------------------------
// score_candidate with a scripted executor

Executor scripted(ExecutionOutcome o, std::atomic<int>* calls = nullptr) {
  return [o, calls](const std::string&, const std::string&) {
    if (calls) ++*calls;
    return o;
  };
}

Problem word_problem(long truth) {
  Problem p;
  p.id = "w1";
  p.question = "q";
  p.ground_truth = AnswerValue::integer(truth);
  return p;
}

const char* kStrict =
    "<reasoning>three plus four</reasoning>\n<code>total(X) :- X is 3+4.</code>\n"
    "<query>total(X).</query>";

TEST(ScoreCandidate, GoldenCorrectIsMaximal) {
  auto s = score_candidate({kStrict, 0, "w1"}, word_problem(7),
                           scripted(ExecutionOutcome::success(AnswerValue::integer(7))), {});
  EXPECT_EQ(s.breakdown.total, 2.625);
  EXPECT_FALSE(s.breakdown.length.has_value());
  EXPECT_EQ(s.outcome.kind, OutcomeKind::Success);
}

TEST(ScoreCandidate, EmptyCompletionNeverRuns) {
  std::atomic<int> calls = 0;
  auto s = score_candidate({"", 0, "w1"}, word_problem(7),
                           scripted(ExecutionOutcome::success(AnswerValue::integer(7)), &calls),
                           {});
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(s.breakdown.xmlcount, 0.0);
  EXPECT_EQ(s.breakdown.strict_format, 0.0);
  EXPECT_EQ(s.breakdown.soft_format, 0.0);
  EXPECT_EQ(s.breakdown.correctness, -0.5);
  EXPECT_EQ(s.breakdown.total, -0.5);
  EXPECT_EQ(s.outcome.kind, OutcomeKind::SyntaxError);
}

TEST(ScoreCandidate, StrictButLooping) {
  auto s = score_candidate({kStrict, 0, "w1"}, word_problem(7),
                           scripted(ExecutionOutcome::failure(OutcomeKind::Timeout)), {});
  EXPECT_DOUBLE_EQ(s.breakdown.total, 0.625 + 0.5 + 0.5 - 0.1);
}

TEST(ScoreCandidate, WrongValueBecomesLogicalMismatch) {
  auto s = score_candidate({kStrict, 0, "w1"}, word_problem(8),
                           scripted(ExecutionOutcome::success(AnswerValue::integer(7))), {});
  EXPECT_EQ(s.outcome.kind, OutcomeKind::LogicalMismatch);
  EXPECT_EQ(s.breakdown.correctness, -1.0);
}

TEST(ScoreCandidate, LengthComponentOnlyWhenEnabled) {
  LengthRewardConfig cfg;
  cfg.enabled = true;
  std::string reasoning;
  for (int i = 0; i < 100; ++i) reasoning += "w ";
  std::string text = "<reasoning>" + reasoning + "</reasoning><code>a.</code><query>a(X).</query>";
  auto s = score_candidate({text, 0, "w1"}, word_problem(7),
                           scripted(ExecutionOutcome::success(AnswerValue::integer(7))), cfg);
  ASSERT_TRUE(s.breakdown.length.has_value());
  EXPECT_EQ(*s.breakdown.length, 1.0);
  EXPECT_EQ(s.reasoning_tokens, 100u);
  EXPECT_EQ(s.breakdown.total, 3.625);
}

TEST(ScoreCandidate, BackendUnavailablePropagates) {
  Executor broken = [](const std::string&, const std::string&) -> ExecutionOutcome {
    throw BackendUnavailable("gone");
  };
  EXPECT_THROW(score_candidate({kStrict, 0, "w1"}, word_problem(7), broken, {}),
               BackendUnavailable);
}

TEST(ScoreCandidate, ChecksRunInsteadOfCandidateQuery) {
  Problem p = word_problem(0);
  p.checks = {{"f(1,X).", AnswerValue::integer(1)}, {"f(5,X).", AnswerValue::integer(120)}};
  std::vector<std::string> seen;
  std::mutex mu;
  Executor exec = [&](const std::string&, const std::string& q) {
    std::lock_guard lock(mu);
    seen.push_back(q);
    return ExecutionOutcome::success(AnswerValue::integer(q == "f(1,X)." ? 1 : 120));
  };
  auto s = score_candidate({kStrict, 0, "w1"}, p, exec, {});
  EXPECT_EQ(seen, (std::vector<std::string>{"f(1,X).", "f(5,X)."}));
  EXPECT_EQ(s.outcome.kind, OutcomeKind::Success);

  Executor half = [](const std::string&, const std::string& q) {
    return ExecutionOutcome::success(AnswerValue::integer(q == "f(1,X)." ? 1 : 24));
  };
  EXPECT_EQ(score_candidate({kStrict, 0, "w1"}, p, half, {}).outcome.kind,
            OutcomeKind::LogicalMismatch);
}

TEST(ScoreGroup, VectorsAlignAndAdvantagesAreCentered) {
  std::vector<Completion> group = {{kStrict, 0, "w1"}, {"", 1, "w1"}, {kStrict, 2, "w1"},
                                   {"<code>a.</code><query>a(X).</query>", 3, "w1"}};
  WorkerPool pool(3);
  auto g = score_group(group, word_problem(7),
                       scripted(ExecutionOutcome::success(AnswerValue::integer(7))), {}, &pool);
  ASSERT_EQ(g.group_size, 4u);
  ASSERT_EQ(g.rewards.size(), 4u);
  ASSERT_EQ(g.advantages.size(), 4u);
  ASSERT_EQ(g.breakdowns.size(), 4u);
  EXPECT_EQ(g.rewards[0], 2.625);
  EXPECT_EQ(g.rewards[1], -0.5);
  EXPECT_EQ(g.rewards[3], 0.375 + 0.5 + 1.0);
  double mean = std::accumulate(g.advantages.begin(), g.advantages.end(), 0.0) / 4;
  EXPECT_NEAR(mean, 0.0, 1e-9);
  EXPECT_GT(g.advantages[0], g.advantages[3]);
  EXPECT_EQ(g.advantages[0], g.advantages[2]);
}

}  // namespace
}  // namespace verdict
