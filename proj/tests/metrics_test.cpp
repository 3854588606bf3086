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

#include "verdict/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "oracles.hpp"

namespace verdict {
namespace {

using Rows = std::vector<std::vector<bool>>;

TEST(PassAtK, Examples) {
  EXPECT_EQ(pass_at_k(OutcomeMatrix(Rows{{true, false, false, false}})), 1.0);
  EXPECT_EQ(pass_at_k(OutcomeMatrix(Rows{{false, false, false, false}, {true, true, true, true}})),
            0.5);
}

TEST(PassHatK, Examples) {
  EXPECT_EQ(pass_hat_k(OutcomeMatrix(Rows{{true, false, false, false}})), 0.0);
  EXPECT_EQ(pass_hat_k(OutcomeMatrix(Rows{{true, true, true, true}})), 1.0);
}

TEST(Metrics, EmptyMatrixThrows) {
  EXPECT_THROW(pass_at_k(OutcomeMatrix(Rows{})), EmptyMatrix);
  EXPECT_THROW(pass_hat_k(OutcomeMatrix(Rows{})), EmptyMatrix);
}

TEST(Metrics, RaggedRowsRejected) {
  EXPECT_THROW(OutcomeMatrix(Rows{{true, false}, {true}}), ShapeMismatch);
}

TEST(Metrics, RandomMatricesMatchBruteForce) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    auto rows = oracle::random_rows(rng, 1 + rng() % 100, 4);
    OutcomeMatrix m(rows);
    auto any = oracle::brute_force_any(rows);
    auto all = oracle::brute_force_all(rows);
    EXPECT_EQ(pass_at_k_ratio(m).solved, any.first);
    EXPECT_EQ(pass_at_k_ratio(m).total, any.second);
    EXPECT_EQ(pass_hat_k_ratio(m).solved, all.first);
    EXPECT_LE(pass_hat_k(m), pass_at_k(m));
  }
}

TEST(Metrics, PermutationInvariance) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto rows = oracle::random_rows(rng, 1 + rng() % 30, 4);
    double a = pass_at_k(OutcomeMatrix(rows)), h = pass_hat_k(OutcomeMatrix(rows));
    for (auto& r : rows) std::shuffle(r.begin(), r.end(), rng);
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_EQ(pass_at_k(OutcomeMatrix(rows)), a);
    EXPECT_EQ(pass_hat_k(OutcomeMatrix(rows)), h);
  }
}

TEST(Metrics, FlippingACellUpNeverHurts) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = oracle::random_rows(rng, 1 + rng() % 20, 4);
    OutcomeMatrix m(rows);
    std::size_t i = rng() % m.n_problems(), j = rng() % 4;
    if (m.cell(i, j)) continue;
    double a = pass_at_k(m), h = pass_hat_k(m);
    m.set(i, j, true);
    EXPECT_GE(pass_at_k(m), a);
    EXPECT_GE(pass_hat_k(m), h);
  }
}

TEST(Metrics, EqualityIffRowsUniform) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto rows = oracle::random_rows(rng, 1 + rng() % 6, 1 + rng() % 4);
    bool uniform = std::all_of(rows.begin(), rows.end(), [](const auto& r) {
      return std::all_of(r.begin(), r.end(), [&](bool b) { return b == r.front(); });
    });
    OutcomeMatrix m(rows);
    EXPECT_EQ(pass_at_k(m) == pass_hat_k(m), uniform);
  }
}

TEST(Metrics, KOneDegenerates) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    OutcomeMatrix m(oracle::random_rows(rng, 1 + rng() % 50, 1));
    EXPECT_EQ(pass_at_k(m), pass_hat_k(m));
  }
}

// --------------------------------------------------------------------------
// build_report

CandidateRecord rec(OutcomeKind k, double total = 0.0, std::size_t tokens = 0) {
  CandidateRecord r;
  r.outcome = k;
  r.breakdown.total = total;
  r.breakdown.correctness = correctness_reward_for(k);
  r.reasoning_tokens = tokens;
  return r;
}

TEST(BuildReport, AllCorrect) {
  std::vector<ProblemResults> res = {
      {"a", std::vector<CandidateRecord>(4, rec(OutcomeKind::Success))},
      {"b", std::vector<CandidateRecord>(4, rec(OutcomeKind::Success))}};
  auto r = build_report(res, {"gsm8k-test", PromptMode::OneShot, "500", ""});
  EXPECT_EQ(r.pass_at_k, 1.0);
  EXPECT_EQ(r.pass_hat_k, 1.0);
  EXPECT_EQ(r.k, 4u);
}

TEST(BuildReport, KOneFixture) {
  std::vector<ProblemResults> res = {{"a", {rec(OutcomeKind::Success)}},
                                     {"b", {rec(OutcomeKind::Timeout)}},
                                     {"c", {rec(OutcomeKind::Success)}}};
  auto r = build_report(res, {});
  EXPECT_EQ(r.pass_at_k, r.pass_hat_k);
  EXPECT_EQ(r.pass_at_k_ratio, (Ratio{2, 3}));
}

TEST(BuildReport, RaggedInputIsShapeMismatch) {
  std::vector<ProblemResults> res = {
      {"a", std::vector<CandidateRecord>(4, rec(OutcomeKind::Success))},
      {"b", std::vector<CandidateRecord>(3, rec(OutcomeKind::Success))}};
  EXPECT_THROW(build_report(res, {}), ShapeMismatch);
  EXPECT_THROW(build_report({}, {}), EmptyMatrix);
}

// Five problems, hand-computed: rows solved-any = {p1,p2,p4} -> 3/5,
// solved-all = {p1} -> 1/5.
TEST(BuildReport, MixedFixtureHandComputed) {
  using K = OutcomeKind;
  std::vector<ProblemResults> res = {
      {"p1", {rec(K::Success, 2.625, 100), rec(K::Success, 2.625, 100),
              rec(K::Success, 2.625, 100), rec(K::Success, 2.625, 100)}},
      {"p2", {rec(K::Success, 2.625, 40), rec(K::LogicalMismatch, 0.625, 40),
              rec(K::SyntaxError, -0.5, 0), rec(K::Timeout, 1.525, 40)}},
      {"p3", {rec(K::SyntaxError, -0.5), rec(K::SyntaxError, -0.5), rec(K::NoOutput, 1.525),
              rec(K::LogicalMismatch, 0.625)}},
      {"p4", {rec(K::LogicalMismatch, 0.625), rec(K::LogicalMismatch, 0.625),
              rec(K::LogicalMismatch, 0.625), rec(K::Success, 2.625)}},
      {"p5", std::vector<CandidateRecord>(4, rec(K::Timeout, 1.525))}};
  auto r = build_report(res, {"rosetta20", PromptMode::ZeroShot, "base", "no-KL"});
  EXPECT_EQ(r.pass_at_k_ratio, (Ratio{3, 5}));
  EXPECT_EQ(r.pass_hat_k_ratio, (Ratio{1, 5}));
  EXPECT_DOUBLE_EQ(r.pass_at_k, 0.6);
  EXPECT_DOUBLE_EQ(r.pass_hat_k, 0.2);
  ASSERT_EQ(r.per_problem.size(), 5u);
  EXPECT_TRUE(r.per_problem[1].solved_any);
  EXPECT_FALSE(r.per_problem[1].solved_all);
  EXPECT_EQ(r.per_problem[1].n_correct, 1u);
  EXPECT_DOUBLE_EQ(r.per_problem[0].component_stats.reasoning_tokens, 100.0);
  EXPECT_DOUBLE_EQ(r.per_problem[1].component_stats.reasoning_tokens, 30.0);
  // Mean of correctness over 20 candidates: 6 successes, 5 mismatches,
  // 3 syntax errors, 6 timeouts/no-output.
  EXPECT_NEAR(r.component_means.correctness, (6 * 1.0 - 5 * 1.0 - 3 * 0.5 - 6 * 0.1) / 20, 1e-12);

  auto j = to_json(r);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["prompt_mode"], "zero-shot");
  EXPECT_EQ(j["regime"], "no-KL");
  EXPECT_EQ(j["per_problem"].size(), 5u);
  EXPECT_EQ(j["solved_any"], 3);

  auto csv = to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(csv.find("rosetta20,zero-shot,base,p2,1,0,1,4,0,"), std::string::npos);
}

TEST(Csv, EscapesDelimiters) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace verdict
