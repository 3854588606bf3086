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

// Committed problem/candidate pairs scored through the real interpreters.

#include <chrono>
#include <set>

#include <gtest/gtest.h>

#include "harness_fixture.hpp"
#include "verdict/harness.hpp"

namespace verdict {
namespace {

TEST(GoldenCorpusTest, CoversEveryCorrectnessValue) {
  auto cases = testutil::golden_cases();
  EXPECT_GE(cases.size(), 12u);
  std::set<double> values;
  std::set<OutcomeKind> kinds;
  for (const auto& c : cases) {
    values.insert(c.expected_correctness);
    kinds.insert(c.expected_outcome);
  }
  EXPECT_EQ(values, (std::set<double>{1.0, -1.0, -0.5, -0.1}));
  EXPECT_EQ(kinds.size(), 5u);
}

TEST(GoldenCorpusTest, ScoresExactly) {
  auto cases = testutil::golden_cases();
  auto cfg = testutil::test_config();
  cfg.workers = cases.size();  // no queueing, so elapsed time is the execution's own
  Harness h(cfg);
  std::vector<CandidateScore> got(cases.size());
  std::vector<std::chrono::nanoseconds> took(cases.size());
  WorkerPool pool(cases.size());
  pool.parallel_for(cases.size(), [&](std::size_t i) {
    auto start = std::chrono::steady_clock::now();
    got[i] = score_candidate({cases[i].completion, 0, cases[i].problem.id}, cases[i].problem,
                             h.executor(cases[i].backend), {});
    took[i] = std::chrono::steady_clock::now() - start;
  });
  for (std::size_t i = 0; i < cases.size(); ++i) {
    SCOPED_TRACE(cases[i].name);
    EXPECT_EQ(got[i].outcome.kind, cases[i].expected_outcome) << got[i].outcome.stderr_excerpt;
    EXPECT_EQ(got[i].breakdown.correctness, cases[i].expected_correctness);
    if (cases[i].expected_outcome == OutcomeKind::Timeout)
      EXPECT_LT(took[i], std::chrono::seconds(6));
  }
}

}  // namespace
}  // namespace verdict
