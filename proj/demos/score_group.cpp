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

// Scores a group of four completions for one word problem with the bundled
// Prolog interpreter, then prints pass@k and pass^k for a small matrix.
//
//   score_group [path/to/vprolog]

#include <cstdio>
#include <string>

#include "verdict/config.hpp"
#include "verdict/harness.hpp"
#include "verdict/metrics.hpp"

#ifndef VERDICT_DEMO_VPROLOG
#define VERDICT_DEMO_VPROLOG "vprolog"
#endif

int main(int argc, char** argv) {
  using namespace verdict;

  HarnessConfig cfg = default_config();
  cfg.backends[BackendId::LogicProlog] =
      InterpreterBackend::prolog(argc > 1 ? argv[1] : VERDICT_DEMO_VPROLOG);
  cfg.length.enabled = true;

  const std::string program = "eggs_left(X) :- Laid = 16, Eaten = 3, Baked = 4, X is (Laid - Eaten - Baked) * 2.";
  auto candidate = [&](const std::string& code, const std::string& query) {
    return "<reasoning>\nSubtract what is used, then multiply by the price.\n</reasoning>\n<code>\n" +
           code + "\n</code>\n<query>\n" + query + "\n</query>";
  };

  ScoreRequest req;
  req.problem_id = "eggs";
  req.ground_truth = normalize_answer("18");
  req.completions = {
      candidate(program, "eggs_left(X)."),
      candidate("eggs_left(X) :- X is 16 - 3 - 4.", "eggs_left(X)."),
      candidate("eggs_left(X) :- X is (16 - 3 - 4 * 2.", "eggs_left(X)."),
      "The answer is 18.",
  };

  try {
    Harness h(cfg);
    ScoreResponse resp = h.score(req);
    std::printf("%-3s %-16s %8s %7s %5s %6s %5s %7s %9s\n", "#", "outcome", "xmlcount", "strict",
                "soft", "corr", "len", "total", "advantage");
    for (const auto& c : resp.candidates) {
      const auto& b = c.breakdown;
      std::printf("%-3zu %-16s %8.3f %7.1f %5.1f %6.1f %5.1f %7.3f %9.4f\n", c.index,
                  outcome_name(c.outcome), b.xmlcount, b.strict_format, b.soft_format,
                  b.correctness, b.length.value_or(0.0), b.total, resp.advantages[c.index]);
    }
  } catch (const BackendUnavailable& e) {
    std::fprintf(stderr, "score_group: %s\n", e.what());
    return 3;
  }

  // Three problems, four samples each.
  OutcomeMatrix m({{true, true, true, true}, {false, true, false, false}, {false, false, false, false}});
  std::printf("pass@4 = %.4f, pass^4 = %.4f\n", pass_at_k(m), pass_hat_k(m));
  return 0;
}
