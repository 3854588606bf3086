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

// Harness configuration and fixtures shared by the harness, service and
// acceptance binaries.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"
#include "verdict/config.hpp"
#include "verdict/corpus.hpp"

namespace verdict::testutil {

// Defaults pointing at the interpreters built alongside the tests.
inline HarnessConfig test_config(const std::filesystem::path& report_dir = {}) {
  HarnessConfig c = default_config(data_dir());
  c.backends[BackendId::LogicProlog] = InterpreterBackend::prolog(vprolog_path().string());
  c.backends[BackendId::FunctionalLisp] = InterpreterBackend::lisp(vlisp_path().string());
  c.datasets["gsm8k-test"] = fixture_dir() / "eval" / "gsm_eval5.jsonl";
  if (!report_dir.empty()) c.report_dir = report_dir;
  return c;
}

struct GoldenCase {
  std::string name;
  BackendId backend;
  Problem problem;
  std::string completion;
  OutcomeKind expected_outcome;
  double expected_correctness;
};

inline std::vector<GoldenCase> golden_cases() {
  auto j = nlohmann::json::parse(read_file(fixture_dir() / "golden.json"));
  std::vector<GoldenCase> out;
  for (const auto& c : j.at("cases")) {
    GoldenCase g;
    g.name = c.at("name").get<std::string>();
    g.backend = *parse_backend_id(c.at("backend").get<std::string>());
    const auto& p = c.at("problem");
    g.problem.id = p.at("id").get<std::string>();
    g.problem.question = p.at("question").get<std::string>();
    g.problem.ground_truth = normalize_answer(p.at("ground_truth").get<std::string>());
    if (p.contains("checks"))
      for (const auto& t : p["checks"])
        g.problem.checks.push_back({t.at("query").get<std::string>(),
                                    normalize_answer(t.at("expected").get<std::string>())});
    g.completion = c.at("completion").get<std::string>();
    g.expected_outcome = *parse_outcome_name(c.at("expected_outcome").get<std::string>());
    g.expected_correctness = c.at("expected_correctness").get<double>();
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace verdict::testutil
