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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "verdict/answer.hpp"

namespace verdict {

enum class Source { Gsm8k, GsmSymbolicBase, GsmSymbolicP1, GsmSymbolicP2, Rosetta };
enum class Split { Train, Test };

inline const char* source_name(Source s) {
  switch (s) {
    case Source::Gsm8k: return "gsm8k";
    case Source::GsmSymbolicBase: return "gsm-symbolic-base";
    case Source::GsmSymbolicP1: return "gsm-symbolic-p1";
    case Source::GsmSymbolicP2: return "gsm-symbolic-p2";
    case Source::Rosetta: return "rosetta";
  }
  return "?";
}

inline std::optional<Source> parse_source(std::string_view s) {
  for (auto v : {Source::Gsm8k, Source::GsmSymbolicBase, Source::GsmSymbolicP1,
                 Source::GsmSymbolicP2, Source::Rosetta})
    if (s == source_name(v)) return v;
  return std::nullopt;
}

inline const char* split_name(Split s) { return s == Split::Train ? "train" : "test"; }

enum class PromptMode { ZeroShot, OneShot };

inline const char* prompt_mode_name(PromptMode m) {
  return m == PromptMode::ZeroShot ? "zero-shot" : "one-shot";
}

inline std::optional<PromptMode> parse_prompt_mode(std::string_view s) {
  if (s == "zero-shot") return PromptMode::ZeroShot;
  if (s == "one-shot") return PromptMode::OneShot;
  return std::nullopt;
}

// One executable check: the candidate's program is run against `query`
// instead of its own query block, and must print `expected`.
struct TestCase {
  std::string query;
  AnswerValue expected;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct Problem {
  std::string id;
  std::string question;
  AnswerValue ground_truth;
  Source source = Source::Gsm8k;
  Split split = Split::Test;
  // Empty for word problems, which are checked through the candidate's own
  // query. Task-pack problems carry their test cases here.
  std::vector<TestCase> checks;

  friend bool operator==(const Problem&, const Problem&) = default;
};

}  // namespace verdict
