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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "verdict/answer.hpp"

namespace verdict {

enum class OutcomeKind { Success, LogicalMismatch, SyntaxError, Timeout, NoOutput };

inline constexpr OutcomeKind kAllOutcomeKinds[] = {
    OutcomeKind::Success, OutcomeKind::LogicalMismatch, OutcomeKind::SyntaxError,
    OutcomeKind::Timeout, OutcomeKind::NoOutput};

inline const char* outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Success: return "Success";
    case OutcomeKind::LogicalMismatch: return "LogicalMismatch";
    case OutcomeKind::SyntaxError: return "SyntaxError";
    case OutcomeKind::Timeout: return "Timeout";
    case OutcomeKind::NoOutput: return "NoOutput";
  }
  return "?";
}

inline std::optional<OutcomeKind> parse_outcome_name(std::string_view s) {
  for (auto k : kAllOutcomeKinds)
    if (s == outcome_name(k)) return k;
  return std::nullopt;
}

// Success and LogicalMismatch carry a value; the other kinds never do.
struct ExecutionOutcome {
  OutcomeKind kind = OutcomeKind::NoOutput;
  std::optional<AnswerValue> value;
  std::string stderr_excerpt;
  std::chrono::nanoseconds wall_time{0};

  static ExecutionOutcome success(AnswerValue v) {
    ExecutionOutcome o;
    o.kind = OutcomeKind::Success;
    o.value = std::move(v);
    return o;
  }
  static ExecutionOutcome failure(OutcomeKind k, std::string why = {}) {
    ExecutionOutcome o;
    o.kind = k;
    o.stderr_excerpt = std::move(why);
    return o;
  }

  double wall_ms() const {
    return std::chrono::duration<double, std::milli>(wall_time).count();
  }
};

}  // namespace verdict
