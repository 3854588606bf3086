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

// Reward components for one candidate and group-relative advantages.
//
//   xmlcount       0.125 per required tag, -0.5 if <query> sits inside <code>
//   strict_format  0.5 when the whole output is exactly the three blocks
//   soft_format    0.5 when a code block and a query block can be extracted
//   correctness    +1 match, -1 wrong value, -0.5 malformed, -0.1 timeout or
//                  silent run
//   length         1 when lower < tokens(reasoning) * scale < upper (opt-in)

#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "verdict/answer.hpp"
#include "verdict/completion.hpp"
#include "verdict/outcome.hpp"
#include "verdict/problem.hpp"
#include "verdict/text.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {

namespace reward {
inline constexpr double kPerTag = 0.125;
inline constexpr double kNestedPenalty = 0.5;
inline constexpr double kStrict = 0.5;
inline constexpr double kSoft = 0.5;
inline constexpr double kSuccess = 1.0;
inline constexpr double kLogicalError = -1.0;
inline constexpr double kSyntaxError = -0.5;
inline constexpr double kTimeoutOrSilent = -0.1;
inline constexpr double kXmlcountMin = -0.5;
inline constexpr double kXmlcountMax = 0.625;
}  // namespace reward

struct RewardBreakdown {
  double xmlcount = 0.0;
  double strict_format = 0.0;
  double soft_format = 0.0;
  double correctness = 0.0;
  std::optional<double> length;  // present only when the length reward is on
  double total = 0.0;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

// ---------------------------------------------------------------------------
// Token counters

using TokenCounter = std::function<std::size_t(std::string_view)>;

class TokenCounterRegistry {
 public:
  static TokenCounterRegistry& instance() {
    static TokenCounterRegistry registry;
    return registry;
  }

  void add(const std::string& name, TokenCounter counter) {
    std::unique_lock lock(mu_);
    counters_[name] = std::move(counter);
  }

  bool contains(const std::string& name) const {
    std::shared_lock lock(mu_);
    return counters_.count(name) != 0;
  }

  std::size_t count(const std::string& name, std::string_view text) const {
    TokenCounter fn;
    {
      std::shared_lock lock(mu_);
      auto it = counters_.find(name);
      if (it == counters_.end())
        throw std::invalid_argument("unknown token counter: " + name);
      fn = it->second;
    }
    return fn(text);
  }

 private:
  TokenCounterRegistry() {
    counters_["whitespace"] = [](std::string_view s) {
      return split_whitespace(s).size();
    };
  }

  mutable std::shared_mutex mu_;
  std::map<std::string, TokenCounter> counters_;
};

inline void register_token_counter(const std::string& name, TokenCounter fn) {
  TokenCounterRegistry::instance().add(name, std::move(fn));
}

inline std::size_t count_tokens(const std::string& counter, std::string_view text) {
  return TokenCounterRegistry::instance().count(counter, text);
}

struct LengthRewardConfig {
  double scale = 1e-4;
  double lower = 0.009;
  double upper = 0.013;
  bool enabled = false;
  std::string counter = "whitespace";

  void validate() const {
    if (!(scale > 0.0)) throw std::invalid_argument("length scale must be > 0");
    if (!(lower < upper))
      throw std::invalid_argument("length bounds need lower < upper");
  }

  friend bool operator==(const LengthRewardConfig&,
                         const LengthRewardConfig&) = default;
};

// ---------------------------------------------------------------------------
// Components

inline double xmlcount_reward(const StructuralReport& report) {
  return reward::kPerTag * report.required_tag_count -
         (report.query_nested_in_code ? reward::kNestedPenalty : 0.0);
}

inline double strict_format_reward(bool strict_match) {
  return strict_match ? reward::kStrict : 0.0;
}

inline double soft_format_reward(bool soft_extractable) {
  return soft_extractable ? reward::kSoft : 0.0;
}

inline double correctness_reward_for(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Success: return reward::kSuccess;
    case OutcomeKind::LogicalMismatch: return reward::kLogicalError;
    case OutcomeKind::SyntaxError: return reward::kSyntaxError;
    case OutcomeKind::Timeout:
    case OutcomeKind::NoOutput: return reward::kTimeoutOrSilent;
  }
  return reward::kSyntaxError;
}

// Turns a Success whose value disagrees with `truth` into LogicalMismatch.
inline ExecutionOutcome grade_outcome(ExecutionOutcome outcome,
                                      const AnswerValue& truth) {
  if (outcome.kind == OutcomeKind::Success &&
      !(outcome.value && compare_answers(*outcome.value, truth)))
    outcome.kind = OutcomeKind::LogicalMismatch;
  return outcome;
}

inline double correctness_reward(const ExecutionOutcome& outcome,
                                 const AnswerValue& truth) {
  return correctness_reward_for(grade_outcome(outcome, truth).kind);
}

namespace detail {

// Exact decimal m * 10^e recovered from the shortest round-trip form of a
// double, so that 0.009 means exactly 9/1000.
struct ExactDecimal {
  BigInt mantissa;
  int exponent = 0;
};

inline ExactDecimal exact_decimal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
  std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
  auto epos = s.find('e');
  std::string digits;
  int frac = 0;
  bool seen_dot = false;
  for (char c : s.substr(0, epos)) {
    if (c == '.') {
      seen_dot = true;
    } else {
      digits += c;
      if (seen_dot) ++frac;
    }
  }
  int exp10 = std::stoi(std::string(s.substr(epos + 1)));
  ExactDecimal d;
  bool negative = !digits.empty() && digits.front() == '-';
  d.mantissa = BigInt(negative ? digits.substr(1) : digits);
  if (negative) d.mantissa = -d.mantissa;
  d.exponent = exp10 - frac;
  return d;
}

// Sign of (a_m * 10^a_e) - (b_m * 10^b_e).
inline int compare_decimal(const ExactDecimal& a, const ExactDecimal& b) {
  BigInt x = a.mantissa, y = b.mantissa;
  int e = std::min(a.exponent, b.exponent);
  for (int i = e; i < a.exponent; ++i) x *= 10;
  for (int i = e; i < b.exponent; ++i) y *= 10;
  return x < y ? -1 : (x > y ? 1 : 0);
}

}  // namespace detail

// Reward for a reasoning length of `tokens`, with both bounds excluded.
inline double length_reward_for_tokens(std::size_t tokens,
                                       const LengthRewardConfig& cfg) {
  auto scaled = detail::exact_decimal(cfg.scale);
  scaled.mantissa *= static_cast<unsigned long long>(tokens);
  bool above = detail::compare_decimal(scaled, detail::exact_decimal(cfg.lower)) > 0;
  bool below = detail::compare_decimal(scaled, detail::exact_decimal(cfg.upper)) < 0;
  return above && below ? 1.0 : 0.0;
}

inline double length_reward(std::string_view reasoning, const LengthRewardConfig& cfg) {
  return length_reward_for_tokens(count_tokens(cfg.counter, reasoning), cfg);
}

inline double total_reward(RewardBreakdown& b) {
  b.total = b.xmlcount + b.strict_format + b.soft_format + b.correctness +
            b.length.value_or(0.0);
  return b.total;
}

// ---------------------------------------------------------------------------
// Candidate and group scoring

// Runs a program/query pair. Throws BackendUnavailable on infrastructure
// failure; every other failure is an outcome.
using Executor =
    std::function<ExecutionOutcome(const std::string& code, const std::string& query)>;

struct CandidateScore {
  RewardBreakdown breakdown;
  ExecutionOutcome outcome;  // graded against the ground truth
  std::size_t reasoning_tokens = 0;
  bool correct() const { return outcome.kind == OutcomeKind::Success; }
};

inline ExecutionOutcome run_checks(const CodeAndQuery& extracted,
                                   const Problem& problem, const Executor& exec) {
  if (problem.checks.empty())
    return grade_outcome(exec(extracted.code, extracted.query), problem.ground_truth);
  ExecutionOutcome last;
  std::chrono::nanoseconds spent{0};
  for (const auto& check : problem.checks) {
    last = grade_outcome(exec(extracted.code, check.query), check.expected);
    spent += last.wall_time;
    if (last.kind != OutcomeKind::Success) break;
  }
  last.wall_time = spent;
  return last;
}

inline CandidateScore score_candidate(const Completion& completion,
                                      const Problem& problem, const Executor& exec,
                                      const LengthRewardConfig& cfg) {
  CandidateScore out;
  ParsedCompletion parsed = parse(completion);
  auto& b = out.breakdown;
  b.xmlcount = xmlcount_reward(parsed.report);
  b.strict_format = strict_format_reward(parsed.report.strict_match);
  b.soft_format = soft_format_reward(parsed.report.soft_extractable);

  if (parsed.report.soft_extractable) {
    out.outcome = run_checks(CodeAndQuery{*parsed.code, *parsed.query}, problem, exec);
  } else {
    out.outcome = ExecutionOutcome::failure(OutcomeKind::SyntaxError,
                                            "no extractable <code>/<query> blocks");
  }
  b.correctness = correctness_reward_for(out.outcome.kind);

  out.reasoning_tokens = count_tokens(cfg.counter, parsed.reasoning.value_or(""));
  if (cfg.enabled) b.length = length_reward_for_tokens(out.reasoning_tokens, cfg);
  total_reward(b);
  return out;
}

// Degenerate groups (all rewards within this spread) get zero advantages.
inline constexpr double kMinGroupStd = 1e-12;

inline std::vector<double> group_advantages(const std::vector<double>& rewards) {
  std::vector<double> adv(rewards.size(), 0.0);
  if (rewards.empty()) return adv;
  double n = static_cast<double>(rewards.size());
  double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  double sd = std::sqrt(var / n);
  if (sd < kMinGroupStd) return adv;
  for (std::size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / sd;
  return adv;
}

struct GroupScore {
  std::size_t group_size = 0;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<RewardBreakdown> breakdowns;
  std::vector<CandidateScore> candidates;
};

// Scores every candidate (concurrently when a pool is given), then
// normalizes the totals within the group.
inline GroupScore score_group(const std::vector<Completion>& completions,
                              const Problem& problem, const Executor& exec,
                              const LengthRewardConfig& cfg,
                              WorkerPool* pool = nullptr) {
  GroupScore g;
  g.group_size = completions.size();
  g.candidates.resize(completions.size());
  auto one = [&](std::size_t i) {
    g.candidates[i] = score_candidate(completions[i], problem, exec, cfg);
  };
  if (pool) {
    pool->parallel_for(completions.size(), one);
  } else {
    for (std::size_t i = 0; i < completions.size(); ++i) one(i);
  }
  for (const auto& c : g.candidates) {
    g.rewards.push_back(c.breakdown.total);
    g.breakdowns.push_back(c.breakdown);
  }
  g.advantages = group_advantages(g.rewards);
  return g;
}

}  // namespace verdict
