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

// pass@k / pass^k over per-problem candidate outcomes, and the evaluation
// report assembled from scored candidates.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdict/errors.hpp"
#include "verdict/outcome.hpp"
#include "verdict/problem.hpp"
#include "verdict/reward.hpp"

namespace verdict {

// cell(i, j) is true when candidate j of problem i printed the ground truth.
class OutcomeMatrix {
 public:
  OutcomeMatrix() = default;

  OutcomeMatrix(std::size_t n_problems, std::size_t k)
      : k_(k), cells_(n_problems * k, false), n_(n_problems) {}

  explicit OutcomeMatrix(const std::vector<std::vector<bool>>& rows) {
    n_ = rows.size();
    k_ = rows.empty() ? 0 : rows.front().size();
    for (const auto& r : rows) {
      if (r.size() != k_) throw ShapeMismatch("outcome matrix rows differ in length");
      cells_.insert(cells_.end(), r.begin(), r.end());
    }
  }

  std::size_t n_problems() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  bool cell(std::size_t i, std::size_t j) const { return cells_.at(i * k_ + j); }
  void set(std::size_t i, std::size_t j, bool v) { cells_.at(i * k_ + j) = v; }

  bool any_in_row(std::size_t i) const {
    for (std::size_t j = 0; j < k_; ++j)
      if (cell(i, j)) return true;
    return false;
  }
  bool all_in_row(std::size_t i) const {
    for (std::size_t j = 0; j < k_; ++j)
      if (!cell(i, j)) return false;
    return k_ > 0;
  }

 private:
  std::size_t k_ = 0;
  std::vector<bool> cells_;
  std::size_t n_ = 0;
};

// solved / total, reduced only at the final division.
struct Ratio {
  std::uint64_t solved = 0;
  std::uint64_t total = 0;

  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(solved) / static_cast<double>(total);
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

inline Ratio pass_at_k_ratio(const OutcomeMatrix& m) {
  if (m.n_problems() == 0) throw EmptyMatrix();
  Ratio r{0, m.n_problems()};
  for (std::size_t i = 0; i < m.n_problems(); ++i) r.solved += m.any_in_row(i);
  return r;
}

inline Ratio pass_hat_k_ratio(const OutcomeMatrix& m) {
  if (m.n_problems() == 0) throw EmptyMatrix();
  Ratio r{0, m.n_problems()};
  for (std::size_t i = 0; i < m.n_problems(); ++i) r.solved += m.all_in_row(i);
  return r;
}

inline double pass_at_k(const OutcomeMatrix& m) { return pass_at_k_ratio(m).value(); }
inline double pass_hat_k(const OutcomeMatrix& m) { return pass_hat_k_ratio(m).value(); }

// ---------------------------------------------------------------------------
// Reports

struct CandidateRecord {
  RewardBreakdown breakdown;
  OutcomeKind outcome = OutcomeKind::NoOutput;
  std::size_t reasoning_tokens = 0;
  bool padded = false;  // slot filled in for a missing completion

  bool correct() const { return outcome == OutcomeKind::Success; }

  static CandidateRecord from(const CandidateScore& s) {
    return {s.breakdown, s.outcome.kind, s.reasoning_tokens, false};
  }
};

struct ProblemResults {
  std::string problem_id;
  std::vector<CandidateRecord> candidates;
};

struct ComponentStats {
  double xmlcount = 0.0;
  double strict_format = 0.0;
  double soft_format = 0.0;
  double correctness = 0.0;
  std::optional<double> length;
  double total = 0.0;
  double reasoning_tokens = 0.0;
};

struct ProblemSummary {
  std::string problem_id;
  bool solved_any = false;
  bool solved_all = false;
  std::size_t n_correct = 0;
  std::size_t n_padded = 0;
  std::vector<OutcomeKind> outcomes;
  ComponentStats component_stats;
};

struct ReportMeta {
  std::string dataset_id;
  PromptMode prompt_mode = PromptMode::ZeroShot;
  std::string checkpoint_label = "base";
  std::string regime;  // passthrough label, e.g. "no-KL"
};

struct EvalReport {
  ReportMeta meta;
  std::size_t k = 0;
  std::size_t n_problems = 0;
  Ratio pass_at_k_ratio;
  Ratio pass_hat_k_ratio;
  double pass_at_k = 0.0;
  double pass_hat_k = 0.0;
  ComponentStats component_means;  // over every candidate
  std::vector<ProblemSummary> per_problem;
};

namespace detail {

inline ComponentStats mean_components(const std::vector<const CandidateRecord*>& recs) {
  ComponentStats s;
  if (recs.empty()) return s;
  bool any_length = false;
  double length_sum = 0.0;
  for (const auto* r : recs) {
    s.xmlcount += r->breakdown.xmlcount;
    s.strict_format += r->breakdown.strict_format;
    s.soft_format += r->breakdown.soft_format;
    s.correctness += r->breakdown.correctness;
    s.total += r->breakdown.total;
    s.reasoning_tokens += static_cast<double>(r->reasoning_tokens);
    if (r->breakdown.length) {
      any_length = true;
      length_sum += *r->breakdown.length;
    }
  }
  double n = static_cast<double>(recs.size());
  s.xmlcount /= n;
  s.strict_format /= n;
  s.soft_format /= n;
  s.correctness /= n;
  s.total /= n;
  s.reasoning_tokens /= n;
  if (any_length) s.length = length_sum / n;
  return s;
}

}  // namespace detail

inline OutcomeMatrix outcome_matrix(const std::vector<ProblemResults>& results) {
  if (results.empty()) throw EmptyMatrix();
  std::size_t k = results.front().candidates.size();
  if (k == 0) throw ShapeMismatch("problem " + results.front().problem_id + " has no candidates");
  OutcomeMatrix m(results.size(), k);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& row = results[i].candidates;
    if (row.size() != k)
      throw ShapeMismatch("problem " + results[i].problem_id + " has " +
                          std::to_string(row.size()) + " candidates, expected " +
                          std::to_string(k));
    for (std::size_t j = 0; j < k; ++j) m.set(i, j, row[j].correct());
  }
  return m;
}

inline EvalReport build_report(const std::vector<ProblemResults>& results,
                               const ReportMeta& meta) {
  OutcomeMatrix m = outcome_matrix(results);
  EvalReport rep;
  rep.meta = meta;
  rep.k = m.k();
  rep.n_problems = m.n_problems();
  rep.pass_at_k_ratio = pass_at_k_ratio(m);
  rep.pass_hat_k_ratio = pass_hat_k_ratio(m);
  rep.pass_at_k = rep.pass_at_k_ratio.value();
  rep.pass_hat_k = rep.pass_hat_k_ratio.value();

  std::vector<const CandidateRecord*> all;
  for (std::size_t i = 0; i < results.size(); ++i) {
    ProblemSummary p;
    p.problem_id = results[i].problem_id;
    p.solved_any = m.any_in_row(i);
    p.solved_all = m.all_in_row(i);
    std::vector<const CandidateRecord*> row;
    for (const auto& c : results[i].candidates) {
      row.push_back(&c);
      all.push_back(&c);
      p.n_correct += c.correct();
      p.n_padded += c.padded;
      p.outcomes.push_back(c.outcome);
    }
    p.component_stats = detail::mean_components(row);
    rep.per_problem.push_back(std::move(p));
  }
  rep.component_means = detail::mean_components(all);
  return rep;
}

// ---------------------------------------------------------------------------
// Serialization

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::ordered_json to_json(const ComponentStats& s) {
  nlohmann::ordered_json j;
  j["xmlcount"] = s.xmlcount;
  j["strict_format"] = s.strict_format;
  j["soft_format"] = s.soft_format;
  j["correctness"] = s.correctness;
  j["length"] = s.length ? nlohmann::ordered_json(*s.length) : nullptr;
  j["total"] = s.total;
  j["reasoning_tokens"] = s.reasoning_tokens;
  return j;
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["dataset_id"] = r.meta.dataset_id;
  j["prompt_mode"] = prompt_mode_name(r.meta.prompt_mode);
  j["checkpoint_label"] = r.meta.checkpoint_label;
  j["regime"] = r.meta.regime;
  j["k"] = r.k;
  j["n_problems"] = r.n_problems;
  j["pass_at_k"] = r.pass_at_k;
  j["pass_hat_k"] = r.pass_hat_k;
  j["solved_any"] = r.pass_at_k_ratio.solved;
  j["solved_all"] = r.pass_hat_k_ratio.solved;
  j["component_means"] = to_json(r.component_means);
  auto& rows = j["per_problem"] = nlohmann::ordered_json::array();
  for (const auto& p : r.per_problem) {
    nlohmann::ordered_json row;
    row["problem_id"] = p.problem_id;
    row["solved_any"] = p.solved_any;
    row["solved_all"] = p.solved_all;
    row["n_correct"] = p.n_correct;
    row["n_padded"] = p.n_padded;
    auto& kinds = row["outcomes"] = nlohmann::ordered_json::array();
    for (auto k : p.outcomes) kinds.push_back(outcome_name(k));
    row["component_stats"] = to_json(p.component_stats);
    rows.push_back(std::move(row));
  }
  return j;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// One row per problem.
inline std::string to_csv(const EvalReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "dataset_id,prompt_mode,checkpoint_label,problem_id,solved_any,solved_all,"
        "n_correct,k,n_padded,mean_xmlcount,mean_strict_format,mean_soft_format,"
        "mean_correctness,mean_length,mean_total,mean_reasoning_tokens\n";
  for (const auto& p : r.per_problem) {
    const auto& s = p.component_stats;
    os << csv_escape(r.meta.dataset_id) << ',' << prompt_mode_name(r.meta.prompt_mode)
       << ',' << csv_escape(r.meta.checkpoint_label) << ',' << csv_escape(p.problem_id)
       << ',' << (p.solved_any ? 1 : 0) << ',' << (p.solved_all ? 1 : 0) << ','
       << p.n_correct << ',' << r.k << ',' << p.n_padded << ',' << s.xmlcount << ','
       << s.strict_format << ',' << s.soft_format << ',' << s.correctness << ',';
    if (s.length) os << *s.length;
    os << ',' << s.total << ',' << s.reasoning_tokens << '\n';
  }
  return os.str();
}

}  // namespace verdict
