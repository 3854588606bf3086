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

// The harness ties configuration, sandbox, scoring and reports together.
// One Harness is shared by every CLI command and by the HTTP service.

#pragma once

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdict/completion.hpp"
#include "verdict/config.hpp"
#include "verdict/corpus.hpp"
#include "verdict/errors.hpp"
#include "verdict/metrics.hpp"
#include "verdict/reward.hpp"
#include "verdict/sandbox.hpp"
#include "verdict/wire.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {

class UnknownProblem : public std::runtime_error {
 public:
  explicit UnknownProblem(const std::string& id)
      : std::runtime_error("problem not in the dataset: " + id) {}
};

class Cancelled : public std::runtime_error {
 public:
  Cancelled() : std::runtime_error("cancelled") {}
};

// ---------------------------------------------------------------------------
// Score log

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Append-only JSON-lines log of scored groups, one {request, response}
// entry per line.
class ScoreLog {
 public:
  explicit ScoreLog(std::filesystem::path path) : path_(std::move(path)) {}

  void append(const ScoreRequest& req, const ScoreResponse& resp) {
    nlohmann::ordered_json e;
    e["schema_version"] = kWireSchemaVersion;
    e["logged_at"] = utc_timestamp();
    e["request"] = to_json(req);
    e["response"] = to_json(resp);
    std::string line = e.dump() + "\n";
    std::lock_guard lock(mu_);
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << line;
    if (!out) throw std::runtime_error("cannot append to " + path_.string());
  }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

struct LogEntry {
  std::size_t line_no = 0;
  ScoreRequest request;
  ScoreResponse response;
};

inline std::vector<LogEntry> read_score_log(std::istream& in) {
  std::vector<LogEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (all_space(line)) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({line_no, score_request_from_json(j.at("request")),
                     score_response_from_json(j.at("response"))});
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    } catch (const BadRequest& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Recorded generations

struct GenerationSet {
  std::string problem_id;
  std::vector<std::string> completions;
};

// JSON lines: {"problem_id": ..., "completions": [...]}.
inline std::vector<GenerationSet> read_generations(std::istream& in) {
  std::vector<GenerationSet> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (all_space(line)) continue;
    try {
      auto j = nlohmann::json::parse(line);
      GenerationSet g{j.at("problem_id").get<std::string>(),
                      j.at("completions").get<std::vector<std::string>>()};
      if (!seen.insert(g.problem_id).second)
        throw MalformedRecord(line_no, "duplicate problem_id " + g.problem_id);
      out.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  return out;
}

inline std::vector<GenerationSet> generations_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw BadRequest("generations must be an array");
  std::vector<GenerationSet> out;
  std::set<std::string> seen;
  for (const auto& j : arr) {
    try {
      GenerationSet g{j.at("problem_id").get<std::string>(),
                      j.at("completions").get<std::vector<std::string>>()};
      if (!seen.insert(g.problem_id).second)
        throw BadRequest("duplicate problem_id " + g.problem_id);
      out.push_back(std::move(g));
    } catch (const nlohmann::json::exception& e) {
      throw BadRequest(std::string("malformed generations entry: ") + e.what());
    }
  }
  return out;
}

inline void write_generations(std::ostream& out, const std::vector<GenerationSet>& gens) {
  for (const auto& g : gens) {
    nlohmann::ordered_json j;
    j["problem_id"] = g.problem_id;
    j["completions"] = g.completions;
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Evaluation requests

struct EvalRequest {
  std::string dataset_id;
  std::optional<std::filesystem::path> dataset_path;  // overrides the config
  PromptMode prompt_mode = PromptMode::ZeroShot;
  std::string checkpoint_label = "base";
  std::string regime;
  bool pad = false;
  std::optional<BackendId> backend;
  std::optional<bool> length_reward;
  std::size_t k = 0;  // 0 selects the configured group size
  std::vector<GenerationSet> generations;
};

struct EvalResult {
  EvalReport report;
  std::filesystem::path json_path;
  std::filesystem::path csv_path;
};

struct EvalProgress {
  std::atomic<std::size_t> done{0};
  std::atomic<std::size_t> total{0};
};

inline void check_label(const std::string& label, const char* what) {
  if (label.empty() || label == "." || label == ".." ||
      label.find_first_of("/\\") != std::string::npos || label.find('\0') != std::string::npos)
    throw BadRequest(std::string("invalid ") + what + " '" + label + "'");
}

// Candidate slot filled in for a missing completion.
inline CandidateRecord padded_record() {
  CandidateRecord r;
  r.breakdown.correctness = reward::kSyntaxError;
  total_reward(r.breakdown);
  r.outcome = OutcomeKind::SyntaxError;
  r.padded = true;
  return r;
}

// ---------------------------------------------------------------------------
// Harness

struct BackendStatus {
  BackendId id;
  std::string executable;
  ProbeReport probe;
};

class Harness {
 public:
  explicit Harness(HarnessConfig cfg)
      : cfg_((cfg.validate(), std::move(cfg))),
        sandbox_(cfg_.limits, cfg_.worker_count()),
        pool_(cfg_.worker_count()) {
    if (!cfg_.score_log.empty()) log_ = std::make_unique<ScoreLog>(cfg_.score_log);
  }

  const HarnessConfig& config() const noexcept { return cfg_; }
  Sandbox& sandbox() noexcept { return sandbox_; }

  // Registered handle for a configured backend, probing it on first use.
  // A failed probe is retried on the next call.
  BackendHandle backend(BackendId id) {
    {
      std::lock_guard lock(mu_);
      if (auto it = handles_.find(id); it != handles_.end()) return it->second;
    }
    auto spec = cfg_.backends.find(id);
    if (spec == cfg_.backends.end())
      throw BackendUnavailable(std::string(backend_id_name(id)) + ": not configured");
    std::lock_guard probing(probe_mu_);
    {
      std::lock_guard lock(mu_);
      if (auto it = handles_.find(id); it != handles_.end()) return it->second;
    }
    BackendHandle h = sandbox_.register_backend(spec->second);
    std::lock_guard lock(mu_);
    return handles_.emplace(id, h).first->second;
  }

  std::vector<BackendStatus> probe_all() {
    std::vector<BackendStatus> out;
    for (const auto& [id, spec] : cfg_.backends) {
      BackendStatus s{id, spec.executable_path, {}};
      try {
        s.probe = backend(id)->probe();
      } catch (const BackendUnavailable& e) {
        s.probe.error = e.what();
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  ExecutorFn executor(BackendId id) { return sandbox_.executor(backend(id)); }

  LengthRewardConfig length_config(std::optional<bool> enabled) const {
    LengthRewardConfig l = cfg_.length;
    if (enabled) l.enabled = *enabled;
    return l;
  }

  // Scores one group. Throws InvariantViolation for an empty group and
  // BackendUnavailable when the interpreter cannot run.
  ScoreResponse score(const ScoreRequest& req, bool log = true) {
    if (req.completions.empty()) throw InvariantViolation("group has no completions (G = 0)");
    BackendId id = req.backend.value_or(cfg_.default_backend);
    ExecutorFn exec = executor(id);
    Problem problem;
    problem.id = req.problem_id;
    problem.question = req.question.value_or("");
    problem.ground_truth = req.ground_truth;
    problem.checks = req.checks;
    std::vector<Completion> completions;
    for (std::size_t i = 0; i < req.completions.size(); ++i)
      completions.push_back({req.completions[i], i, req.problem_id});
    LengthRewardConfig lcfg = length_config(req.flags.length_reward);
    GroupScore g = score_group(completions, problem, exec, lcfg, &pool_);

    ScoreResponse resp;
    resp.problem_id = req.problem_id;
    resp.question = req.question;
    resp.backend = id;
    resp.regime = req.flags.regime;
    resp.length_reward = lcfg.enabled;
    resp.rewards = g.rewards;
    resp.advantages = g.advantages;
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      const auto& c = g.candidates[i];
      CandidateResult r;
      r.index = i;
      r.outcome = c.outcome.kind;
      if (c.outcome.value) r.value = c.outcome.value->to_string();
      r.breakdown = c.breakdown;
      r.reasoning_tokens = c.reasoning_tokens;
      r.wall_time_ms = c.outcome.wall_ms();
      resp.candidates.push_back(std::move(r));
    }
    if (log && log_) log_->append(req, resp);
    return resp;
  }

  std::vector<Problem> load_problems(const std::string& dataset_id,
                                     const std::optional<std::filesystem::path>& path) const {
    if (!is_dataset_id(dataset_id)) throw BadRequest("unknown dataset id: " + dataset_id);
    std::filesystem::path p;
    if (path) {
      p = *path;
    } else {
      auto it = cfg_.datasets.find(dataset_id);
      if (it == cfg_.datasets.end())
        throw BadRequest("no path configured for dataset " + dataset_id);
      p = it->second;
    }
    LoadOptions opts;
    opts.skip_malformed = cfg_.skip_malformed;
    return load_dataset(dataset_id, p, opts);
  }

  // Scores recorded generations for every problem of a dataset and builds
  // the report. Writes report.json and report.csv when `write` is set.
  EvalResult evaluate(const EvalRequest& req, bool write = true,
                      EvalProgress* progress = nullptr,
                      const std::atomic<bool>* cancel = nullptr) {
    check_label(req.checkpoint_label, "checkpoint label");
    std::size_t k = req.k ? req.k : cfg_.group_size;
    std::vector<Problem> problems = load_problems(req.dataset_id, req.dataset_path);
    if (problems.empty()) throw EmptyMatrix();

    std::map<std::string, const GenerationSet*> by_id;
    for (const auto& g : req.generations) by_id[g.problem_id] = &g;
    std::set<std::string> known;
    for (const auto& p : problems) known.insert(p.id);
    for (const auto& g : req.generations)
      if (!known.count(g.problem_id)) throw UnknownProblem(g.problem_id);

    struct Slot {
      std::size_t problem;
      std::size_t candidate;
    };
    std::vector<ProblemResults> results(problems.size());
    std::vector<Slot> work;
    for (std::size_t i = 0; i < problems.size(); ++i) {
      results[i].problem_id = problems[i].id;
      auto it = by_id.find(problems[i].id);
      std::size_t have = it == by_id.end() ? 0 : it->second->completions.size();
      if (have > k || (have < k && !req.pad))
        throw ShapeMismatch("problem " + problems[i].id + " has " + std::to_string(have) +
                            " completions, expected " + std::to_string(k));
      results[i].candidates.resize(k, padded_record());
      for (std::size_t j = 0; j < have; ++j) work.push_back({i, j});
    }

    BackendId id = req.backend.value_or(cfg_.default_backend);
    ExecutorFn exec = executor(id);
    LengthRewardConfig lcfg = length_config(req.length_reward);
    if (progress) progress->total = work.size();
    pool_.parallel_for(work.size(), [&](std::size_t w) {
      if (cancel && cancel->load()) throw Cancelled();
      const Slot& s = work[w];
      const Problem& p = problems[s.problem];
      Completion c{by_id.at(p.id)->completions[s.candidate], s.candidate, p.id};
      results[s.problem].candidates[s.candidate] =
          CandidateRecord::from(score_candidate(c, p, exec, lcfg));
      if (progress) ++progress->done;
    });

    ReportMeta meta;
    meta.dataset_id = req.dataset_id;
    meta.prompt_mode = req.prompt_mode;
    meta.checkpoint_label = req.checkpoint_label;
    meta.regime = req.regime;
    EvalResult out;
    out.report = build_report(results, meta);
    if (write) {
      auto dir = report_directory(meta);
      std::filesystem::create_directories(dir);
      out.json_path = dir / "report.json";
      out.csv_path = dir / "report.csv";
      std::ofstream(out.json_path, std::ios::binary) << to_json(out.report).dump(2) << '\n';
      std::ofstream(out.csv_path, std::ios::binary) << to_csv(out.report);
    }
    return out;
  }

  // {report_dir}/{dataset}/{prompt_mode}/{checkpoint}
  std::filesystem::path report_directory(const ReportMeta& meta) const {
    return cfg_.report_dir / meta.dataset_id / prompt_mode_name(meta.prompt_mode) /
           meta.checkpoint_label;
  }

 private:
  HarnessConfig cfg_;
  Sandbox sandbox_;
  WorkerPool pool_;
  std::unique_ptr<ScoreLog> log_;
  std::mutex mu_;
  std::mutex probe_mu_;
  std::map<BackendId, BackendHandle> handles_;
};

// ---------------------------------------------------------------------------
// Replay

struct ReplayDiff {
  std::size_t line_no = 0;
  std::string problem_id;
  std::string field;
  std::string logged;
  std::string current;
};

inline std::string format_double(double v) { return nlohmann::json(v).dump(); }

inline void diff_responses(const LogEntry& e, const ScoreResponse& now,
                           std::vector<ReplayDiff>& out) {
  auto add = [&](std::string field, std::string a, std::string b) {
    out.push_back({e.line_no, e.response.problem_id, std::move(field), std::move(a), std::move(b)});
  };
  const ScoreResponse& was = e.response;
  if (was.group_size() != now.group_size()) {
    add("group_size", std::to_string(was.group_size()), std::to_string(now.group_size()));
    return;
  }
  if (was.length_reward != now.length_reward)
    add("length_reward", was.length_reward ? "true" : "false", now.length_reward ? "true" : "false");
  auto num = [&](const std::string& field, double a, double b) {
    if (a != b) add(field, format_double(a), format_double(b));
  };
  for (std::size_t i = 0; i < was.group_size(); ++i) {
    const auto& a = was.candidates[i];
    const auto& b = now.candidates[i];
    std::string p = "candidates[" + std::to_string(i) + "].";
    if (a.outcome != b.outcome) add(p + "outcome", outcome_name(a.outcome), outcome_name(b.outcome));
    if (a.value != b.value) add(p + "value", a.value.value_or("null"), b.value.value_or("null"));
    num(p + "breakdown.xmlcount", a.breakdown.xmlcount, b.breakdown.xmlcount);
    num(p + "breakdown.strict_format", a.breakdown.strict_format, b.breakdown.strict_format);
    num(p + "breakdown.soft_format", a.breakdown.soft_format, b.breakdown.soft_format);
    num(p + "breakdown.correctness", a.breakdown.correctness, b.breakdown.correctness);
    if (a.breakdown.length != b.breakdown.length)
      add(p + "breakdown.length",
          a.breakdown.length ? format_double(*a.breakdown.length) : "null",
          b.breakdown.length ? format_double(*b.breakdown.length) : "null");
    num(p + "breakdown.total", a.breakdown.total, b.breakdown.total);
    if (a.reasoning_tokens != b.reasoning_tokens)
      add(p + "reasoning_tokens", std::to_string(a.reasoning_tokens),
          std::to_string(b.reasoning_tokens));
    num("advantages[" + std::to_string(i) + "]", was.advantages[i], now.advantages[i]);
  }
}

// Re-scores every logged request with the current rules.
inline std::vector<ReplayDiff> replay(Harness& h, const std::vector<LogEntry>& entries) {
  std::vector<ReplayDiff> diffs;
  for (const auto& e : entries) {
    ScoreRequest req = e.request;
    // The logged response records which backend and length setting applied.
    req.backend = e.response.backend;
    req.flags.length_reward = e.response.length_reward;
    diff_responses(e, h.score(req, false), diffs);
  }
  return diffs;
}

}  // namespace verdict
