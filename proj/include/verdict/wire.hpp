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

// JSON wire format shared by the CLI, the HTTP service and the score log.
// docs/schemas/score_request.schema.json and score_response.schema.json
// describe the documents.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "verdict/answer.hpp"
#include "verdict/problem.hpp"
#include "verdict/reward.hpp"
#include "verdict/sandbox.hpp"

namespace verdict {

inline constexpr int kWireSchemaVersion = 1;

// Structurally invalid request: HTTP 400, CLI data error.
class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed request that violates a scoring invariant: HTTP 422.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoreFlags {
  std::optional<bool> length_reward;  // unset: the server's configured default
  std::string regime;                 // opaque, echoed back

  friend bool operator==(const ScoreFlags&, const ScoreFlags&) = default;
};

struct ScoreRequest {
  std::string problem_id;
  std::optional<std::string> question;
  AnswerValue ground_truth;
  std::optional<BackendId> backend;
  std::vector<std::string> completions;
  std::vector<TestCase> checks;
  ScoreFlags flags;

  friend bool operator==(const ScoreRequest&, const ScoreRequest&) = default;
};

struct CandidateResult {
  std::size_t index = 0;
  OutcomeKind outcome = OutcomeKind::NoOutput;
  std::optional<std::string> value;
  RewardBreakdown breakdown;
  std::size_t reasoning_tokens = 0;
  double wall_time_ms = 0.0;
};

struct ScoreResponse {
  std::string problem_id;
  std::optional<std::string> question;
  BackendId backend = BackendId::LogicProlog;
  std::string regime;
  bool length_reward = false;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<CandidateResult> candidates;

  std::size_t group_size() const { return candidates.size(); }
};

// ---------------------------------------------------------------------------
// Requests

namespace detail {

inline std::string answer_text(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw BadRequest(what + " must be a string or number");
}

}  // namespace detail

inline ScoreRequest score_request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw BadRequest("request must be a JSON object");
  static const char* kKeys[] = {"schema_version", "problem_id", "question", "ground_truth",
                                "backend",        "completions", "checks", "flags"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known = known || it.key() == k;
    if (!known) throw BadRequest("unknown field '" + it.key() + "'");
  }
  if (auto v = j.find("schema_version"); v != j.end()) {
    if (!v->is_number_integer() || v->get<int>() != kWireSchemaVersion)
      throw BadRequest("unsupported schema_version " + v->dump());
  }
  ScoreRequest r;
  auto pid = j.find("problem_id");
  if (pid == j.end() || !pid->is_string()) throw BadRequest("problem_id must be a string");
  r.problem_id = pid->get<std::string>();
  if (auto q = j.find("question"); q != j.end() && !q->is_null()) {
    if (!q->is_string()) throw BadRequest("question must be a string");
    r.question = q->get<std::string>();
  }
  auto gt = j.find("ground_truth");
  if (gt == j.end()) throw BadRequest("missing ground_truth");
  r.ground_truth = normalize_answer(detail::answer_text(*gt, "ground_truth"));
  if (auto b = j.find("backend"); b != j.end() && !b->is_null()) {
    if (!b->is_string()) throw BadRequest("backend must be a string");
    r.backend = parse_backend_id(b->get<std::string>());
    if (!r.backend) throw BadRequest("unknown backend " + b->dump());
  }
  auto cs = j.find("completions");
  if (cs == j.end() || !cs->is_array()) throw BadRequest("completions must be an array");
  for (const auto& c : *cs) {
    if (!c.is_string()) throw BadRequest("every completion must be a string");
    r.completions.push_back(c.get<std::string>());
  }
  if (auto ch = j.find("checks"); ch != j.end() && !ch->is_null()) {
    if (!ch->is_array()) throw BadRequest("checks must be an array");
    for (const auto& t : *ch) {
      if (!t.is_object() || !t.contains("query") || !t["query"].is_string() ||
          !t.contains("expected"))
        throw BadRequest("each check needs a string query and an expected value");
      r.checks.push_back({t["query"].get<std::string>(),
                          normalize_answer(detail::answer_text(t["expected"], "check expected"))});
    }
  }
  if (auto f = j.find("flags"); f != j.end() && !f->is_null()) {
    if (!f->is_object()) throw BadRequest("flags must be an object");
    for (auto it = f->begin(); it != f->end(); ++it) {
      if (it.key() == "length_reward") {
        if (!it->is_boolean()) throw BadRequest("flags.length_reward must be a boolean");
        r.flags.length_reward = it->get<bool>();
      } else if (it.key() == "regime") {
        if (!it->is_string()) throw BadRequest("flags.regime must be a string");
        r.flags.regime = it->get<std::string>();
      } else {
        throw BadRequest("unknown flag '" + it.key() + "'");
      }
    }
  }
  return r;
}

inline nlohmann::ordered_json to_json(const ScoreRequest& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kWireSchemaVersion;
  j["problem_id"] = r.problem_id;
  if (r.question) j["question"] = *r.question;
  j["ground_truth"] = r.ground_truth.to_string();
  if (r.backend) j["backend"] = backend_id_name(*r.backend);
  j["completions"] = r.completions;
  if (!r.checks.empty()) {
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks)
      arr.push_back({{"query", c.query}, {"expected", c.expected.to_string()}});
  }
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  if (r.flags.length_reward) flags["length_reward"] = *r.flags.length_reward;
  if (!r.flags.regime.empty()) flags["regime"] = r.flags.regime;
  j["flags"] = std::move(flags);
  return j;
}

// ---------------------------------------------------------------------------
// Responses

inline nlohmann::ordered_json to_json(const RewardBreakdown& b) {
  nlohmann::ordered_json j;
  j["xmlcount"] = b.xmlcount;
  j["strict_format"] = b.strict_format;
  j["soft_format"] = b.soft_format;
  j["correctness"] = b.correctness;
  j["length"] = b.length ? nlohmann::ordered_json(*b.length) : nullptr;
  j["total"] = b.total;
  return j;
}

inline nlohmann::ordered_json to_json(const ScoreResponse& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kWireSchemaVersion;
  j["problem_id"] = r.problem_id;
  if (r.question) j["question"] = *r.question;
  j["backend"] = backend_id_name(r.backend);
  j["regime"] = r.regime;
  j["length_reward"] = r.length_reward;
  j["group_size"] = r.group_size();
  j["rewards"] = r.rewards;
  j["advantages"] = r.advantages;
  auto& cs = j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : r.candidates) {
    nlohmann::ordered_json o;
    o["index"] = c.index;
    o["outcome"] = outcome_name(c.outcome);
    o["value"] = c.value ? nlohmann::ordered_json(*c.value) : nullptr;
    o["breakdown"] = to_json(c.breakdown);
    o["reasoning_tokens"] = c.reasoning_tokens;
    o["wall_time_ms"] = c.wall_time_ms;
    cs.push_back(std::move(o));
  }
  return j;
}

inline RewardBreakdown breakdown_from_json(const nlohmann::json& j) {
  RewardBreakdown b;
  b.xmlcount = j.at("xmlcount").get<double>();
  b.strict_format = j.at("strict_format").get<double>();
  b.soft_format = j.at("soft_format").get<double>();
  b.correctness = j.at("correctness").get<double>();
  if (!j.at("length").is_null()) b.length = j["length"].get<double>();
  b.total = j.at("total").get<double>();
  return b;
}

inline ScoreResponse score_response_from_json(const nlohmann::json& j) {
  try {
    ScoreResponse r;
    if (j.at("schema_version").get<int>() != kWireSchemaVersion)
      throw BadRequest("unsupported schema_version");
    r.problem_id = j.at("problem_id").get<std::string>();
    if (j.contains("question")) r.question = j["question"].get<std::string>();
    auto b = parse_backend_id(j.at("backend").get<std::string>());
    if (!b) throw BadRequest("unknown backend");
    r.backend = *b;
    r.regime = j.at("regime").get<std::string>();
    r.length_reward = j.at("length_reward").get<bool>();
    r.rewards = j.at("rewards").get<std::vector<double>>();
    r.advantages = j.at("advantages").get<std::vector<double>>();
    for (const auto& c : j.at("candidates")) {
      CandidateResult cr;
      cr.index = c.at("index").get<std::size_t>();
      auto k = parse_outcome_name(c.at("outcome").get<std::string>());
      if (!k) throw BadRequest("unknown outcome");
      cr.outcome = *k;
      if (!c.at("value").is_null()) cr.value = c["value"].get<std::string>();
      cr.breakdown = breakdown_from_json(c.at("breakdown"));
      cr.reasoning_tokens = c.at("reasoning_tokens").get<std::size_t>();
      cr.wall_time_ms = c.at("wall_time_ms").get<double>();
      r.candidates.push_back(std::move(cr));
    }
    if (r.rewards.size() != r.candidates.size() || r.advantages.size() != r.candidates.size())
      throw BadRequest("response vectors differ in length");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw BadRequest(std::string("malformed score response: ") + e.what());
  }
}

// Drops wall times, the only field that differs between two scorings of
// the same request.
inline nlohmann::ordered_json without_timing(nlohmann::ordered_json j) {
  if (j.contains("candidates"))
    for (auto& c : j["candidates"]) c.erase("wall_time_ms");
  return j;
}

}  // namespace verdict
