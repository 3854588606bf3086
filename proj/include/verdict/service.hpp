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

// HTTP front end of the harness.
//
//   POST /v1/score        ScoreRequest -> ScoreResponse
//   POST /v1/evaluate     evaluation job -> 202 {"job_id": ...}
//   GET  /v1/jobs/{id}    job status, with the report once finished
//   GET  /healthz         backend probe report
//
// Handlers are plain functions of the request body so they can be tested
// without a socket.

#pragma once

#include <atomic>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "verdict/harness.hpp"

namespace verdict {

struct HttpReply {
  int status = 200;
  std::string body;
};

inline HttpReply json_reply(int status, const nlohmann::ordered_json& j) {
  return {status, j.dump()};
}

inline HttpReply error_reply(int status, const std::string& message) {
  nlohmann::ordered_json j;
  j["schema_version"] = kWireSchemaVersion;
  j["error"] = message;
  return json_reply(status, j);
}

inline HttpReply handle_score(Harness& h, const std::string& body) {
  try {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw BadRequest(std::string("invalid JSON: ") + e.what());
    }
    return json_reply(200, to_json(h.score(score_request_from_json(j))));
  } catch (const BadRequest& e) {
    return error_reply(400, e.what());
  } catch (const InvariantViolation& e) {
    return error_reply(422, e.what());
  } catch (const BackendUnavailable& e) {
    return error_reply(503, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

inline nlohmann::ordered_json health_json(Harness& h, bool& default_ok) {
  nlohmann::ordered_json j;
  j["schema_version"] = kWireSchemaVersion;
  auto& arr = j["backends"] = nlohmann::ordered_json::array();
  default_ok = false;
  bool all_ok = true;
  for (const auto& s : h.probe_all()) {
    nlohmann::ordered_json b;
    b["id"] = backend_id_name(s.id);
    b["executable"] = s.executable;
    b["available"] = s.probe.ok;
    b["version"] = s.probe.version;
    b["error"] = s.probe.error;
    arr.push_back(std::move(b));
    if (s.id == h.config().default_backend) default_ok = s.probe.ok;
    all_ok = all_ok && s.probe.ok;
  }
  j["default_backend"] = backend_id_name(h.config().default_backend);
  j["workers"] = h.config().worker_count();
  j["status"] = !default_ok ? "unavailable" : all_ok ? "ok" : "degraded";
  return j;
}

inline HttpReply handle_health(Harness& h) {
  bool ok = false;
  auto j = health_json(h, ok);
  return json_reply(ok ? 200 : 503, j);
}

inline EvalRequest eval_request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw BadRequest("request must be a JSON object");
  static const char* kKeys[] = {"schema_version", "dataset_id", "prompt_mode", "checkpoint_label",
                                "regime",         "pad",        "backend",     "length_reward",
                                "k",              "generations"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKeys) known = known || it.key() == k;
    if (!known) throw BadRequest("unknown field '" + it.key() + "'");
  }
  try {
    if (j.contains("schema_version") && j["schema_version"].get<int>() != kWireSchemaVersion)
      throw BadRequest("unsupported schema_version");
    EvalRequest r;
    r.dataset_id = j.at("dataset_id").get<std::string>();
    if (!is_dataset_id(r.dataset_id)) throw BadRequest("unknown dataset id: " + r.dataset_id);
    if (j.contains("prompt_mode")) {
      auto m = parse_prompt_mode(j["prompt_mode"].get<std::string>());
      if (!m) throw BadRequest("prompt_mode must be zero-shot or one-shot");
      r.prompt_mode = *m;
    }
    if (j.contains("checkpoint_label")) r.checkpoint_label = j["checkpoint_label"].get<std::string>();
    check_label(r.checkpoint_label, "checkpoint label");
    if (j.contains("regime")) r.regime = j["regime"].get<std::string>();
    if (j.contains("pad")) r.pad = j["pad"].get<bool>();
    if (j.contains("backend")) {
      r.backend = parse_backend_id(j["backend"].get<std::string>());
      if (!r.backend) throw BadRequest("unknown backend");
    }
    if (j.contains("length_reward")) r.length_reward = j["length_reward"].get<bool>();
    if (j.contains("k")) {
      auto k = j["k"].get<long long>();
      if (k < 1) throw BadRequest("k must be >= 1");
      r.k = static_cast<std::size_t>(k);
    }
    r.generations = generations_from_json(j.at("generations"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw BadRequest(std::string("malformed evaluation request: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Jobs

class JobTable {
 public:
  struct Job {
    std::string id;
    std::string dataset_id;
    std::string status = "queued";  // queued, running, succeeded, failed, cancelled
    std::optional<nlohmann::ordered_json> report;
    std::string error;
    EvalProgress progress;
  };

  std::shared_ptr<Job> create(const std::string& dataset_id) {
    auto job = std::make_shared<Job>();
    job->dataset_id = dataset_id;
    std::lock_guard lock(mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "job-%06zu-%08x", ++counter_, static_cast<unsigned>(rng_()));
    job->id = buf;
    jobs_[job->id] = job;
    return job;
  }

  std::shared_ptr<Job> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(id);
    return it == jobs_.end() ? nullptr : it->second;
  }

  void set(Job& job, std::string status, std::optional<nlohmann::ordered_json> report = {},
           std::string error = {}) {
    std::lock_guard lock(mu_);
    job.status = std::move(status);
    job.report = std::move(report);
    job.error = std::move(error);
  }

  nlohmann::ordered_json snapshot(const Job& job) const {
    std::lock_guard lock(mu_);
    nlohmann::ordered_json j;
    j["schema_version"] = kWireSchemaVersion;
    j["job_id"] = job.id;
    j["dataset_id"] = job.dataset_id;
    j["status"] = job.status;
    j["progress"] = {{"done", job.progress.done.load()}, {"total", job.progress.total.load()}};
    j["report"] = job.report ? *job.report : nlohmann::ordered_json(nullptr);
    j["error"] = job.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(job.error);
    return j;
  }

 private:
  mutable std::mutex mu_;
  std::size_t counter_ = 0;
  std::mt19937 rng_{std::random_device{}()};
  std::map<std::string, std::shared_ptr<Job>> jobs_;
};

class Service {
 public:
  explicit Service(Harness& h) : h_(h) {
    server_.set_payload_max_length(std::size_t{64} << 20);
    server_.Post("/v1/score", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_score(h_, req.body));
    });
    server_.Post("/v1/evaluate", [this](const httplib::Request& req, httplib::Response& res) {
      send(res, submit(req.body));
    });
    server_.Get(R"(/v1/jobs/([A-Za-z0-9_-]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  send(res, job_status(req.matches[1]));
                });
    server_.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
      send(res, handle_health(h_));
    });
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;
  ~Service() { stop(); }

  // Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host, int port) {
    int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
  }

  // Serves until stop(); in-flight requests finish before it returns.
  void run() { server_.listen_after_bind(); }

  void stop() {
    cancel_ = true;
    if (server_.is_running()) server_.stop();
  }

  void wait_until_ready() const { server_.wait_until_ready(); }

  HttpReply submit(const std::string& body) {
    EvalRequest req;
    try {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(body);
      } catch (const nlohmann::json::parse_error& e) {
        throw BadRequest(std::string("invalid JSON: ") + e.what());
      }
      req = eval_request_from_json(j);
      if (!h_.config().datasets.count(req.dataset_id))
        throw BadRequest("no path configured for dataset " + req.dataset_id);
    } catch (const BadRequest& e) {
      return error_reply(400, e.what());
    }
    if (cancel_) return error_reply(503, "shutting down");
    auto job = jobs_.create(req.dataset_id);
    runner_.submit([this, job, req = std::move(req)] { run_job(*job, req); });
    nlohmann::ordered_json j;
    j["schema_version"] = kWireSchemaVersion;
    j["job_id"] = job->id;
    j["status"] = "queued";
    return json_reply(202, j);
  }

  HttpReply job_status(const std::string& id) const {
    auto job = jobs_.find(id);
    if (!job) return error_reply(404, "unknown job " + id);
    return json_reply(200, jobs_.snapshot(*job));
  }

 private:
  static void send(httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  }

  void run_job(JobTable::Job& job, const EvalRequest& req) {
    jobs_.set(job, "running");
    try {
      EvalResult r = h_.evaluate(req, true, &job.progress, &cancel_);
      jobs_.set(job, "succeeded", to_json(r.report));
    } catch (const Cancelled&) {
      jobs_.set(job, "cancelled", std::nullopt, "service shutting down");
    } catch (const std::exception& e) {
      jobs_.set(job, "failed", std::nullopt, e.what());
    }
  }

  Harness& h_;
  httplib::Server server_;
  JobTable jobs_;
  std::atomic<bool> cancel_{false};
  // Jobs run one at a time; each one already fans out over the pool.
  // Declared last so queued jobs drain before the rest is torn down.
  WorkerPool runner_{1};
};

}  // namespace verdict
