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

#include <chrono>
#include <fstream>
#include <thread>

#include <gtest/gtest.h>

#include "harness_fixture.hpp"
#include "schema_check.hpp"
#include "verdict/service.hpp"
#include "verdict/subprocess.hpp"

namespace verdict {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;

// A live server on an ephemeral port.
class LiveService {
 public:
  explicit LiveService(HarnessConfig cfg) : harness_(std::move(cfg)), service_(harness_) {
    port_ = service_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_.run(); });
    service_.wait_until_ready();
  }
  ~LiveService() {
    service_.stop();
    thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(60, 0);
    return c;
  }
  Service& service() { return service_; }

 private:
  Harness harness_;
  Service service_;
  int port_ = 0;
  std::thread thread_;
};

std::string golden_body() {
  return testutil::read_file(testutil::fixture_dir() / "golden_group.json");
}

TEST(ServiceTest, Health) {
  LiveService s(testutil::test_config());
  auto res = s.client().Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto j = json::parse(res->body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["default_backend"], "logic-prolog");
  ASSERT_EQ(j["backends"].size(), 2u);
  for (const auto& b : j["backends"]) {
    EXPECT_TRUE(b["available"].get<bool>());
    EXPECT_FALSE(b["version"].get<std::string>().empty());
  }
}

TEST(ServiceTest, HealthDegradedAndUnavailable) {
  auto cfg = testutil::test_config();
  cfg.backends[BackendId::FunctionalLisp].executable_path = "/nonexistent/vlisp";
  {
    LiveService s(cfg);
    auto res = s.client().Get("/healthz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body)["status"], "degraded");
  }
  cfg.default_backend = BackendId::FunctionalLisp;
  LiveService s(cfg);
  auto res = s.client().Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 503);
  EXPECT_EQ(json::parse(res->body)["status"], "unavailable");
}

TEST(ServiceTest, ScoreGoldenGroup) {
  LiveService s(testutil::test_config());
  auto res = s.client().Post("/v1/score", golden_body(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  auto j = json::parse(res->body);
  auto errs = testutil::schema_errors(testutil::load_schema("score_response"), j);
  EXPECT_TRUE(errs.empty()) << (errs.empty() ? "" : errs.front());
  EXPECT_EQ(j["group_size"], 4);
  double sum = 0;
  for (const auto& a : j["advantages"]) sum += a.get<double>();
  EXPECT_NEAR(sum / 4, 0.0, 1e-9);
}

TEST(ServiceTest, ErrorStatuses) {
  auto cfg = testutil::test_config();
  cfg.backends[BackendId::FunctionalLisp].executable_path = "/nonexistent/vlisp";
  LiveService s(cfg);
  auto c = s.client();

  auto bad_json = c.Post("/v1/score", "{not json", "application/json");
  ASSERT_TRUE(bad_json);
  EXPECT_EQ(bad_json->status, 400);
  EXPECT_TRUE(json::parse(bad_json->body).contains("error"));

  auto bad_shape = c.Post("/v1/score", R"({"problem_id": "p"})", "application/json");
  ASSERT_TRUE(bad_shape);
  EXPECT_EQ(bad_shape->status, 400);

  auto empty = json::parse(golden_body());
  empty["completions"] = json::array();
  auto g0 = c.Post("/v1/score", empty.dump(), "application/json");
  ASSERT_TRUE(g0);
  EXPECT_EQ(g0->status, 422);

  auto lisp = json::parse(golden_body());
  lisp["backend"] = "functional-lisp";
  auto down = c.Post("/v1/score", lisp.dump(), "application/json");
  ASSERT_TRUE(down);
  EXPECT_EQ(down->status, 503);

  auto job = c.Get("/v1/jobs/job-000000-deadbeef");
  ASSERT_TRUE(job);
  EXPECT_EQ(job->status, 404);

  // The service keeps serving after every failure above.
  auto ok = c.Post("/v1/score", golden_body(), "application/json");
  ASSERT_TRUE(ok);
  EXPECT_EQ(ok->status, 200);
}

json wait_for_job(httplib::Client& c, const std::string& id) {
  auto deadline = std::chrono::steady_clock::now() + 60s;
  while (std::chrono::steady_clock::now() < deadline) {
    auto res = c.Get("/v1/jobs/" + id);
    if (!res || res->status != 200) return json();
    auto j = json::parse(res->body);
    if (j["status"] != "queued" && j["status"] != "running") return j;
    std::this_thread::sleep_for(50ms);
  }
  return json();
}

TEST(ServiceTest, EvaluationJob) {
  testutil::ScratchDir dir;
  LiveService s(testutil::test_config(dir.path()));
  auto c = s.client();
  json body;
  body["dataset_id"] = "gsm8k-test";
  body["checkpoint_label"] = "1000";
  body["generations"] = json::array();
  std::ifstream in(testutil::fixture_dir() / "eval" / "generations5.jsonl");
  for (const auto& g : read_generations(in))
    body["generations"].push_back({{"problem_id", g.problem_id}, {"completions", g.completions}});
  auto res = c.Post("/v1/evaluate", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 202) << res->body;
  std::string id = json::parse(res->body)["job_id"];
  auto j = wait_for_job(c, id);
  ASSERT_EQ(j["status"], "succeeded") << j.dump();
  EXPECT_EQ(j["progress"]["done"], 20);
  EXPECT_EQ(j["report"]["pass_at_k"], 0.8);
  EXPECT_EQ(j["report"]["pass_hat_k"], 0.4);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "gsm8k-test" / "zero-shot" / "1000" / "report.json"));

  body["generations"][0]["completions"].push_back("extra");
  res = c.Post("/v1/evaluate", body.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 202);
  j = wait_for_job(c, json::parse(res->body)["job_id"]);
  EXPECT_EQ(j["status"], "failed");
  EXPECT_NE(j["error"].get<std::string>().find("expected 4"), std::string::npos);
}

TEST(ServiceTest, EvaluationRejectsBadRequests) {
  LiveService s(testutil::test_config());
  auto c = s.client();
  const char* bad[] = {
      R"({"dataset_id": "gsm-symbolic-p1", "generations": []})",
      R"({"dataset_id": "mnist", "generations": []})",
      R"({"dataset_id": "gsm8k-test"})",
      R"({"dataset_id": "gsm8k-test", "generations": [], "dataset_path": "/etc"})",
      R"({"dataset_id": "gsm8k-test", "generations": [], "checkpoint_label": "a/b"})",
  };
  for (const char* b : bad) {
    auto res = c.Post("/v1/evaluate", b, "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << b;
  }
}

TEST(ServiceTest, BackpressureAcrossRequests) {
  auto cfg = testutil::test_config();
  cfg.workers = 2;
  LiveService s(cfg);
  ProcessCounter::instance().reset_peak();
  std::vector<std::thread> clients;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i)
    clients.emplace_back([&] {
      auto res = s.client().Post("/v1/score", golden_body(), "application/json");
      if (res && res->status == 200) ++ok;
    });
  for (auto& t : clients) t.join();
  EXPECT_EQ(ok.load(), 6);
  EXPECT_LE(ProcessCounter::instance().peak(), 2);
}

TEST(ServiceTest, CliParity) {
  LiveService s(testutil::test_config());
  auto res = s.client().Post("/v1/score", golden_body(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200);

  ProcessLimits lim;
  lim.timeout = 60s;
  lim.memory_cap = 0;
  auto fixture = (testutil::fixture_dir() / "golden_group.json").string();
  auto p = run_process({testutil::verdict_cli_path().string(), "score", "--request", fixture}, lim);
  ASSERT_EQ(p.exit_code, 0) << p.err;
  auto cli = without_timing(nlohmann::ordered_json::parse(p.out));
  auto http = without_timing(nlohmann::ordered_json::parse(res->body));
  EXPECT_EQ(cli.dump(), http.dump());
}

TEST(JobTableTest, SnapshotShape) {
  JobTable t;
  auto a = t.create("rosetta20");
  auto b = t.create("rosetta20");
  EXPECT_NE(a->id, b->id);
  EXPECT_EQ(t.find(a->id), a);
  EXPECT_EQ(t.find("missing"), nullptr);
  auto snap = t.snapshot(*a);
  EXPECT_EQ(snap["status"], "queued");
  EXPECT_TRUE(snap["report"].is_null());
  t.set(*a, "failed", std::nullopt, "boom");
  EXPECT_EQ(t.snapshot(*a)["error"], "boom");
}

}  // namespace
}  // namespace verdict
