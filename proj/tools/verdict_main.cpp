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

// verdict: command-line front end of the harness.
//
//   verdict [global flags] score    --request FILE | --completions FILE ...
//   verdict [global flags] evaluate --dataset ID --generations FILE ...
//   verdict [global flags] serve    [--bind HOST:PORT]
//   verdict [global flags] replay   LOG
//
// Exit codes: 0 ok, 1 replay found differences, 2 configuration error,
// 3 backend unavailable, 4 bad input data.

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "verdict/harness.hpp"
#include "verdict/service.hpp"

#ifndef VERDICT_DATA_DIR
#define VERDICT_DATA_DIR ""
#endif

namespace {

using namespace verdict;

enum Exit { kOk = 0, kDiffers = 1, kConfigError = 2, kBackendError = 3, kDataError = 4 };

struct GlobalFlags {
  std::string config;
  std::string backend;
  std::optional<std::size_t> group_size;
  std::optional<bool> length_reward;
  std::optional<std::size_t> workers;
};

HarnessConfig build_config(const GlobalFlags& g) {
  HarnessConfig c = default_config(VERDICT_DATA_DIR);
  std::string path = g.config;
  if (path.empty())
    if (const char* env = std::getenv("VERDICT_CONFIG")) path = env;
  if (!path.empty()) c = load_config(path, std::move(c));
  apply_environment(c);
  if (!g.backend.empty()) {
    auto id = parse_backend_id(g.backend);
    if (!id) throw ConfigError("unknown backend id: " + g.backend);
    c.default_backend = *id;
  }
  if (g.group_size) {
    if (*g.group_size == 0) throw ConfigError("--group-size must be >= 1");
    c.group_size = *g.group_size;
  }
  if (g.length_reward) c.length.enabled = *g.length_reward;
  if (g.workers) c.workers = *g.workers;
  c.validate();
  return c;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_text_file(path);
}

// A JSON array of strings, or JSON lines that are each a string or an
// object with a "text" field.
std::vector<std::string> read_completions(const std::string& path) {
  std::string text = read_input(path);
  std::string_view t = trim_view(text);
  std::vector<std::string> out;
  try {
    if (!t.empty() && t.front() == '[') return nlohmann::json::parse(t).get<std::vector<std::string>>();
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (all_space(line)) continue;
      auto j = nlohmann::json::parse(line);
      if (j.is_string()) out.push_back(j.get<std::string>());
      else if (j.is_object() && j.contains("text")) out.push_back(j["text"].get<std::string>());
      else throw MalformedRecord(line_no, "expected a string or an object with \"text\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(0, path + ": " + e.what());
  }
  return out;
}

struct ScoreArgs {
  std::string request;
  std::string completions;
  std::string problem_id;
  std::string ground_truth;
  std::string question;
  std::string dataset;
  std::string data;
  std::string regime;
  std::string output;
  std::string score_log;
};

int run_score(const GlobalFlags& g, const ScoreArgs& a) {
  HarnessConfig cfg = build_config(g);
  if (!a.score_log.empty()) cfg.score_log = a.score_log;
  ScoreRequest req;
  if (!a.request.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_input(a.request));
    } catch (const nlohmann::json::parse_error& e) {
      throw BadRequest(a.request + ": " + e.what());
    }
    req = score_request_from_json(j);
  } else {
    if (a.completions.empty() || a.problem_id.empty())
      throw ConfigError("score needs --request, or --completions with --problem-id");
    req.problem_id = a.problem_id;
    req.completions = read_completions(a.completions);
    if (!a.dataset.empty()) {
      Harness lookup(cfg);
      std::optional<std::filesystem::path> path;
      if (!a.data.empty()) path = a.data;
      bool found = false;
      for (const auto& p : lookup.load_problems(a.dataset, path)) {
        if (p.id != a.problem_id) continue;
        req.ground_truth = p.ground_truth;
        req.checks = p.checks;
        req.question = p.question;
        found = true;
      }
      if (!found) throw UnknownProblem(a.problem_id);
    } else if (!a.ground_truth.empty()) {
      req.ground_truth = normalize_answer(a.ground_truth);
    } else {
      throw ConfigError("score needs --ground-truth or --dataset");
    }
    if (!a.question.empty()) req.question = a.question;
  }
  if (!a.regime.empty()) req.flags.regime = a.regime;
  if (g.group_size && req.completions.size() != *g.group_size)
    throw InvariantViolation("group has " + std::to_string(req.completions.size()) +
                             " completions, --group-size is " + std::to_string(*g.group_size));

  Harness h(cfg);
  std::string doc = to_json(h.score(req)).dump(2) + "\n";
  if (a.output.empty()) {
    std::cout << doc;
  } else {
    std::ofstream(a.output, std::ios::binary) << doc;
  }
  return kOk;
}

struct EvaluateArgs {
  std::string dataset;
  std::string data;
  std::string generations;
  std::string prompt_mode = "zero-shot";
  std::string checkpoint = "base";
  std::string regime;
  std::string report_dir;
  bool pad = false;
};

int run_evaluate(const GlobalFlags& g, const EvaluateArgs& a) {
  HarnessConfig cfg = build_config(g);
  if (!a.report_dir.empty()) cfg.report_dir = a.report_dir;
  EvalRequest req;
  req.dataset_id = a.dataset;
  if (!is_dataset_id(req.dataset_id)) throw ConfigError("unknown dataset id: " + a.dataset);
  if (!a.data.empty()) req.dataset_path = a.data;
  auto mode = parse_prompt_mode(a.prompt_mode);
  if (!mode) throw ConfigError("--prompt-mode must be zero-shot or one-shot");
  req.prompt_mode = *mode;
  req.checkpoint_label = a.checkpoint;
  req.regime = a.regime;
  req.pad = a.pad;
  std::istringstream gens(read_input(a.generations));
  req.generations = read_generations(gens);

  Harness h(cfg);
  EvalResult r = h.evaluate(req);
  const auto& rep = r.report;
  std::printf("dataset %s, %s, checkpoint %s: %zu problems, k = %zu\n", rep.meta.dataset_id.c_str(),
              prompt_mode_name(rep.meta.prompt_mode), rep.meta.checkpoint_label.c_str(),
              rep.n_problems, rep.k);
  std::printf("pass@%zu = %.6f (%zu/%zu)\n", rep.k, rep.pass_at_k, (std::size_t)rep.pass_at_k_ratio.solved,
              (std::size_t)rep.pass_at_k_ratio.total);
  std::printf("pass^%zu = %.6f (%zu/%zu)\n", rep.k, rep.pass_hat_k, (std::size_t)rep.pass_hat_k_ratio.solved,
              (std::size_t)rep.pass_hat_k_ratio.total);
  std::printf("mean reasoning tokens = %.3f\n", rep.component_means.reasoning_tokens);
  std::printf("report: %s\n", r.json_path.string().c_str());
  return kOk;
}

int run_serve(const GlobalFlags& g, const std::string& bind_flag) {
  HarnessConfig cfg = build_config(g);
  if (!bind_flag.empty()) cfg.bind = bind_flag;
  auto addr = parse_bind(cfg.bind);
  if (!addr) throw ConfigError("bind must be host:port, got '" + cfg.bind + "'");

  // Signals are taken synchronously by one thread; every other thread
  // inherits the blocked mask.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  Harness h(cfg);
  h.backend(cfg.default_backend);  // refuse to start without the default interpreter
  Service svc(h);
  int port = svc.bind(addr->host, addr->port);
  std::fprintf(stderr, "verdict: listening on %s:%d\n", addr->host.c_str(), port);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    std::fprintf(stderr, "verdict: signal %d, draining\n", sig);
    svc.stop();
  });
  svc.run();
  // run() also returns when the listener fails; wake the waiter then.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kOk;
}

int run_replay(const GlobalFlags& g, const std::string& log_path) {
  HarnessConfig cfg = build_config(g);
  cfg.score_log.clear();
  std::istringstream in(read_input(log_path));
  auto entries = read_score_log(in);
  Harness h(cfg);
  auto diffs = replay(h, entries);
  for (const auto& d : diffs)
    std::printf("line %zu problem %s %s: %s -> %s\n", d.line_no, d.problem_id.c_str(),
                d.field.c_str(), d.logged.c_str(), d.current.c_str());
  std::printf("replayed %zu entries, %zu differences\n", entries.size(), diffs.size());
  return diffs.empty() ? kOk : kDiffers;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verdict: execution-verified reward and evaluation harness"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "Config file (default: $VERDICT_CONFIG)");
  app.add_option("--backend", g.backend, "Default backend: logic-prolog or functional-lisp");
  app.add_option("--group-size", g.group_size, "Group size G (evaluation k)");
  app.add_flag("--length-reward,!--no-length-reward", g.length_reward,
               "Enable or disable the length reward");
  app.add_option("--workers", g.workers, "Concurrent interpreter processes (0 = CPU count)");

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Score one group of completions");
  score->add_option("--request", sa.request, "ScoreRequest JSON file ('-' for stdin)");
  score->add_option("--completions", sa.completions, "Completions file");
  score->add_option("--problem-id", sa.problem_id, "Problem id");
  score->add_option("--ground-truth", sa.ground_truth, "Expected answer");
  score->add_option("--question", sa.question, "Question text to echo");
  score->add_option("--dataset", sa.dataset, "Take the problem from this dataset");
  score->add_option("--data", sa.data, "Dataset path overriding the config");
  score->add_option("--regime", sa.regime, "Opaque regime label, e.g. no-KL");
  score->add_option("--output,-o", sa.output, "Write the response here instead of stdout");
  score->add_option("--score-log", sa.score_log, "Append to this score log");

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate recorded generations");
  evaluate->add_option("--dataset", ea.dataset, "Dataset id")->required();
  evaluate->add_option("--data", ea.data, "Dataset path overriding the config");
  evaluate->add_option("--generations", ea.generations, "Generations JSONL file")->required();
  evaluate->add_option("--prompt-mode", ea.prompt_mode, "zero-shot or one-shot");
  evaluate->add_option("--checkpoint", ea.checkpoint, "Checkpoint label");
  evaluate->add_option("--regime", ea.regime, "Opaque regime label");
  evaluate->add_option("--report-dir", ea.report_dir, "Report root directory");
  evaluate->add_flag("--pad", ea.pad, "Pad missing completions instead of failing");

  std::string bind;
  auto* serve = app.add_subcommand("serve", "Run the scoring service");
  serve->add_option("--bind", bind, "host:port (default: $VERDICT_BIND or config)");

  std::string log_path;
  auto* rep = app.add_subcommand("replay", "Re-score a score log and report differences");
  rep->add_option("log", log_path, "Score log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*score) return run_score(g, sa);
    if (*evaluate) return run_evaluate(g, ea);
    if (*serve) return run_serve(g, bind);
    if (*rep) return run_replay(g, log_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "verdict: %s\n", e.what());
    return kConfigError;
  } catch (const BackendUnavailable& e) {
    std::fprintf(stderr, "verdict: %s\n", e.what());
    return kBackendError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verdict: %s\n", e.what());
    return kDataError;
  }
  return kConfigError;
}
