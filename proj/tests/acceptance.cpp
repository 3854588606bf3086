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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <stdlib.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "harness_fixture.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "verdict/harness.hpp"
#include "verdict/metrics.hpp"
#include "verdict/reward.hpp"
#include "verdict/sandbox.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {
namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

struct Result {
  bool ok = true;
  std::string detail;
};

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Published component ranges, written out independently of the library.
bool in_table(const RewardBreakdown& b, bool length_on, std::string& why) {
  auto one_of = [](double v, std::initializer_list<double> xs) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
  };
  if (b.xmlcount < -0.5 || b.xmlcount > 0.625) why = "xmlcount " + std::to_string(b.xmlcount);
  else if (!one_of(b.strict_format, {0.0, 0.5})) why = "strict " + std::to_string(b.strict_format);
  else if (!one_of(b.soft_format, {0.0, 0.5})) why = "soft " + std::to_string(b.soft_format);
  else if (!one_of(b.correctness, {-1.0, -0.5, 1.0, -0.1}))
    why = "correctness " + std::to_string(b.correctness);
  else if (length_on != b.length.has_value()) why = "length presence";
  else if (b.length && !one_of(*b.length, {0.0, 1.0})) why = "length " + std::to_string(*b.length);
  else if (b.total != b.xmlcount + b.strict_format + b.soft_format + b.correctness +
                          b.length.value_or(0.0))
    why = "total";
  else if (b.strict_format > b.soft_format) why = "strict without soft";
  return why.empty();
}

// Structural mutations of a well-formed completion.
template <typename Rng>
std::string mutate(Rng& rng, std::string text) {
  static const std::vector<std::string> tags = {"<reasoning>", "</reasoning>", "<code>",
                                                "</code>",     "<query>",      "</query>"};
  int edits = static_cast<int>(rng() % 4);
  for (int e = 0; e < edits; ++e) {
    switch (rng() % 5) {
      case 0: {  // drop a tag
        const auto& t = tags[rng() % tags.size()];
        if (auto p = text.find(t); p != std::string::npos) text.erase(p, t.size());
        break;
      }
      case 1: {  // move the query block into the code block
        auto q = text.find("<query>");
        auto qe = text.find("</query>");
        auto c = text.find("</code>");
        if (q != std::string::npos && qe != std::string::npos && c != std::string::npos && c < q) {
          std::string block = text.substr(q, qe + 8 - q);
          text.erase(q, qe + 8 - q);
          text.insert(c, block + "\n");
        }
        break;
      }
      case 2:
        text += "\ntrailing words";
        break;
      case 3:
        text.insert(rng() % (text.size() + 1), tags[rng() % tags.size()]);
        break;
      default:
        if (!text.empty()) text.resize(rng() % text.size());
    }
  }
  return text;
}

// ---------------------------------------------------------------------------

Result reward_ranges() {
  std::mt19937_64 rng(20260101);
  Problem problem;
  problem.id = "fuzz";
  problem.ground_truth = normalize_answer("18");
  LengthRewardConfig on;
  on.enabled = true;
  LengthRewardConfig off;

  auto mocked = [&](const std::string&, const std::string&) {
    switch (rng() % 5) {
      case 0: return ExecutionOutcome::success(normalize_answer("18"));
      case 1: return ExecutionOutcome::success(normalize_answer(std::to_string(rng() % 40)));
      case 2: return ExecutionOutcome::failure(OutcomeKind::SyntaxError);
      case 3: return ExecutionOutcome::failure(OutcomeKind::Timeout);
      default: return ExecutionOutcome::failure(OutcomeKind::NoOutput);
    }
  };

  auto start = clock_type::now();
  std::size_t violations = 0;
  std::string first;
  std::set<double> seen_correctness;
  const std::size_t n_mocked = 10000;
  for (std::size_t i = 0; i < n_mocked; ++i) {
    std::string text = testutil::random_tagged_text(rng);
    if (rng() % 3 == 0) text = mutate(rng, text);
    bool length_on = rng() % 2;
    auto s = score_candidate({text, 0, "fuzz"}, problem, mocked, length_on ? on : off);
    std::string why;
    if (!in_table(s.breakdown, length_on, why) && violations++ == 0) first = why;
    seen_correctness.insert(s.breakdown.correctness);
  }
  double mocked_s = seconds_since(start);

  // Real interpreter samples: mutated golden completions.
  auto cases = testutil::golden_cases();
  cases.erase(std::remove_if(cases.begin(), cases.end(),
                             [](const auto& c) { return c.expected_outcome == OutcomeKind::Timeout; }),
              cases.end());
  auto cfg = testutil::test_config();
  cfg.limits.wall_timeout = std::chrono::seconds(2);
  Harness h(cfg);
  const std::size_t n_real = 200;
  std::vector<std::pair<std::size_t, std::string>> samples;
  for (std::size_t i = 0; i < n_real; ++i) {
    std::size_t c = rng() % cases.size();
    samples.push_back({c, i % 4 == 0 ? cases[c].completion : mutate(rng, cases[c].completion)});
  }
  std::vector<RewardBreakdown> real(n_real);
  WorkerPool pool(cfg.worker_count());
  pool.parallel_for(n_real, [&](std::size_t i) {
    const auto& gc = cases[samples[i].first];
    real[i] = score_candidate({samples[i].second, 0, gc.problem.id}, gc.problem,
                              h.executor(gc.backend), on)
                  .breakdown;
  });
  for (const auto& b : real) {
    std::string why;
    if (!in_table(b, true, why) && violations++ == 0) first = why;
    seen_correctness.insert(b.correctness);
  }

  Result r;
  r.ok = violations == 0 && mocked_s < 120.0 && seen_correctness.size() == 4;
  r.detail = std::to_string(n_mocked) + " mocked + " + std::to_string(n_real) +
             " real completions, " + std::to_string(violations) + " violations" +
             (first.empty() ? "" : " (first: " + first + ")") + ", mocked pass " +
             fmt("%.2f s", mocked_s) + ", " + std::to_string(seen_correctness.size()) +
             " correctness values seen";
  return r;
}

Result golden_table() {
  auto cases = testutil::golden_cases();
  auto cfg = testutil::test_config();
  cfg.workers = cases.size();
  Harness h(cfg);
  LengthRewardConfig off;
  std::vector<CandidateScore> got(cases.size());
  std::vector<double> secs(cases.size());
  WorkerPool pool(cases.size());
  pool.parallel_for(cases.size(), [&](std::size_t i) {
    auto t = clock_type::now();
    got[i] = score_candidate({cases[i].completion, 0, cases[i].problem.id}, cases[i].problem,
                             h.executor(cases[i].backend), off);
    secs[i] = seconds_since(t);
  });
  Result r;
  std::set<OutcomeKind> kinds;
  std::set<double> values;
  double slowest_timeout = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    kinds.insert(c.expected_outcome);
    values.insert(c.expected_correctness);
    if (got[i].breakdown.correctness != c.expected_correctness || got[i].outcome.kind != c.expected_outcome) {
      r.ok = false;
      r.detail += c.name + " scored " + std::to_string(got[i].breakdown.correctness) + "; ";
    }
    if (c.expected_outcome == OutcomeKind::Timeout) slowest_timeout = std::max(slowest_timeout, secs[i]);
  }
  bool covers = values == std::set<double>{-1.0, -0.5, -0.1, 1.0} && kinds.count(OutcomeKind::Timeout);
  r.ok = r.ok && cases.size() >= 12 && covers && slowest_timeout > 0 && slowest_timeout < 6.0;
  r.detail += std::to_string(cases.size()) + " cases, correctness values " +
              std::to_string(values.size()) + "/4, slowest timeout case " +
              fmt("%.2f s", slowest_timeout);
  return r;
}

Result length_boundaries() {
  LengthRewardConfig cfg;
  cfg.enabled = true;
  const std::size_t counts[] = {89, 90, 91, 129, 130, 131};
  const double expected[] = {0, 0, 1, 1, 0, 0};
  Result r;
  std::string got;
  for (std::size_t i = 0; i < 6; ++i) {
    std::string text;
    for (std::size_t t = 0; t < counts[i]; ++t) text += (t % 3 == 0 ? "w\n" : "w ");
    double direct = length_reward_for_tokens(counts[i], cfg);
    double via_text = length_reward(text, cfg);
    if (direct != expected[i] || via_text != expected[i]) r.ok = false;
    got += std::to_string(counts[i]) + "->" + std::to_string(static_cast<int>(via_text)) + " ";
  }
  r.detail = got + "(expected 0 0 1 1 0 0)";
  return r;
}

Result metrics_oracle() {
  std::mt19937_64 rng(77);
  std::size_t mismatches = 0, order = 0;
  for (int t = 0; t < 1000; ++t) {
    std::size_t n = 1 + rng() % 100;
    auto rows = oracle::random_rows(rng, n, 4);
    OutcomeMatrix m(rows);
    auto any = oracle::brute_force_any(rows);
    auto all = oracle::brute_force_all(rows);
    auto at = pass_at_k_ratio(m);
    auto hat = pass_hat_k_ratio(m);
    if (!oracle::same_fraction(at.solved, at.total, any.first, any.second) ||
        !oracle::same_fraction(hat.solved, hat.total, all.first, all.second))
      ++mismatches;
    if (pass_hat_k(m) > pass_at_k(m)) ++order;
  }
  return {mismatches == 0 && order == 0, "1000 matrices, " + std::to_string(mismatches) +
                                             " mismatches, " + std::to_string(order) +
                                             " pass^k > pass@k"};
}

Result advantage_properties() {
  std::mt19937_64 rng(4242);
  const double table[] = {-1.1, -0.6, -0.1, 0.4, 0.9, 1.125, 1.625, 2.125, 2.625, 3.625};
  std::uniform_real_distribution<double> cont(-2.0, 3.625);
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  double worst_mean = 0, worst_shift = 0;
  std::size_t uniform_bad = 0, uniform_seen = 0;
  for (int t = 0; t < 1000; ++t) {
    std::size_t g = 1 + rng() % 16;
    std::vector<double> r(g);
    bool discrete = rng() % 2;
    for (auto& x : r) x = discrete ? table[rng() % 10] : cont(rng);
    if (t % 10 == 0) std::fill(r.begin(), r.end(), r[0]);
    auto a = group_advantages(r);
    double mean = 0;
    for (double x : a) mean += x;
    worst_mean = std::max(worst_mean, std::abs(mean / static_cast<double>(g)));

    bool uniform = std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; });
    if (uniform) {
      ++uniform_seen;
      if (std::any_of(a.begin(), a.end(), [](double x) { return x != 0.0; })) ++uniform_bad;
    }
    double c = shift(rng);
    std::vector<double> s(r);
    for (auto& x : s) x += c;
    auto b = group_advantages(s);
    for (std::size_t i = 0; i < g; ++i) worst_shift = std::max(worst_shift, std::abs(a[i] - b[i]));
  }
  Result res;
  res.ok = worst_mean <= 1e-9 && uniform_bad == 0 && uniform_seen > 0 && worst_shift <= 1e-9;
  res.detail = "1000 groups, max |mean| " + fmt("%.2e", worst_mean) + ", max shift delta " +
               fmt("%.2e", worst_shift) + ", " + std::to_string(uniform_seen) +
               " uniform groups, " + std::to_string(uniform_bad) + " nonzero";
  return res;
}

// ---------------------------------------------------------------------------
// Sandbox hygiene

std::string cmdline(const fs::path& proc) {
  std::string s = testutil::read_file(proc / "cmdline");
  std::replace(s.begin(), s.end(), '\0', ' ');
  return s;
}

long parent_of(const fs::path& proc) {
  std::ifstream in(proc / "status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("PPid:", 0) == 0) return std::stol(line.substr(5));
  return -1;
}

// Processes whose command line mentions `root`; with `children_only`, only
// direct children of this process.
int count_processes(const std::string& root, bool children_only) {
  int n = 0;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator("/proc", ec)) {
    const std::string name = e.path().filename().string();
    if (name.empty() || !std::all_of(name.begin(), name.end(), ::isdigit)) continue;
    if (std::stol(name) == ::getpid()) continue;
    if (cmdline(e.path()).find(root) == std::string::npos) continue;
    if (children_only && parent_of(e.path()) != ::getpid()) continue;
    ++n;
  }
  return n;
}

struct FuzzProgram {
  int backend;  // 0 prolog, 1 lisp, 2 shell stub
  std::string code;
  std::string query;
};

template <typename Rng>
FuzzProgram fuzz_program(Rng& rng) {
  int n = static_cast<int>(rng() % 1000);
  switch (rng() % 14) {
    case 0: return {0, "v(X) :- X is " + std::to_string(n) + " * 2.", "v(X)."};
    case 1: return {0, "v(X) :- X = " + std::to_string(n) + ".", "v(X)."};
    case 2: return {0, "v(_) :- fail.", "v(X)."};
    case 3: return {0, "v(X :- .", "v(X)."};
    case 4: return {0, "v(X) :- X is foo + 1.", "v(X)."};
    case 5: return {0, "v(X) :- repeat, fail, X = 1.", "v(X)."};  // looper
    case 6: return {0, "v(X) :- numlist(1, 100000000, L), length(L, X).", "v(X)."};
    case 7: return {1, "(defun v () " + std::to_string(n) + ")", "(v)"};
    case 8: return {1, "(defun v () (car 5))", "(v)"};
    case 9: return {1, "(defun v () (loop))", "(v)"};  // looper
    case 10: return {2, "crash SEGV", "X = 1."};
    case 11: return {2, "crash ABRT", "X = 1."};
    case 12: return {2, "spawn-and-loop", "X = 1."};
    default: return {2, "spawn-and-exit", "X = 1."};
  }
}

// Shell interpreter: the program names a behaviour; children it spawns
// share its command line, so they show up in the /proc scan.
const char* kStubScript =
    "#!/bin/sh\n"
    "[ -f \"$1\" ] || { echo stub 1.0; exit 0; }\n"
    "marker=$(grep -o 'VERDICT_ANSWER_[0-9a-f]*' \"$2\" | head -n 1)\n"
    "case \"$(cat \"$1\")\" in\n"
    "  'crash SEGV') kill -SEGV $$ ;;\n"
    "  'crash ABRT') kill -ABRT $$ ;;\n"
    "  spawn-and-loop) (while :; do sleep 1; done) & while :; do :; done ;;\n"
    "  spawn-and-exit) (sleep 30; echo late) & echo \"$marker 7\"; exit 0 ;;\n"
    "esac\n";

Result sandbox_hygiene() {
  testutil::ScratchDir root;
  testutil::ScratchDir stub_dir;
  auto stub_path = stub_dir.path() / "stubsh";
  testutil::write_file(stub_path, kStubScript);
  ::chmod(stub_path.c_str(), 0755);

  std::string previous = getenv("VERDICT_SANDBOX_DIR") ? getenv("VERDICT_SANDBOX_DIR") : "";
  ::setenv("VERDICT_SANDBOX_DIR", root.path().c_str(), 1);
  const std::string root_str = root.path().string();

  InterpreterBackend stub = InterpreterBackend::prolog(stub_path.string());
  stub.invocation_template = {"{exe}", "{program}", "{driver}"};
  BackendHandle backends[3] = {register_backend(InterpreterBackend::prolog(testutil::vprolog_path().string())),
                               register_backend(InterpreterBackend::lisp(testutil::vlisp_path().string())),
                               register_backend(stub)};

  SandboxLimits limits;
  limits.wall_timeout = std::chrono::milliseconds(300);
  limits.memory_cap = std::size_t{256} << 20;

  std::mt19937_64 rng(99);
  Result r;
  std::string per_w;
  std::size_t total_runs = 0;
  std::set<OutcomeKind> kinds;
  for (std::size_t w : {1, 4, 8}) {
    Sandbox sb(limits, w);
    WorkerPool pool(w + 2);  // more callers than slots
    std::vector<FuzzProgram> programs;
    for (int i = 0; i < 1000; ++i) programs.push_back(fuzz_program(rng));
    std::vector<OutcomeKind> out(programs.size());
    ProcessCounter::instance().reset_peak();
    std::atomic<bool> done{false};
    std::atomic<int> observed{0};
    std::thread sampler([&] {
      while (!done) {
        int n = count_processes(root_str, true);
        int prev = observed.load();
        while (n > prev && !observed.compare_exchange_weak(prev, n)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
      }
    });
    auto t = clock_type::now();
    pool.parallel_for(programs.size(), [&](std::size_t i) {
      const auto& p = programs[i];
      out[i] = sb.execute(p.code, p.query, *backends[p.backend]).kind;
    });
    double secs = seconds_since(t);
    done = true;
    sampler.join();
    for (auto k : out) kinds.insert(k);
    total_runs += programs.size();

    // Killed descendants can linger for a moment while the kernel tears
    // them down.
    int orphans = count_processes(root_str, false);
    for (int i = 0; i < 10 && orphans > 0; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      orphans = count_processes(root_str, false);
    }
    std::size_t leftovers = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(root.path())) ++leftovers;
    int peak = ProcessCounter::instance().peak();
    bool ok = orphans == 0 && leftovers == 0 && peak <= static_cast<int>(w) &&
              observed.load() <= static_cast<int>(w) && ProcessCounter::instance().live() == 0;
    r.ok = r.ok && ok;
    per_w += "W=" + std::to_string(w) + ": peak " + std::to_string(peak) + " (proc scan " +
             std::to_string(observed.load()) + "), orphans " + std::to_string(orphans) +
             ", temp entries " + std::to_string(leftovers) + ", " + fmt("%.1f s", secs) + "; ";
  }
  if (previous.empty()) ::unsetenv("VERDICT_SANDBOX_DIR");
  else ::setenv("VERDICT_SANDBOX_DIR", previous.c_str(), 1);
  r.ok = r.ok && kinds.size() == 4;  // Success, NoOutput, SyntaxError, Timeout
  r.detail = per_w + std::to_string(total_runs) + " executions, " + std::to_string(kinds.size()) +
             " outcome kinds";
  return r;
}

Result throughput() {
  auto cases = testutil::golden_cases();
  cases.erase(std::remove_if(cases.begin(), cases.end(),
                             [](const auto& c) {
                               return c.expected_outcome == OutcomeKind::Timeout ||
                                      c.backend != BackendId::LogicProlog;
                             }),
              cases.end());
  auto cfg = testutil::test_config();
  cfg.workers = 8;
  Harness h(cfg);
  LengthRewardConfig off;
  ExecutorFn exec = h.executor(BackendId::LogicProlog);

  double worst_single = 0;
  for (const auto& c : cases) {
    auto t = clock_type::now();
    score_candidate({c.completion, 0, c.problem.id}, c.problem, exec, off);
    worst_single = std::max(worst_single, seconds_since(t));
  }

  std::vector<CandidateScore> got(64);
  WorkerPool pool(8);
  auto t = clock_type::now();
  pool.parallel_for(64, [&](std::size_t i) {
    const auto& c = cases[i % cases.size()];
    got[i] = score_candidate({c.completion, i, c.problem.id}, c.problem, exec, off);
  });
  double batch = seconds_since(t);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < 64; ++i)
    wrong += got[i].outcome.kind != cases[i % cases.size()].expected_outcome;
  return {batch < 15.0 && wrong == 0,
          "64 candidates at W=8 in " + fmt("%.2f s", batch) + " (single worst case " +
              fmt("%.3f s", worst_single) + ", " + std::to_string(wrong) + " misgraded)"};
}

Result rosetta_sanity() {
  const std::vector<std::string> names = {
      "Fibonacci sequence", "Sieve of Eratosthenes", "Quicksort", "Binary search",
      "Greatest common divisor", "Factorial", "Towers of Hanoi", "Palindrome detection",
      "Prime decomposition", "Dijkstra's Algorithm", "Levenshtein distance", "N-queens problem",
      "Ackermann function", "Balanced brackets", "Knight's tour", "Merge sort",
      "Roman numerals decode", "Longest common subsequence", "Huffman coding", "24 game"};
  auto tasks = load_rosetta(testutil::data_dir() / "rosetta20");
  std::set<std::string> loaded;
  for (const auto& t : tasks) loaded.insert(t.name);
  bool names_ok = tasks.size() == 20 && loaded == std::set<std::string>(names.begin(), names.end());

  testutil::ScratchDir reports;
  Harness h(testutil::test_config(reports.path()));
  EvalRequest req;
  req.dataset_id = "rosetta20";
  req.checkpoint_label = "reference";
  std::ifstream in(testutil::data_dir() / "generations" / "rosetta20_reference.jsonl");
  req.generations = read_generations(in);
  auto res = h.evaluate(req);
  const auto& rep = res.report;
  return {names_ok && rep.n_problems == 20 && rep.k == 4 && rep.pass_at_k_ratio.solved == 20 &&
              rep.pass_at_k == 1.0,
          std::to_string(tasks.size()) + " tasks loaded" + (names_ok ? "" : " (names differ)") +
              ", pass@4 = " + fmt("%.3f", rep.pass_at_k) + " (" +
              std::to_string(rep.pass_at_k_ratio.solved) + "/" +
              std::to_string(rep.pass_at_k_ratio.total) + ")"};
}

Result tag_enumeration() {
  const char* open[] = {"<reasoning>", "</reasoning>", "<code>", "</code>", "<query>"};
  std::size_t implications = 0, checked = 0;
  double best = -1;
  std::string bad;
  for (unsigned mask = 0; mask < 32; ++mask) {
    for (bool nested : {false, true}) {
      auto has = [&](int i) { return (mask >> i) & 1u; };
      std::string reasoning = std::string(has(0) ? open[0] : "") + "\nthink\n" + (has(1) ? open[1] : "");
      std::string query = std::string(has(4) ? open[4] : "") + "\nv(X).\n</query>";
      std::string code = std::string(has(2) ? open[2] : "") + "\nv(1).\n";
      std::string text = reasoning + "\n";
      if (nested) text += code + query + "\n" + (has(3) ? open[3] : "");
      else text += code + (has(3) ? open[3] : "") + "\n" + query;
      auto parsed = parse(Completion{text, 0, "enum"});
      double x = xmlcount_reward(parsed.report);
      ++checked;
      // Independent count: tags present, and nesting whenever the query
      // opener follows <code> with no </code> in between.
      int present = __builtin_popcount(mask);
      bool really_nested = has(2) && has(4) && (nested || !has(3));
      double expect = 0.125 * present - (really_nested ? 0.5 : 0.0);
      if (x != expect && bad.empty())
        bad = "mask " + std::to_string(mask) + (nested ? " nested" : "") + " xmlcount " + std::to_string(x);
      if (parsed.report.strict_match && !parsed.report.soft_extractable && bad.empty())
        bad = "strict without soft at mask " + std::to_string(mask);
      implications += parsed.report.strict_match;
      best = std::max(best, x);
    }
  }
  return {bad.empty() && best == 0.625 && checked == 64 && implications > 0,
          std::to_string(checked) + " cases, max xmlcount " + fmt("%.3f", best) + ", " +
              std::to_string(implications) + " strict matches all soft" +
              (bad.empty() ? "" : ", " + bad)};
}

}  // namespace
}  // namespace verdict

int main() {
  using namespace verdict;
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const Criterion criteria[] = {
      {"reward-range-conformance", reward_ranges},
      {"correctness-rule-table", golden_table},
      {"length-reward-boundary", length_boundaries},
      {"metrics-oracle-equivalence", metrics_oracle},
      {"advantage-properties", advantage_properties},
      {"sandbox-hygiene", sandbox_hygiene},
      {"end-to-end-throughput", throughput},
      {"rosetta-pack-sanity", rosetta_sanity},
      {"strict-implies-soft-and-xmlcount-max", tag_enumeration},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Result r;
    auto t = clock_type::now();
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.ok;
    std::printf("%s %s: %s [%.1f s]\n", r.ok ? "PASS" : "FAIL", c.name, r.detail.c_str(),
                seconds_since(t));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
