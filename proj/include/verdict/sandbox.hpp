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

// Sandboxed execution of a program/query pair in an interpreter
// subprocess.
//
// Each execution gets a private directory holding the program file and a
// driver that loads it, runs the query once and prints the answer after a
// per-run marker. Outcomes:
//
//   deadline exceeded                      Timeout
//   stdout over max_output                 NoOutput
//   killed by a signal, or nonzero exit    SyntaxError
//   marker printed                         Success (value normalized)
//   otherwise                              NoOutput
//
// Success here only means an answer came back; grading against the ground
// truth happens in the reward engine.

#pragma once

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "verdict/answer.hpp"
#include "verdict/errors.hpp"
#include "verdict/outcome.hpp"
#include "verdict/subprocess.hpp"
#include "verdict/text.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {

enum class BackendId { LogicProlog, FunctionalLisp };

inline const char* backend_id_name(BackendId id) {
  return id == BackendId::LogicProlog ? "logic-prolog" : "functional-lisp";
}

inline std::optional<BackendId> parse_backend_id(std::string_view s) {
  if (s == "logic-prolog") return BackendId::LogicProlog;
  if (s == "functional-lisp") return BackendId::FunctionalLisp;
  return std::nullopt;
}

struct SandboxLimits {
  std::chrono::nanoseconds wall_timeout = std::chrono::seconds(5);
  std::size_t memory_cap = std::size_t{512} << 20;
  std::size_t max_output = std::size_t{64} << 10;

  void validate() const {
    if (wall_timeout <= std::chrono::nanoseconds::zero())
      throw std::invalid_argument("wall_timeout must be > 0");
    if (memory_cap == 0) throw std::invalid_argument("memory_cap must be > 0");
    if (max_output == 0) throw std::invalid_argument("max_output must be > 0");
  }

  ProcessLimits process_limits() const {
    ProcessLimits p;
    p.timeout = wall_timeout;
    p.memory_cap = memory_cap;
    p.max_output = max_output;
    return p;
  }

  friend bool operator==(const SandboxLimits&, const SandboxLimits&) = default;
};

// Placeholders in invocation templates: {exe} {program} {driver} {dir}.
struct InterpreterBackend {
  BackendId id = BackendId::LogicProlog;
  std::string executable_path;
  std::string program_file_extension = ".pl";
  std::vector<std::string> invocation_template;
  std::vector<std::string> probe_template = {"{exe}", "--version"};
  std::chrono::nanoseconds probe_timeout = std::chrono::seconds(2);

  static InterpreterBackend prolog(std::string exe) {
    InterpreterBackend b;
    b.id = BackendId::LogicProlog;
    b.executable_path = std::move(exe);
    b.program_file_extension = ".pl";
    b.invocation_template = {"{exe}", "--on-error=halt", "-q", "{program}", "{driver}"};
    return b;
  }

  static InterpreterBackend lisp(std::string exe) {
    InterpreterBackend b;
    b.id = BackendId::FunctionalLisp;
    b.executable_path = std::move(exe);
    b.program_file_extension = ".lisp";
    b.invocation_template = {"{exe}", "--script", "{driver}"};
    return b;
  }

  friend bool operator==(const InterpreterBackend&, const InterpreterBackend&) = default;
};

inline std::vector<std::string> expand_template(const std::vector<std::string>& tmpl,
                                                const std::map<std::string, std::string>& vars) {
  std::vector<std::string> out;
  out.reserve(tmpl.size());
  for (const auto& piece : tmpl) {
    std::string s;
    for (std::size_t i = 0; i < piece.size();) {
      if (piece[i] == '{') {
        auto close = piece.find('}', i);
        if (close != std::string::npos) {
          auto it = vars.find(piece.substr(i + 1, close - i - 1));
          if (it != vars.end()) {
            s += it->second;
            i = close + 1;
            continue;
          }
        }
      }
      s += piece[i++];
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct ProbeReport {
  bool ok = false;
  std::string version;  // first line of the probe's output
  std::string error;
  std::chrono::nanoseconds wall_time{0};
};

inline bool is_executable_file(const std::string& path) {
  std::error_code ec;
  return !path.empty() && std::filesystem::is_regular_file(path, ec) &&
         ::access(path.c_str(), X_OK) == 0;
}

inline ProbeReport probe_backend(const InterpreterBackend& spec) {
  ProbeReport r;
  if (!is_executable_file(spec.executable_path)) {
    r.error = "not an executable file: " + spec.executable_path;
    return r;
  }
  ProcessLimits limits;
  limits.timeout = spec.probe_timeout;
  limits.memory_cap = 0;
  auto args = expand_template(spec.probe_template, {{"exe", spec.executable_path}});
  ProcessResult p = run_process(args, limits);
  r.wall_time = p.wall_time;
  if (p.exec_errno != 0) {
    r.error = "cannot execute " + spec.executable_path + ": " + std::strerror(p.exec_errno);
  } else if (p.timed_out) {
    r.error = "version probe timed out";
  } else if (!p.exited_cleanly()) {
    r.error = "version probe failed (exit " + std::to_string(p.exit_code) + ", signal " +
              std::to_string(p.term_signal) + ")";
  } else {
    std::string_view text = p.out.empty() ? std::string_view(p.err) : std::string_view(p.out);
    r.version = trim(text.substr(0, text.find('\n')));
    r.ok = true;
  }
  return r;
}

class RegisteredBackend {
 public:
  RegisteredBackend(InterpreterBackend spec, ProbeReport probe)
      : spec_(std::move(spec)), probe_(std::move(probe)) {}

  const InterpreterBackend& spec() const noexcept { return spec_; }
  const ProbeReport& probe() const noexcept { return probe_; }
  BackendId id() const noexcept { return spec_.id; }

 private:
  InterpreterBackend spec_;
  ProbeReport probe_;
};

using BackendHandle = std::shared_ptr<const RegisteredBackend>;

// Probes the executable; throws BackendUnavailable when the probe fails.
inline BackendHandle register_backend(const InterpreterBackend& spec) {
  ProbeReport probe = probe_backend(spec);
  if (!probe.ok) throw BackendUnavailable(std::string(backend_id_name(spec.id)) + ": " + probe.error);
  return std::make_shared<const RegisteredBackend>(spec, std::move(probe));
}

class BackendRegistry {
 public:
  BackendHandle add(const InterpreterBackend& spec) {
    BackendHandle h = register_backend(spec);
    std::unique_lock lock(mu_);
    backends_[spec.id] = h;
    return h;
  }

  BackendHandle find(BackendId id) const {
    std::shared_lock lock(mu_);
    auto it = backends_.find(id);
    return it == backends_.end() ? nullptr : it->second;
  }

  BackendHandle get(BackendId id) const {
    BackendHandle h = find(id);
    if (!h) throw BackendUnavailable(std::string(backend_id_name(id)) + ": not registered");
    return h;
  }

  std::vector<BackendHandle> all() const {
    std::shared_lock lock(mu_);
    std::vector<BackendHandle> out;
    for (const auto& [id, h] : backends_) out.push_back(h);
    return out;
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<BackendId, BackendHandle> backends_;
};

// ---------------------------------------------------------------------------
// Query wrapping

// The answer variable of a Prolog query: among variables whose names start
// with an uppercase letter, the one whose first occurrence comes last. In
// "f(X), Y is X / 3." that is Y. Quoted text and comments are skipped.
inline std::optional<std::string> answer_variable(std::string_view q) {
  auto is_alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  std::vector<std::string> seen;
  std::size_t i = 0;
  while (i < q.size()) {
    char c = q[i];
    if (c == '%') {
      while (i < q.size() && q[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < q.size() && q[i + 1] == '*') {
      auto end = q.find("*/", i + 2);
      i = end == std::string_view::npos ? q.size() : end + 2;
    } else if (c == '0' && i + 1 < q.size() && q[i + 1] == '\'') {
      i += 2;
      if (i < q.size() && q[i] == '\\') ++i;
      else if (i + 1 < q.size() && q[i] == '\'' && q[i + 1] == '\'') ++i;
      if (i < q.size()) ++i;
    } else if (c == '\'' || c == '"' || c == '`') {
      ++i;
      while (i < q.size()) {
        if (q[i] == '\\') {
          i += 2;
        } else if (q[i] == c) {
          if (i + 1 < q.size() && q[i + 1] == c) {
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          ++i;
        }
      }
    } else if (is_alnum(c)) {
      std::size_t start = i;
      while (i < q.size() && is_alnum(q[i])) ++i;
      std::string name(q.substr(start, i - start));
      if (c >= 'A' && c <= 'Z' && std::find(seen.begin(), seen.end(), name) == seen.end())
        seen.push_back(std::move(name));
    } else {
      ++i;
    }
  }
  if (seen.empty()) return std::nullopt;
  return seen.back();
}

// Strips a leading "?-" and the terminating full stop.
inline std::string prolog_goal_text(std::string_view query) {
  std::string_view q = trim_view(query);
  if (q.substr(0, 2) == "?-") q = trim_view(q.substr(2));
  if (!q.empty() && q.back() == '.') q = trim_view(q.substr(0, q.size() - 1));
  return std::string(q);
}

inline std::string lisp_string_literal(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Driver source for a backend, or nullopt when the query cannot yield a
// comparable answer.
inline std::optional<std::string> render_driver(BackendId id, std::string_view query,
                                                const std::string& program_path,
                                                const std::string& marker) {
  if (id == BackendId::LogicProlog) {
    auto var = answer_variable(query);
    std::string goal = prolog_goal_text(query);
    if (!var || goal.empty()) return std::nullopt;
    return ":- initialization(verdict_main, main).\n"
           "verdict_main :-\n"
           "    (   (\n" + goal + "\n        )\n"
           "    ->  format(\"~n~w ~w~n\", ['" + marker + "', " + *var + "])\n"
           "    ;   true\n"
           "    ).\n";
  }
  std::string_view q = trim_view(query);
  if (q.empty()) return std::nullopt;
  return "(load " + lisp_string_literal(program_path) + ")\n(format t \"~%" + marker +
         " ~a~%\"\n" + std::string(q) + "\n)\n";
}

// Value after the last marker occurrence, up to the end of that line.
inline std::optional<std::string> find_marked_answer(std::string_view out,
                                                     std::string_view marker) {
  auto pos = out.rfind(marker);
  if (pos == std::string_view::npos) return std::nullopt;
  std::string_view rest = out.substr(pos + marker.size());
  rest = rest.substr(0, rest.find('\n'));
  std::string v = trim(rest);
  if (v.empty()) return std::nullopt;
  return v;
}

inline std::string excerpt(std::string_view text, std::size_t max = 2000) {
  std::string s = trim(text);
  if (s.size() > max) s = s.substr(0, max) + "...";
  return s;
}

inline ExecutionOutcome classify_process(const ProcessResult& p, std::string_view marker,
                                         std::string_view scrub_path = {}) {
  std::string err = p.err;
  if (!scrub_path.empty()) {
    for (auto pos = err.find(scrub_path); pos != std::string::npos;
         pos = err.find(scrub_path, pos + 9))
      err.replace(pos, scrub_path.size(), "<sandbox>");
  }
  ExecutionOutcome o;
  if (p.timed_out) {
    o = ExecutionOutcome::failure(OutcomeKind::Timeout, excerpt(err));
  } else if (p.output_overflow) {
    o = ExecutionOutcome::failure(OutcomeKind::NoOutput, "output limit exceeded");
  } else if (p.term_signal != 0) {
    o = ExecutionOutcome::failure(OutcomeKind::SyntaxError,
                                  "interpreter killed by signal " + std::to_string(p.term_signal) +
                                      (err.empty() ? "" : ": " + excerpt(err)));
  } else if (p.exit_code != 0) {
    o = ExecutionOutcome::failure(OutcomeKind::SyntaxError, excerpt(err));
  } else if (auto v = find_marked_answer(p.out, marker)) {
    o = ExecutionOutcome::success(normalize_answer(*v));
    o.stderr_excerpt = excerpt(err);
  } else {
    o = ExecutionOutcome::failure(OutcomeKind::NoOutput, excerpt(err));
  }
  o.wall_time = p.wall_time;
  return o;
}

// ---------------------------------------------------------------------------
// Temporary directories

inline std::filesystem::path sandbox_root() {
  if (const char* env = std::getenv("VERDICT_SANDBOX_DIR"); env && *env) return env;
  return std::filesystem::temp_directory_path();
}

class TempDir {
 public:
  explicit TempDir(const std::filesystem::path& root = sandbox_root()) {
    std::filesystem::create_directories(root);
    std::string tmpl = (root / "verdict-XXXXXX").string();
    if (!::mkdtemp(tmpl.data()))
      throw std::system_error(errno, std::generic_category(), "mkdtemp " + tmpl);
    path_ = tmpl;
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string fresh_marker() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::uint64_t x;
  {
    std::lock_guard lock(mu);
    x = rng();
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return std::string("VERDICT_ANSWER_") + buf;
}

inline void write_file(const std::filesystem::path& p, std::string_view text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

// One execution without admission control.
inline ExecutionOutcome execute(const std::string& code, const std::string& query,
                                const RegisteredBackend& backend, const SandboxLimits& limits) {
  const InterpreterBackend& spec = backend.spec();
  if (!is_executable_file(spec.executable_path))
    throw BackendUnavailable(std::string(backend_id_name(spec.id)) + ": executable missing: " +
                             spec.executable_path);
  TempDir dir;
  std::string marker = fresh_marker();
  auto program = dir.path() / ("program" + spec.program_file_extension);
  auto driver = dir.path() / ("driver" + spec.program_file_extension);
  auto driver_text = render_driver(spec.id, query, program.string(), marker);
  if (!driver_text)
    return ExecutionOutcome::failure(OutcomeKind::SyntaxError, "query has no answer variable");
  write_file(program, code);
  write_file(driver, *driver_text);
  auto args = expand_template(spec.invocation_template, {{"exe", spec.executable_path},
                                                         {"program", program.string()},
                                                         {"driver", driver.string()},
                                                         {"dir", dir.path().string()}});
  ProcessResult p = run_process(args, limits.process_limits(), dir.path().string());
  if (p.exec_errno != 0)
    throw BackendUnavailable(std::string(backend_id_name(spec.id)) + ": " +
                             std::strerror(p.exec_errno));
  return classify_process(p, marker, dir.path().string());
}

// Counting gate bounding simultaneous interpreter processes.
class ExecGate {
 public:
  explicit ExecGate(std::size_t slots) : free_(std::max<std::size_t>(1, slots)), slots_(free_) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [this] { return free_ > 0; });
    --free_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }
  std::size_t slots() const noexcept { return slots_; }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t free_;
  std::size_t slots_;
};

using ExecutorFn = std::function<ExecutionOutcome(const std::string&, const std::string&)>;

// Executes with a shared bound on concurrent subprocesses. Safe to call
// from any number of threads.
class Sandbox {
 public:
  explicit Sandbox(SandboxLimits limits = {}, std::size_t max_concurrent = default_worker_count())
      : limits_(limits), gate_(max_concurrent) {
    limits_.validate();
  }

  ExecutionOutcome execute(const std::string& code, const std::string& query,
                           const RegisteredBackend& backend) {
    return admitted([&] { return verdict::execute(code, query, backend, limits_); });
  }

  // Probes and registers under the same bound as executions.
  BackendHandle register_backend(const InterpreterBackend& spec) {
    return admitted([&] { return verdict::register_backend(spec); });
  }

  ExecutorFn executor(BackendHandle backend) {
    return [this, backend](const std::string& code, const std::string& query) {
      return execute(code, query, *backend);
    };
  }

  const SandboxLimits& limits() const noexcept { return limits_; }
  std::size_t max_concurrent() const noexcept { return gate_.slots(); }

 private:
  template <typename F>
  auto admitted(F&& fn) -> decltype(fn()) {
    gate_.acquire();
    struct Release {
      ExecGate& g;
      ~Release() { g.release(); }
    } release{gate_};
    return fn();
  }

  SandboxLimits limits_;
  ExecGate gate_;
};

}  // namespace verdict
