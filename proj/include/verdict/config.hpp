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

// Harness configuration: a JSON document layered over built-in defaults.
// Relative paths in a config file resolve against the file's directory.
// Executable names without a slash are looked up next to the running
// binary, then on PATH.

#pragma once

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verdict/corpus.hpp"
#include "verdict/errors.hpp"
#include "verdict/reward.hpp"
#include "verdict/sandbox.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {

inline constexpr int kConfigSchemaVersion = 1;

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

inline std::optional<BindAddress> parse_bind(std::string_view s) {
  auto colon = s.rfind(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  BindAddress b;
  b.host = std::string(s.substr(0, colon));
  std::string_view p = s.substr(colon + 1);
  if (p.empty() || p.size() > 5) return std::nullopt;
  int port = 0;
  for (char c : p) {
    if (c < '0' || c > '9') return std::nullopt;
    port = port * 10 + (c - '0');
  }
  if (port > 65535) return std::nullopt;
  b.port = port;
  return b;
}

struct HarnessConfig {
  std::map<BackendId, InterpreterBackend> backends;
  BackendId default_backend = BackendId::LogicProlog;
  SandboxLimits limits;
  LengthRewardConfig length;
  std::size_t group_size = 4;
  std::size_t workers = 0;  // 0 selects the CPU count
  std::map<std::string, std::filesystem::path> datasets;
  std::filesystem::path prompts_dir;
  std::filesystem::path report_dir = "reports";
  std::filesystem::path score_log;  // empty disables the log
  std::string bind = "127.0.0.1:8080";
  bool skip_malformed = false;

  std::size_t worker_count() const { return workers == 0 ? default_worker_count() : workers; }

  void validate() const {
    try {
      limits.validate();
      length.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!TokenCounterRegistry::instance().contains(length.counter))
      throw ConfigError("unknown token counter: " + length.counter);
    if (group_size == 0) throw ConfigError("group_size must be >= 1");
    if (!backends.count(default_backend))
      throw ConfigError(std::string("default backend not configured: ") +
                        backend_id_name(default_backend));
    for (const auto& [id, b] : backends) {
      if (b.executable_path.empty())
        throw ConfigError(std::string(backend_id_name(id)) + ": empty executable");
      if (b.invocation_template.empty())
        throw ConfigError(std::string(backend_id_name(id)) + ": empty invocation template");
      if (b.probe_timeout <= std::chrono::nanoseconds::zero())
        throw ConfigError(std::string(backend_id_name(id)) + ": probe timeout must be > 0");
    }
    for (const auto& [id, path] : datasets)
      if (!is_dataset_id(id)) throw ConfigError("unknown dataset id: " + id);
    if (!parse_bind(bind)) throw ConfigError("bind must be host:port, got '" + bind + "'");
  }
};

// ---------------------------------------------------------------------------
// Executable lookup

inline std::filesystem::path self_directory() {
  std::error_code ec;
  auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  return ec ? std::filesystem::path() : exe.parent_path();
}

inline std::string resolve_executable(const std::string& name,
                                      const std::filesystem::path& base_dir = {}) {
  if (name.empty()) return name;
  if (name.find('/') != std::string::npos) {
    std::filesystem::path p(name);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p.lexically_normal().string();
  }
  if (auto self = self_directory(); !self.empty() && is_executable_file((self / name).string()))
    return (self / name).string();
  if (const char* path = std::getenv("PATH")) {
    std::string_view rest(path);
    while (!rest.empty()) {
      auto colon = rest.find(':');
      std::string dir(rest.substr(0, colon));
      rest = colon == std::string_view::npos ? std::string_view() : rest.substr(colon + 1);
      if (dir.empty()) continue;
      auto cand = std::filesystem::path(dir) / name;
      if (is_executable_file(cand.string())) return cand.string();
    }
  }
  // Unresolved; registration reports it as unavailable.
  return name;
}

// Built-in defaults use the bundled interpreters and the data directory
// given here (the CLI passes the one it was built with).
inline HarnessConfig default_config(const std::filesystem::path& data_dir = {}) {
  HarnessConfig c;
  c.backends[BackendId::LogicProlog] = InterpreterBackend::prolog(resolve_executable("vprolog"));
  c.backends[BackendId::FunctionalLisp] = InterpreterBackend::lisp(resolve_executable("vlisp"));
  if (!data_dir.empty()) {
    c.datasets["rosetta20"] = data_dir / "rosetta20";
    c.prompts_dir = data_dir / "prompts";
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline void check_keys(const nlohmann::json& j, const std::string& where,
                       std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(what + ": wrong type (" + j.dump() + ")");
  }
}

inline double get_positive_ms(const nlohmann::json& j, const std::string& what) {
  double v = get_as<double>(j, what);
  if (!(v > 0)) throw ConfigError(what + " must be > 0");
  return v;
}

inline std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

inline std::chrono::nanoseconds from_ms(double ms) {
  return std::chrono::nanoseconds(static_cast<long long>(ms * 1e6));
}

}  // namespace detail

// Applies `j` on top of `c`.
inline void merge_config(HarnessConfig& c, const nlohmann::json& j,
                         const std::filesystem::path& base_dir = {}) {
  using detail::get_as;
  detail::check_keys(j, "config",
                     {"schema_version", "backends", "default_backend", "sandbox", "length_reward",
                      "group_size", "workers", "datasets", "prompts_dir", "report_dir",
                      "score_log", "bind", "on_malformed"});
  if (j.contains("schema_version") &&
      get_as<int>(j["schema_version"], "schema_version") != kConfigSchemaVersion)
    throw ConfigError("unsupported schema_version " + j["schema_version"].dump());

  if (j.contains("backends")) {
    const auto& bs = j["backends"];
    if (!bs.is_object()) throw ConfigError("backends must be an object");
    for (auto it = bs.begin(); it != bs.end(); ++it) {
      auto id = parse_backend_id(it.key());
      if (!id) throw ConfigError("unknown backend id: " + it.key());
      std::string where = "backends." + it.key();
      detail::check_keys(*it, where,
                         {"executable", "extension", "invocation", "probe", "probe_timeout_ms"});
      InterpreterBackend b = c.backends.count(*id) ? c.backends[*id]
                             : *id == BackendId::LogicProlog ? InterpreterBackend::prolog("")
                                                             : InterpreterBackend::lisp("");
      if (it->contains("executable"))
        b.executable_path =
            resolve_executable(get_as<std::string>((*it)["executable"], where + ".executable"),
                               base_dir);
      if (it->contains("extension"))
        b.program_file_extension = get_as<std::string>((*it)["extension"], where + ".extension");
      if (it->contains("invocation"))
        b.invocation_template =
            get_as<std::vector<std::string>>((*it)["invocation"], where + ".invocation");
      if (it->contains("probe"))
        b.probe_template = get_as<std::vector<std::string>>((*it)["probe"], where + ".probe");
      if (it->contains("probe_timeout_ms"))
        b.probe_timeout =
            detail::from_ms(detail::get_positive_ms((*it)["probe_timeout_ms"], where + ".probe_timeout_ms"));
      c.backends[*id] = std::move(b);
    }
  }
  if (j.contains("default_backend")) {
    auto s = get_as<std::string>(j["default_backend"], "default_backend");
    auto id = parse_backend_id(s);
    if (!id) throw ConfigError("unknown backend id: " + s);
    c.default_backend = *id;
  }
  if (j.contains("sandbox")) {
    const auto& s = j["sandbox"];
    detail::check_keys(s, "sandbox", {"wall_timeout_ms", "memory_cap_mb", "max_output_kb"});
    if (s.contains("wall_timeout_ms"))
      c.limits.wall_timeout =
          detail::from_ms(detail::get_positive_ms(s["wall_timeout_ms"], "sandbox.wall_timeout_ms"));
    if (s.contains("memory_cap_mb"))
      c.limits.memory_cap = get_as<std::size_t>(s["memory_cap_mb"], "sandbox.memory_cap_mb") << 20;
    if (s.contains("max_output_kb"))
      c.limits.max_output = get_as<std::size_t>(s["max_output_kb"], "sandbox.max_output_kb") << 10;
  }
  if (j.contains("length_reward")) {
    const auto& l = j["length_reward"];
    detail::check_keys(l, "length_reward", {"enabled", "scale", "lower", "upper", "counter"});
    if (l.contains("enabled")) c.length.enabled = get_as<bool>(l["enabled"], "length_reward.enabled");
    if (l.contains("scale")) c.length.scale = get_as<double>(l["scale"], "length_reward.scale");
    if (l.contains("lower")) c.length.lower = get_as<double>(l["lower"], "length_reward.lower");
    if (l.contains("upper")) c.length.upper = get_as<double>(l["upper"], "length_reward.upper");
    if (l.contains("counter"))
      c.length.counter = get_as<std::string>(l["counter"], "length_reward.counter");
  }
  if (j.contains("group_size")) {
    auto g = get_as<long long>(j["group_size"], "group_size");
    if (g < 1) throw ConfigError("group_size must be >= 1");
    c.group_size = static_cast<std::size_t>(g);
  }
  if (j.contains("workers")) {
    auto w = get_as<long long>(j["workers"], "workers");
    if (w < 0) throw ConfigError("workers must be >= 0");
    c.workers = static_cast<std::size_t>(w);
  }
  if (j.contains("datasets")) {
    const auto& d = j["datasets"];
    if (!d.is_object()) throw ConfigError("datasets must be an object");
    for (auto it = d.begin(); it != d.end(); ++it) {
      if (!is_dataset_id(it.key())) throw ConfigError("unknown dataset id: " + it.key());
      c.datasets[it.key()] =
          detail::resolve_path(get_as<std::string>(*it, "datasets." + it.key()), base_dir);
    }
  }
  if (j.contains("prompts_dir"))
    c.prompts_dir = detail::resolve_path(get_as<std::string>(j["prompts_dir"], "prompts_dir"), base_dir);
  if (j.contains("report_dir"))
    c.report_dir = detail::resolve_path(get_as<std::string>(j["report_dir"], "report_dir"), base_dir);
  if (j.contains("score_log")) {
    auto s = get_as<std::string>(j["score_log"], "score_log");
    c.score_log = s.empty() ? std::filesystem::path() : detail::resolve_path(s, base_dir);
  }
  if (j.contains("bind")) c.bind = get_as<std::string>(j["bind"], "bind");
  if (j.contains("on_malformed")) {
    auto s = get_as<std::string>(j["on_malformed"], "on_malformed");
    if (s != "fail" && s != "skip") throw ConfigError("on_malformed must be 'fail' or 'skip'");
    c.skip_malformed = s == "skip";
  }
}

inline HarnessConfig load_config(const std::filesystem::path& path, HarnessConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  merge_config(base, j, std::filesystem::absolute(path).parent_path());
  return base;
}

// VERDICT_BIND overrides the bind address.
inline void apply_environment(HarnessConfig& c) {
  if (const char* b = std::getenv("VERDICT_BIND"); b && *b) c.bind = b;
}

inline nlohmann::ordered_json to_json(const HarnessConfig& c) {
  nlohmann::ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  auto& bs = j["backends"] = nlohmann::ordered_json::object();
  for (const auto& [id, b] : c.backends) {
    bs[backend_id_name(id)] = {
        {"executable", b.executable_path},
        {"extension", b.program_file_extension},
        {"invocation", b.invocation_template},
        {"probe", b.probe_template},
        {"probe_timeout_ms", std::chrono::duration<double, std::milli>(b.probe_timeout).count()}};
  }
  j["default_backend"] = backend_id_name(c.default_backend);
  j["sandbox"] = {
      {"wall_timeout_ms", std::chrono::duration<double, std::milli>(c.limits.wall_timeout).count()},
      {"memory_cap_mb", c.limits.memory_cap >> 20},
      {"max_output_kb", c.limits.max_output >> 10}};
  j["length_reward"] = {{"enabled", c.length.enabled}, {"scale", c.length.scale},
                        {"lower", c.length.lower},     {"upper", c.length.upper},
                        {"counter", c.length.counter}};
  j["group_size"] = c.group_size;
  j["workers"] = c.workers;
  auto& ds = j["datasets"] = nlohmann::ordered_json::object();
  for (const auto& [id, p] : c.datasets) ds[id] = p.string();
  j["prompts_dir"] = c.prompts_dir.string();
  j["report_dir"] = c.report_dir.string();
  j["score_log"] = c.score_log.string();
  j["bind"] = c.bind;
  j["on_malformed"] = c.skip_malformed ? "skip" : "fail";
  return j;
}

}  // namespace verdict
