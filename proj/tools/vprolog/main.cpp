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

// vprolog: a Prolog interpreter covering the SWI-Prolog subset that
// generated programs use. Command line mirrors swipl:
//
//   vprolog [--version] [-q] [--on-error=print|halt|status] [-g Goal]...
//           [-t Goal] [file ...] [-- arg ...]

#include <cstdio>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "loader.hpp"

namespace {

constexpr const char* kVersion = "vprolog version 1.0.0 (SWI-Prolog compatible subset)";

struct Options {
  bool quiet = false;
  std::string on_error = "print";
  std::vector<std::string> goals;
  std::string toplevel;
  std::vector<std::string> files;
  std::vector<std::string> argv;
};

// Commits stack pages up front so that running out of address space
// surfaces as bad_alloc rather than a fault on stack growth.
[[gnu::noinline]] void prefault_stack() {
  volatile char pad[2 << 20];
  for (std::size_t i = 0; i < sizeof pad; i += 4096) pad[i] = 0;
}

int usage(const char* why) {
  std::fprintf(stderr, "vprolog: %s\nusage: vprolog [--version] [-q] [--on-error=print|halt|status] "
                       "[-g Goal]... [-t Goal] [file ...]\n", why);
  return 2;
}

// Parses and runs a goal given as text. Returns the process status the
// goal implies: 0 success, 1 failure, 2 uncaught exception.
int run_goal_text(vprolog::Machine& m, const std::string& text, const char* what) {
  using namespace vprolog;
  Term goal;
  try {
    read_from_text(m, text, goal);
  } catch (PrologThrow& t) {
    report(m, "ERROR", "", std::string(what) + ": " + describe_error(m, t.ball));
    return 2;
  }
  try {
    if (m.solve_once(goal)) return 0;
    report(m, "Warning", "", std::string(what) + ": goal failed");
    return 1;
  } catch (PrologThrow& t) {
    report(m, "ERROR", "", std::string(what) + ": " + describe_error(m, t.ball));
    return 2;
  }
}

// Minimal interactive loop: one query per term, first solution only.
int toplevel(vprolog::Machine& m) {
  using namespace vprolog;
  load_stdin();
  while (true) {
    std::string_view rest = std::string_view(stdin_buffer()).substr(stdin_pos());
    ReadResult r;
    try {
      Parser p(rest, m.ops, m.read_flags);
      r = p.read();
      stdin_pos() += p.pos();
    } catch (const SyntaxError& e) {
      report(m, "ERROR", "", std::string("Syntax error: ") + e.what());
      stdin_pos() = stdin_buffer().size();
      continue;
    }
    if (r.term.is_none()) return 0;
    try {
      if (!m.solve_once(r.term)) {
        m.out("false.\n\n");
        continue;
      }
      std::string out;
      for (auto& [name, var] : r.var_names) {
        if (name[0] == '_') continue;
        if (!out.empty()) out += ",\n";
        out += name + " = " + m.to_text(var, true);
      }
      m.out((out.empty() ? "true" : out) + ".\n\n");
    } catch (PrologThrow& t) {
      report(m, "ERROR", "", describe_error(m, t.ball));
    }
  }
}

int run(const Options& opt) {
  using namespace vprolog;
  Machine m;
  m.halt_on_error = opt.on_error == "halt";
  m.argv = opt.argv;
  boot(m);
  for (const auto& f : opt.files) consult_file(m, f);
  if (opt.on_error == "status" && m.error_count > 0 && m.main_goal.is_none() && opt.goals.empty())
    return 1;
  if (!m.main_goal.is_none()) {
    try {
      if (m.solve_once(m.main_goal)) return m.error_count > 0 && opt.on_error == "status" ? 1 : 0;
      report(m, "Warning", "", "initialization goal failed");
      return 1;
    } catch (PrologThrow& t) {
      report(m, "ERROR", "", describe_error(m, t.ball));
      return 2;
    }
  }
  for (const auto& g : opt.goals) {
    std::string what = "-g " + g;
    int rc = run_goal_text(m, g, what.c_str());
    if (rc != 0) return rc;
  }
  if (!opt.toplevel.empty()) {
    if (opt.toplevel == "halt") return m.error_count > 0 && opt.on_error == "status" ? 1 : 0;
    return run_goal_text(m, opt.toplevel, "-t") == 0 ? 0 : 1;
  }
  if (!opt.goals.empty()) return 0;
  return toplevel(m);
}

}  // namespace

int main(int argc, char** argv) {
  prefault_stack();
  static char outbuf[1 << 16];
  std::setvbuf(stdout, outbuf, _IOFBF, sizeof outbuf);
  Options opt;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--version") {
      std::printf("%s\n", kVersion);
      return 0;
    }
    if (a == "-q" || a == "--quiet") {
      opt.quiet = true;
    } else if (a.rfind("--on-error=", 0) == 0) {
      opt.on_error = a.substr(11);
      if (opt.on_error != "print" && opt.on_error != "halt" && opt.on_error != "status")
        return usage("bad --on-error value");
    } else if (a.rfind("--on-warning=", 0) == 0 || a.rfind("--stack-limit=", 0) == 0 ||
               a == "--nosignals" || a == "--no-tty" || a == "--traditional") {
      // accepted for swipl compatibility
    } else if (a == "-g" || a == "-t") {
      if (i + 1 >= argc) return usage("missing goal");
      (a == "-g" ? opt.goals.emplace_back() : opt.toplevel) = argv[++i];
    } else if (a == "--") {
      for (++i; i < argc; ++i) opt.argv.emplace_back(argv[i]);
    } else if (a.size() > 1 && a[0] == '-') {
      return usage(("unknown option " + a).c_str());
    } else {
      opt.files.push_back(a);
    }
  }
  int rc;
  try {
    rc = run(opt);
  } catch (const vprolog::HaltRequest& h) {
    rc = h.code;
  } catch (const std::bad_alloc&) {
    std::fflush(stdout);
    std::fprintf(stderr, "ERROR: Not enough resources: memory\n");
    rc = 2;
  }
  std::fflush(stdout);
  return rc;
}
