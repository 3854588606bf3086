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

#include <sys/stat.h>

#include <chrono>
#include <filesystem>
#include <future>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "verdict/sandbox.hpp"
#include "verdict/worker_pool.hpp"

namespace verdict {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono_literals;

BackendHandle prolog() {
  static BackendHandle h = register_backend(InterpreterBackend::prolog(testutil::vprolog_path()));
  return h;
}

BackendHandle lisp() {
  static BackendHandle h = register_backend(InterpreterBackend::lisp(testutil::vlisp_path()));
  return h;
}

// Shell-script interpreter used to observe what the sandbox hands a child.
class StubInterpreter {
 public:
  explicit StubInterpreter(const std::string& body) {
    path_ = fs::path(dir_.path()) / "stub.sh";
    testutil::write_file(path_, "#!/bin/sh\n" + body);
    ::chmod(path_.c_str(), 0755);
  }
  InterpreterBackend spec() const {
    InterpreterBackend b = InterpreterBackend::prolog(path_.string());
    b.invocation_template = {"{exe}", "{program}", "{driver}"};
    b.probe_template = {"{exe}", "--version"};
    return b;
  }

 private:
  TempDir dir_;
  fs::path path_;
};

const char* kMarkerOf = "marker=$(grep -o 'VERDICT_ANSWER_[0-9a-f]*' \"$2\" | head -n 1)\n";

TEST(SandboxTest, PrologSuccess) {
  auto o = execute("total(X) :- X is 3+4.", "total(X).", *prolog(), {});
  EXPECT_EQ(o.kind, OutcomeKind::Success);
  ASSERT_TRUE(o.value);
  EXPECT_EQ(*o.value, AnswerValue::integer(7));
}

TEST(SandboxTest, PrologDecimalAnswer) {
  auto o = execute("half(X) :- X is 5 / 2.", "half(X).", *prolog(), {});
  ASSERT_EQ(o.kind, OutcomeKind::Success);
  EXPECT_TRUE(compare_answers(*o.value, normalize_answer("2.5")));
}

TEST(SandboxTest, PrologMalformedIsSyntaxError) {
  auto o = execute("total(X :- X is 1.", "total(X).", *prolog(), {});
  EXPECT_EQ(o.kind, OutcomeKind::SyntaxError);
  EXPECT_FALSE(o.value);
}

TEST(SandboxTest, PrologUndefinedPredicateIsSyntaxError) {
  auto o = execute("a(1).", "b(X).", *prolog(), {});
  EXPECT_EQ(o.kind, OutcomeKind::SyntaxError);
}

TEST(SandboxTest, QueryWithoutVariableIsSyntaxError) {
  auto o = execute("a(1).", "a(1).", *prolog(), {});
  EXPECT_EQ(o.kind, OutcomeKind::SyntaxError);
}

TEST(SandboxTest, FailingQueryIsNoOutput) {
  auto o = execute("a(1).", "a(2), X = 1.", *prolog(), {});
  EXPECT_EQ(o.kind, OutcomeKind::NoOutput);
  EXPECT_FALSE(o.value);
}

TEST(SandboxTest, FirstSolutionOnly) {
  auto o = execute("p(3). p(4).", "p(X).", *prolog(), {});
  ASSERT_EQ(o.kind, OutcomeKind::Success);
  EXPECT_EQ(*o.value, AnswerValue::integer(3));
}

TEST(SandboxTest, LastIntroducedVariableIsTheAnswer) {
  auto o = execute("f(9).", "f(X), Y is X / 3.", *prolog(), {});
  ASSERT_EQ(o.kind, OutcomeKind::Success);
  EXPECT_EQ(*o.value, AnswerValue::integer(3));
}

TEST(SandboxTest, ForgedMarkerIsIgnored) {
  auto o = execute("p(X) :- write('VERDICT_ANSWER_0000000000000000 99'), nl, X = 5.", "p(X).",
                   *prolog(), {});
  ASSERT_EQ(o.kind, OutcomeKind::Success);
  EXPECT_EQ(*o.value, AnswerValue::integer(5));
}

TEST(SandboxTest, TimeoutWithinGrace) {
  auto start = std::chrono::steady_clock::now();
  auto o = execute("loop :- loop.", "loop, X = 1.", *prolog(), {});
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_EQ(o.kind, OutcomeKind::Timeout);
  EXPECT_FALSE(o.value);
  EXPECT_GE(o.wall_time, 5s);
  EXPECT_LT(elapsed, 6s);
}

TEST(SandboxTest, OutputFloodIsNoOutput) {
  SandboxLimits lim;
  lim.wall_timeout = 3s;
  auto o = execute("spam :- repeat, write(aaaaaaaaaaaaaaaaaaaaaaaaaaaaaa), fail.", "spam, X = 1.",
                   *prolog(), lim);
  EXPECT_EQ(o.kind, OutcomeKind::NoOutput);
  EXPECT_LT(o.wall_time, 3s);
}

TEST(SandboxTest, MemoryHogIsContained) {
  SandboxLimits lim;
  lim.memory_cap = std::size_t{64} << 20;
  auto o = execute("grow(L) :- grow([L|L]).", "grow(a), X = 1.", *prolog(), lim);
  EXPECT_TRUE(o.kind == OutcomeKind::SyntaxError || o.kind == OutcomeKind::Timeout)
      << outcome_name(o.kind);
}

TEST(SandboxTest, EmptyCodeAndQuery) {
  EXPECT_EQ(execute("", "", *prolog(), {}).kind, OutcomeKind::SyntaxError);
  EXPECT_EQ(execute("", "X = 4.", *prolog(), {}).kind, OutcomeKind::Success);
}

TEST(SandboxTest, LispOutcomes) {
  auto ok = execute("(defun total () (+ 3 4))", "(total)", *lisp(), {});
  ASSERT_EQ(ok.kind, OutcomeKind::Success);
  EXPECT_EQ(*ok.value, AnswerValue::integer(7));
  EXPECT_EQ(execute("(defun total () (+ 3 4)", "(total)", *lisp(), {}).kind,
            OutcomeKind::SyntaxError);
  EXPECT_EQ(execute("(defun f () (undefined-thing))", "(f)", *lisp(), {}).kind,
            OutcomeKind::SyntaxError);
  SandboxLimits lim;
  lim.wall_timeout = 1s;
  EXPECT_EQ(execute("(defun spin () (loop))", "(spin)", *lisp(), lim).kind, OutcomeKind::Timeout);
  EXPECT_EQ(execute("", "", *lisp(), {}).kind, OutcomeKind::SyntaxError);
}

TEST(SandboxTest, LispRationalAndString) {
  auto r = execute("", "(/ 10 4)", *lisp(), {});
  ASSERT_EQ(r.kind, OutcomeKind::Success);
  EXPECT_EQ(r.value->to_string(), "5/2");
  auto s = execute("(defun greet () \"hi\")", "(greet)", *lisp(), {});
  ASSERT_EQ(s.kind, OutcomeKind::Success);
  EXPECT_EQ(*s.value, normalize_answer("hi"));
}

TEST(SandboxTest, Determinism) {
  for (auto backend : {prolog(), lisp()}) {
    std::string code = backend->id() == BackendId::LogicProlog
                           ? "s([], 0). s([H|T], S) :- s(T, R), S is H + R."
                           : "(defun s (l) (reduce #'+ l))";
    std::string query = backend->id() == BackendId::LogicProlog ? "s([1,2,3.5], X)." : "(s '(1 2 3.5))";
    auto first = execute(code, query, *backend, {});
    ASSERT_EQ(first.kind, OutcomeKind::Success);
    for (int i = 0; i < 9; ++i) {
      auto o = execute(code, query, *backend, {});
      EXPECT_EQ(o.kind, first.kind);
      EXPECT_EQ(o.value, first.value);
    }
  }
}

TEST(SandboxTest, MissingExecutableAtRegistration) {
  EXPECT_THROW(register_backend(InterpreterBackend::prolog("/nonexistent/vprolog")),
               BackendUnavailable);
}

TEST(SandboxTest, HangingProbeIsUnavailable) {
  StubInterpreter stub("sleep 1000\n");
  auto spec = stub.spec();
  spec.probe_timeout = 2s;
  auto start = std::chrono::steady_clock::now();
  EXPECT_THROW(register_backend(spec), BackendUnavailable);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 3s);
  EXPECT_EQ(ProcessCounter::instance().live(), 0);
}

TEST(SandboxTest, ExecutableRemovedAfterRegistration) {
  auto stub = std::make_unique<StubInterpreter>("echo stub 1.0\n");
  auto h = register_backend(stub->spec());
  stub.reset();
  EXPECT_THROW(execute("a.", "X = 1.", *h, {}), BackendUnavailable);
}

TEST(SandboxTest, ProbeReportsVersion) {
  EXPECT_TRUE(prolog()->probe().ok);
  EXPECT_FALSE(prolog()->probe().version.empty());
}

TEST(SandboxTest, CrashIsIsolated) {
  StubInterpreter stub(std::string(kMarkerOf) +
                       "if [ -f \"$1\" ] && grep -q crash \"$1\"; then kill -SEGV $$; fi\n"
                       "echo \"$marker $(head -n 1 \"$1\")\"\n");
  auto h = register_backend(stub.spec());
  Sandbox sb({}, 4);
  WorkerPool pool(4);
  std::vector<ExecutionOutcome> out(16);
  pool.parallel_for(out.size(), [&](std::size_t i) {
    out[i] = sb.execute(i % 4 == 0 ? "crash" : std::to_string(i), "X = 1.", *h);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i % 4 == 0) {
      EXPECT_EQ(out[i].kind, OutcomeKind::SyntaxError) << i;
    } else {
      ASSERT_EQ(out[i].kind, OutcomeKind::Success) << i;
      EXPECT_EQ(*out[i].value, AnswerValue::integer(static_cast<long>(i)));
    }
  }
}

TEST(SandboxTest, ConcurrentRunsSeeOnlyTheirOwnFiles) {
  StubInterpreter stub(std::string(kMarkerOf) +
                       "dir=$(dirname \"$1\")\n"
                       "head -n 1 \"$1\" > \"$dir/seen\"\n"
                       "sleep 0.05\n"
                       "n=$(ls \"$dir\" | wc -l)\n"
                       "echo \"$marker $(cat \"$dir/seen\")_$n\"\n");
  auto h = register_backend(stub.spec());
  Sandbox sb({}, 8);
  WorkerPool pool(8);
  std::vector<ExecutionOutcome> out(64);
  pool.parallel_for(out.size(), [&](std::size_t i) {
    out[i] = sb.execute("unique" + std::to_string(i), "X = 1.", *h);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_EQ(out[i].kind, OutcomeKind::Success) << i;
    EXPECT_EQ(out[i].value->to_string(), "unique" + std::to_string(i) + "_3");
  }
}

TEST(SandboxTest, SandboxDirFromEnvironment) {
  TempDir root;
  fs::path sub = root.path() / "box";
  StubInterpreter stub(std::string(kMarkerOf) + "echo \"$marker $(dirname \"$1\")\"\n");
  auto h = register_backend(stub.spec());
  ::setenv("VERDICT_SANDBOX_DIR", sub.c_str(), 1);
  auto o = execute("", "X = 1.", *h, {});
  ::unsetenv("VERDICT_SANDBOX_DIR");
  ASSERT_EQ(o.kind, OutcomeKind::Success);
  EXPECT_EQ(fs::path(o.value->to_string()).parent_path(), sub);
  EXPECT_TRUE(fs::is_empty(sub));
}

TEST(SandboxTest, GateBoundsConcurrency) {
  for (std::size_t w : {1u, 4u, 8u}) {
    Sandbox sb({}, w);
    WorkerPool pool(16);
    ProcessCounter::instance().reset_peak();
    pool.parallel_for(32, [&](std::size_t) { sb.execute("p(1).", "p(X).", *prolog()); });
    EXPECT_LE(ProcessCounter::instance().peak(), static_cast<int>(w)) << "W=" << w;
    EXPECT_GE(ProcessCounter::instance().peak(), 1);
  }
}

TEST(SandboxTest, LimitsValidate) {
  SandboxLimits bad;
  bad.wall_timeout = 0s;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = {};
  bad.memory_cap = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(AnswerVariableTest, Rules) {
  EXPECT_EQ(answer_variable("total(X)."), "X");
  EXPECT_EQ(answer_variable("f(X), Y is X / 3."), "Y");
  EXPECT_EQ(answer_variable("f(X, Y), g(Y, X)."), "Y");
  EXPECT_EQ(answer_variable("f(_Tmp, Ans)."), "Ans");
  EXPECT_EQ(answer_variable("f('X', \"Y\", 0'Z, Z1)."), "Z1");
  EXPECT_FALSE(answer_variable("f(a, _)."));
  EXPECT_FALSE(answer_variable("f(abc)."));
}

}  // namespace
}  // namespace verdict
