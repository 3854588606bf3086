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

// Behaviour of the bundled vprolog and vlisp interpreters, run directly.

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "verdict/subprocess.hpp"

namespace verdict {
namespace {

struct Case {
  const char* name;
  const char* program;
  const char* out;
  int exit_code;
};

void PrintTo(const Case& c, std::ostream* os) { *os << c.name; }

ProcessResult run_script(const std::vector<std::string>& prefix, const std::string& file,
                         const std::string& program, const std::vector<std::string>& suffix = {}) {
  testutil::ScratchDir dir;
  auto path = dir.path() / file;
  testutil::write_file(path, program);
  std::vector<std::string> args = prefix;
  args.push_back(path.string());
  args.insert(args.end(), suffix.begin(), suffix.end());
  ProcessLimits lim;
  lim.timeout = std::chrono::seconds(20);
  return run_process(args, lim);
}

class PrologTest : public ::testing::TestWithParam<Case> {};

TEST_P(PrologTest, Runs) {
  const Case& c = GetParam();
  auto p = run_script({testutil::vprolog_path().string(), "-q", "--on-error=halt"}, "p.pl",
                      c.program, {"-g", "main", "-t", "halt"});
  EXPECT_EQ(p.out, c.out) << p.err;
  EXPECT_EQ(p.exit_code, c.exit_code) << p.err;
}

const Case kProlog[] = {
    {"Bignum", "f(0,1):-!.\nf(N,F):-M is N-1,f(M,G),F is N*G.\nmain:-f(25,F),write(F),nl.\n",
     "15511210043330985984000000\n", 0},
    {"Division", "main:-X is 7/2,Y is 7//2,Z is 6/2,write(X-Y-Z),nl.\n", "3.5-3-3\n", 0},
    {"Lists", "main:-findall(X,member(X,[3,1,2]),L),msort(L,S),length(S,N),write(S/N),nl.\n",
     "[1,2,3]/3\n", 0},
    {"Format", "main:-format(\"~w-~a ~d~n\",[f(x),bar,42]).\n", "f(x)-bar 42\n", 0},
    {"Backtracking", "p(1). p(2). p(3).\nmain:-p(X),X>1,!,write(X),nl.\n", "2\n", 0},
    {"CatchError", "main:-catch(atom_length(_,_),error(E,_),(write(E),nl)).\n",
     "instantiation_error\n", 0},
    {"Between", "main:-aggregate_all(sum(X),between(1,100,X),S),write(S),nl.\n", "5050\n", 0},
    {"StringBuiltins", "main:-atom_codes(A,\"hi\"),atom_length(A,L),upcase_atom(A,U),write(U/L),nl.\n",
     "HI/2\n", 0},
    {"GoalFails", "main:-fail.\n", "", 1},
    {"SyntaxError", "main:-write(x.\n", "", 1},
    {"UncaughtError", "main:-X is foo+1,write(X).\n", "", 2},
    {"UnknownProcedure", "main:-nope(1).\n", "", 2},
};

INSTANTIATE_TEST_SUITE_P(Cases, PrologTest, ::testing::ValuesIn(kProlog),
                         [](const auto& i) { return std::string(i.param.name); });

TEST(PrologCliTest, VersionAndUsage) {
  ProcessLimits lim;
  auto v = run_process({testutil::vprolog_path().string(), "--version"}, lim);
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.out.find("vprolog"), std::string::npos);
  EXPECT_NE(run_process({testutil::vprolog_path().string(), "--bogus"}, lim).exit_code, 0);
}

TEST(PrologCliTest, InitializationMain) {
  auto p = run_script({testutil::vprolog_path().string(), "-q"}, "p.pl",
                      ":- initialization(main).\nmain:-write(hi),nl,halt.\n");
  EXPECT_EQ(p.out, "hi\n");
  EXPECT_EQ(p.exit_code, 0);
}

TEST(PrologCliTest, DeepRecursion) {
  auto p = run_script({testutil::vprolog_path().string(), "-q"}, "p.pl",
                      "count(N,N):-!.\ncount(I,N):-J is I+1,count(J,N).\n"
                      "len([],0).\nlen([_|T],N):-len(T,M),N is M+1.\n"
                      "main:-count(0,1000000),numlist(1,200000,L),len(L,N),write(N),nl.\n",
                      {"-g", "main", "-t", "halt"});
  EXPECT_EQ(p.out, "200000\n") << p.err;
  EXPECT_EQ(p.exit_code, 0);
}

class LispTest : public ::testing::TestWithParam<Case> {};

TEST_P(LispTest, Runs) {
  const Case& c = GetParam();
  auto p = run_script({testutil::vlisp_path().string(), "--script"}, "p.lisp", c.program);
  EXPECT_EQ(p.out, c.out) << p.err;
  EXPECT_EQ(p.exit_code, c.exit_code) << p.err;
}

const Case kLisp[] = {
    {"Bignum", "(defun f (n) (if (<= n 1) 1 (* n (f (- n 1)))))\n(format t \"~a~%\" (f 25))\n",
     "15511210043330985984000000\n", 0},
    {"Rationals", "(format t \"~a ~a ~a~%\" (/ 7 2) (/ 6 2) (floor 7 2))\n", "7/2 3 3\n", 0},
    {"Mapcar", "(format t \"~a~%\" (mapcar #'(lambda (x) (* x x)) '(1 2 3)))\n", "(1 4 9)\n", 0},
    {"Loop", "(format t \"~a~%\" (loop for i from 1 to 100 sum i))\n", "5050\n", 0},
    {"LoopCollect", "(format t \"~a~%\" (loop for x in '(1 2 3 4) when (evenp x) collect x))\n",
     "(2 4)\n", 0},
    {"HashTable",
     "(let ((h (make-hash-table :test #'equal)))\n  (setf (gethash \"a\" h) 41)\n"
     "  (incf (gethash \"a\" h))\n  (format t \"~a~%\" (gethash \"a\" h)))\n",
     "42\n", 0},
    {"Labels", "(labels ((ev (n) (if (= n 0) t (od (- n 1)))) (od (n) (if (= n 0) nil (ev (- n 1)))))\n"
               "  (format t \"~a~%\" (ev 10)))\n",
     "T\n", 0},
    {"HandlerCase", "(format t \"~a ~s~%\" (handler-case (car 5) (error () :caught)) :k)\n",
     "CAUGHT :K\n", 0},
    {"Strings", "(format t \"~a~%\" (string-upcase (concatenate 'string \"ab\" \"cd\")))\n", "ABCD\n", 0},
    {"TypeError", "(car 5)\n", "", 1},
    {"UnboundVariable", "(print undefined-thing)\n", "", 1},
    {"ReadError", "(format t \"~a~%\" (+ 1 2)\n", "", 1},
};

INSTANTIATE_TEST_SUITE_P(Cases, LispTest, ::testing::ValuesIn(kLisp),
                         [](const auto& i) { return std::string(i.param.name); });

TEST(LispCliTest, VersionAndUsage) {
  ProcessLimits lim;
  auto v = run_process({testutil::vlisp_path().string(), "--version"}, lim);
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.out.find("vlisp"), std::string::npos);
  EXPECT_EQ(run_process({testutil::vlisp_path().string()}, lim).exit_code, 2);
}

}  // namespace
}  // namespace verdict
