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

// vlisp: a small Common Lisp subset interpreter used as the functional
// backend of the execution sandbox.
//
//   vlisp --version
//   vlisp [--script] FILE
//
// Uncaught errors are reported on stderr and the process exits with 1.

#include <pthread.h>

#include <cstdio>
#include <cstring>
#include <new>
#include <string>

#include "runtime.hpp"

namespace {

constexpr const char* kVersion = "vlisp 0.1.0";
constexpr std::size_t kStackBytes = std::size_t{256} << 20;

struct Job {
  std::string path;
  int status = 0;
};

void report(const char* type, const std::string& msg) {
  std::fflush(stdout);
  std::fprintf(stderr, "Unhandled %s: %s\n", type, msg.c_str());
}

void* run(void* arg) {
  auto* job = static_cast<Job*>(arg);
  try {
    vlisp::Interp m;
    // Each Lisp frame costs a few kilobytes of C++ stack.
    m.max_depth = static_cast<int>(kStackBytes / 8192);
    vlisp::install_all(m);
    vlisp::load_source(m, vlisp::read_file(job->path));
    job->status = 0;
  } catch (const vlisp::ExitRequest& e) {
    job->status = e.code;
  } catch (const vlisp::LispError& e) {
    report(e.type.c_str(), e.what());
    job->status = 1;
  } catch (const vlisp::BlockExit& b) {
    report("CONTROL-ERROR", "return for unknown block: " + b.name->name);
    job->status = 1;
  } catch (const vlisp::GoExit&) {
    report("CONTROL-ERROR", "go to an unknown tag");
    job->status = 1;
  } catch (const vlisp::ThrowExit&) {
    report("CONTROL-ERROR", "throw to an unknown catch tag");
    job->status = 1;
  } catch (const std::bad_alloc&) {
    report("STORAGE-CONDITION", "Heap exhausted, game over.");
    job->status = 1;
  }
  std::fflush(stdout);
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--version") {
      std::printf("%s\n", kVersion);
      return 0;
    }
    if (a == "--script" || a == "--load") {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "vlisp: %s needs a file argument\n", a.c_str());
        return 2;
      }
      path = argv[++i];
    } else if (!a.empty() && a[0] == '-') {
      std::fprintf(stderr, "vlisp: unknown option %s\n", a.c_str());
      return 2;
    } else {
      path = a;
    }
  }
  if (path.empty()) {
    std::fprintf(stderr, "usage: vlisp [--version] [--script] FILE\n");
    return 2;
  }

  Job job{path};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStackBytes);
  pthread_t tid;
  if (pthread_create(&tid, &attr, run, &job) != 0) {
    // Not enough address space for the big stack; run on the main thread.
    run(&job);
  } else {
    pthread_join(tid, nullptr);
  }
  pthread_attr_destroy(&attr);
  return job.status;
}
