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

// Child process execution with a wall-clock deadline, an address-space cap
// and bounded output capture. Each child leads its own process group, and
// the whole group is killed before the call returns.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstddef>
#include <cstring>
#include <string>
#include <system_error>
#include <vector>

extern char** environ;

namespace verdict {

struct ProcessLimits {
  std::chrono::nanoseconds timeout = std::chrono::seconds(5);
  std::size_t memory_cap = std::size_t{512} << 20;  // RLIMIT_AS; 0 leaves it unset
  std::size_t max_output = std::size_t{64} << 10;   // stdout bytes before the child is killed
  std::size_t max_stderr = std::size_t{64} << 10;   // stderr bytes kept; the rest is drained
};

struct ProcessResult {
  int exec_errno = 0;  // nonzero when the executable could not be started
  int exit_code = -1;
  int term_signal = 0;
  bool timed_out = false;
  bool output_overflow = false;
  std::string out;
  std::string err;
  std::chrono::nanoseconds wall_time{0};

  bool exited_cleanly() const {
    return exec_errno == 0 && !timed_out && !output_overflow && term_signal == 0 &&
           exit_code == 0;
  }
};

// Live and peak counts of children started through run_process.
class ProcessCounter {
 public:
  static ProcessCounter& instance() {
    static ProcessCounter c;
    return c;
  }

  void enter() {
    int now = live_.fetch_add(1) + 1;
    int peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
    started_.fetch_add(1);
  }
  void leave() { live_.fetch_sub(1); }

  int live() const { return live_.load(); }
  int peak() const { return peak_.load(); }
  long started() const { return started_.load(); }
  void reset_peak() { peak_.store(live_.load()); }

 private:
  std::atomic<int> live_{0};
  std::atomic<int> peak_{0};
  std::atomic<long> started_{0};
};

namespace detail {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  explicit operator bool() const noexcept { return fd_ >= 0; }
  void reset() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

inline void make_pipe(Fd& r, Fd& w) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw std::system_error(errno, std::generic_category(), "pipe2");
  r = Fd(fds[0]);
  w = Fd(fds[1]);
}

inline int pidfd_open(pid_t pid) {
#ifdef SYS_pidfd_open
  return static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
#else
  (void)pid;
  errno = ENOSYS;
  return -1;
#endif
}

// Async-signal-safe child setup; never returns.
[[noreturn]] inline void child_exec(char* const* argv, const char* cwd, int out_fd, int err_fd,
                                    int null_fd, int report_fd, const ProcessLimits& limits) {
  ::setpgid(0, 0);
  sigset_t none;
  sigemptyset(&none);
  ::sigprocmask(SIG_SETMASK, &none, nullptr);
  for (int sig : {SIGPIPE, SIGINT, SIGTERM, SIGHUP, SIGQUIT, SIGCHLD}) ::signal(sig, SIG_DFL);
  if (::dup2(null_fd, 0) < 0 || ::dup2(out_fd, 1) < 0 || ::dup2(err_fd, 2) < 0) {
    int e = errno;
    (void)!::write(report_fd, &e, sizeof e);
    ::_exit(127);
  }
  if (limits.memory_cap > 0) {
    rlimit as{limits.memory_cap, limits.memory_cap};
    ::setrlimit(RLIMIT_AS, &as);
  }
  rlimit core{0, 0};
  ::setrlimit(RLIMIT_CORE, &core);
  if (cwd && ::chdir(cwd) != 0) {
    int e = errno;
    (void)!::write(report_fd, &e, sizeof e);
    ::_exit(127);
  }
  ::execve(argv[0], argv, environ);
  int e = errno;
  (void)!::write(report_fd, &e, sizeof e);
  ::_exit(127);
}

inline void append_capped(std::string& dst, const char* buf, std::size_t n, std::size_t cap,
                          bool& overflow) {
  std::size_t room = dst.size() < cap ? cap - dst.size() : 0;
  if (n > room) overflow = true;
  dst.append(buf, std::min(n, room));
}

}  // namespace detail

// Runs argv[0] (an absolute or relative path, not searched on PATH) with
// stdin from /dev/null. Blocks until the child and its process group are
// gone. Throws std::system_error only for resource failures in the parent.
inline ProcessResult run_process(const std::vector<std::string>& args, const ProcessLimits& limits,
                                 const std::string& cwd = {}) {
  using clock = std::chrono::steady_clock;
  ProcessResult res;
  if (args.empty()) {
    res.exec_errno = ENOENT;
    return res;
  }
  std::vector<char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  detail::Fd out_r, out_w, err_r, err_w, rep_r, rep_w;
  detail::make_pipe(out_r, out_w);
  detail::make_pipe(err_r, err_w);
  detail::make_pipe(rep_r, rep_w);
  detail::Fd null_fd(::open("/dev/null", O_RDONLY | O_CLOEXEC));
  if (!null_fd) throw std::system_error(errno, std::generic_category(), "open /dev/null");

  auto start = clock::now();
  auto deadline = start + limits.timeout;
  ProcessCounter::instance().enter();
  pid_t pid = ::fork();
  if (pid < 0) {
    int e = errno;
    ProcessCounter::instance().leave();
    throw std::system_error(e, std::generic_category(), "fork");
  }
  if (pid == 0)
    detail::child_exec(argv.data(), cwd.empty() ? nullptr : cwd.c_str(), out_w.get(), err_w.get(),
                       null_fd.get(), rep_w.get(), limits);

  ::setpgid(pid, pid);  // also done in the child; whichever runs first wins
  out_w.reset();
  err_w.reset();
  rep_w.reset();
  null_fd.reset();

  int e = 0;
  ssize_t got;
  do {
    got = ::read(rep_r.get(), &e, sizeof e);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof e)) res.exec_errno = e;

  detail::Fd pidfd(detail::pidfd_open(pid));
  bool exited = false;
  bool out_open = true, err_open = true;
  char buf[16384];
  bool kill_now = res.exec_errno != 0;

  while (!kill_now && (!exited || out_open || err_open)) {
    auto now = clock::now();
    if (now >= deadline) {
      res.timed_out = true;
      break;
    }
    auto remaining = std::chrono::ceil<std::chrono::milliseconds>(deadline - now).count();
    pollfd fds[3];
    int nfds = 0, out_i = -1, err_i = -1, pid_i = -1;
    if (out_open) {
      out_i = nfds;
      fds[nfds++] = {out_r.get(), POLLIN, 0};
    }
    if (err_open) {
      err_i = nfds;
      fds[nfds++] = {err_r.get(), POLLIN, 0};
    }
    if (!exited && pidfd) {
      pid_i = nfds;
      fds[nfds++] = {pidfd.get(), POLLIN, 0};
    }
    int timeout_ms = static_cast<int>(std::min<long long>(remaining, pidfd ? 1000 : 20));
    int rc = ::poll(fds, static_cast<nfds_t>(nfds), timeout_ms);
    if (rc < 0 && errno != EINTR) break;
    if (out_i >= 0 && (fds[out_i].revents & (POLLIN | POLLHUP | POLLERR))) {
      ssize_t n = ::read(out_r.get(), buf, sizeof buf);
      if (n > 0) {
        detail::append_capped(res.out, buf, static_cast<std::size_t>(n), limits.max_output,
                              res.output_overflow);
        if (res.output_overflow) kill_now = true;
      } else if (n == 0 || errno != EINTR) {
        out_open = false;
      }
    }
    if (err_i >= 0 && (fds[err_i].revents & (POLLIN | POLLHUP | POLLERR))) {
      ssize_t n = ::read(err_r.get(), buf, sizeof buf);
      if (n > 0) {
        bool ignored = false;
        detail::append_capped(res.err, buf, static_cast<std::size_t>(n), limits.max_stderr, ignored);
      } else if (n == 0 || errno != EINTR) {
        err_open = false;
      }
    }
    if (pid_i >= 0 && (fds[pid_i].revents & POLLIN)) exited = true;
    if (!pidfd && !exited) {
      siginfo_t info{};
      if (::waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) == 0 &&
          info.si_pid == pid)
        exited = true;
    }
    // The leader is gone but a descendant still holds the pipes open.
    if (exited && (out_open || err_open)) {
      ::fcntl(out_r.get(), F_SETFL, O_NONBLOCK);
      ::fcntl(err_r.get(), F_SETFL, O_NONBLOCK);
      for (int i = 0; out_open && i < 64 && !res.output_overflow; ++i) {
        ssize_t n = ::read(out_r.get(), buf, sizeof buf);
        if (n <= 0) break;
        detail::append_capped(res.out, buf, static_cast<std::size_t>(n), limits.max_output,
                              res.output_overflow);
      }
      for (int i = 0; err_open && i < 64; ++i) {
        ssize_t n = ::read(err_r.get(), buf, sizeof buf);
        if (n <= 0) break;
        bool ignored = false;
        detail::append_capped(res.err, buf, static_cast<std::size_t>(n), limits.max_stderr, ignored);
      }
      break;
    }
  }

  ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  ProcessCounter::instance().leave();
  res.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start);
  if (res.exec_errno != 0) return res;
  if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    res.term_signal = WTERMSIG(status);
  }
  return res;
}

}  // namespace verdict
