// Copyright 2026 The asreval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asreval/process.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <mutex>
#include <utility>

namespace asreval {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_message(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

int remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left < 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

Clock::time_point deadline_after(Seconds timeout) {
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout);
}

}  // namespace

ChildProcess ChildProcess::spawn(const std::string& shell_command, bool pipe_stdin) {
  ignore_sigpipe();
  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  if (pipe_stdin && pipe2(in_pipe, O_CLOEXEC) != 0) throw ProcessError(errno_message("pipe"));
  if (pipe2(out_pipe, O_CLOEXEC) != 0) throw ProcessError(errno_message("pipe"));

  const pid_t pid = fork();
  if (pid < 0) throw ProcessError(errno_message("fork"));
  if (pid == 0) {
    setpgid(0, 0);
    if (pipe_stdin) {
      dup2(in_pipe[0], STDIN_FILENO);
    } else {
      int devnull = open("/dev/null", O_RDONLY);
      if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    }
    dup2(out_pipe[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", shell_command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);

  ChildProcess child;
  child.pid_ = pid;
  if (pipe_stdin) {
    close(in_pipe[0]);
    child.stdin_fd_ = in_pipe[1];
  }
  close(out_pipe[1]);
  child.stdout_fd_ = out_pipe[0];
  return child;
}

ChildProcess::ChildProcess(ChildProcess&& other) noexcept
    : pid_(std::exchange(other.pid_, -1)),
      stdin_fd_(std::exchange(other.stdin_fd_, -1)),
      stdout_fd_(std::exchange(other.stdout_fd_, -1)),
      buffer_(std::move(other.buffer_)),
      exit_code_(other.exit_code_) {}

ChildProcess& ChildProcess::operator=(ChildProcess&& other) noexcept {
  if (this != &other) {
    if (pid_ > 0) {
      kill();
      wait();
    }
    close_fds();
    pid_ = std::exchange(other.pid_, -1);
    stdin_fd_ = std::exchange(other.stdin_fd_, -1);
    stdout_fd_ = std::exchange(other.stdout_fd_, -1);
    buffer_ = std::move(other.buffer_);
    exit_code_ = other.exit_code_;
  }
  return *this;
}

ChildProcess::~ChildProcess() {
  if (pid_ > 0) {
    close_stdin();
    kill();
    wait();
  }
  close_fds();
}

void ChildProcess::close_fds() {
  if (stdin_fd_ >= 0) close(stdin_fd_);
  if (stdout_fd_ >= 0) close(stdout_fd_);
  stdin_fd_ = stdout_fd_ = -1;
}

void ChildProcess::write_all(std::string_view data) {
  if (stdin_fd_ < 0) throw ProcessError("child stdin is closed");
  while (!data.empty()) {
    ssize_t n = ::write(stdin_fd_, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProcessError(errno_message("write to child"));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void ChildProcess::close_stdin() {
  if (stdin_fd_ >= 0) {
    close(stdin_fd_);
    stdin_fd_ = -1;
  }
}

bool ChildProcess::fill(Clock::time_point deadline) {
  if (stdout_fd_ < 0) return false;
  for (;;) {
    pollfd pfd{stdout_fd_, POLLIN, 0};
    int rc = poll(&pfd, 1, remaining_ms(deadline));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ProcessError(errno_message("poll"));
    }
    if (rc == 0) throw ProcessTimeout("timed out waiting for child output");
    char chunk[65536];
    ssize_t n = ::read(stdout_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ProcessError(errno_message("read from child"));
    }
    if (n == 0) return false;
    buffer_.append(chunk, static_cast<std::size_t>(n));
    return true;
  }
}

std::string ChildProcess::read_exact(std::size_t n, Seconds timeout) {
  const auto deadline = deadline_after(timeout);
  while (buffer_.size() < n) {
    if (!fill(deadline)) throw ProcessError("child closed its output");
  }
  std::string out = buffer_.substr(0, n);
  buffer_.erase(0, n);
  return out;
}

std::string ChildProcess::read_line(Seconds timeout, std::size_t max_bytes) {
  const auto deadline = deadline_after(timeout);
  std::size_t scanned = 0;
  for (;;) {
    auto nl = buffer_.find('\n', scanned);
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    scanned = buffer_.size();
    if (scanned > max_bytes) throw ProcessError("child output line exceeds limit");
    if (!fill(deadline)) throw ProcessError("child closed its output");
  }
}

std::string ChildProcess::read_to_end(Seconds timeout) {
  const auto deadline = deadline_after(timeout);
  while (fill(deadline)) {
  }
  return std::exchange(buffer_, {});
}

int ChildProcess::wait() {
  if (exit_code_) return *exit_code_;
  if (pid_ <= 0) return -1;
  int status = 0;
  while (waitpid(pid_, &status, 0) < 0) {
    if (errno != EINTR) throw ProcessError(errno_message("waitpid"));
  }
  pid_ = -1;
  exit_code_ = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return *exit_code_;
}

void ChildProcess::kill() {
  if (pid_ > 0) ::kill(-pid_, SIGKILL);
}

CommandResult run_command(const std::string& shell_command, Seconds timeout) {
  CommandResult result;
  ChildProcess child = ChildProcess::spawn(shell_command, /*pipe_stdin=*/false);
  try {
    result.output = child.read_to_end(timeout);
  } catch (const ProcessTimeout&) {
    child.kill();
    child.wait();
    result.timed_out = true;
    result.exit_code = -1;
    return result;
  }
  result.exit_code = child.wait();
  return result;
}

std::string shell_quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

}  // namespace asreval
