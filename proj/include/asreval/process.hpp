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

// Child processes driven through /bin/sh -c with piped stdin/stdout. The
// child gets its own process group so a timeout kills the whole pipeline.

#ifndef ASREVAL_PROCESS_HPP_
#define ASREVAL_PROCESS_HPP_

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace asreval {

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProcessTimeout : public ProcessError {
 public:
  using ProcessError::ProcessError;
};

using Seconds = std::chrono::duration<double>;

class ChildProcess {
 public:
  // stdin is a pipe when `pipe_stdin`, otherwise /dev/null. stderr is inherited.
  static ChildProcess spawn(const std::string& shell_command, bool pipe_stdin = true);

  ChildProcess(ChildProcess&& other) noexcept;
  ChildProcess& operator=(ChildProcess&& other) noexcept;
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;
  ~ChildProcess();

  void write_all(std::string_view data);
  void close_stdin();

  // Throws ProcessTimeout when the deadline passes and ProcessError on EOF.
  std::string read_exact(std::size_t n, Seconds timeout);
  // Reads up to and including '\n'; the newline is not returned.
  std::string read_line(Seconds timeout, std::size_t max_bytes);
  // Reads until EOF.
  std::string read_to_end(Seconds timeout);

  // Blocks until exit and returns the exit code (128 + signal when killed).
  int wait();
  void kill();
  bool running() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

 private:
  ChildProcess() = default;
  bool fill(std::chrono::steady_clock::time_point deadline);
  void close_fds();

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string buffer_;
  std::optional<int> exit_code_;
};

struct CommandResult {
  int exit_code = 0;
  bool timed_out = false;
  std::string output;
};

// Runs to completion, capturing stdout. On timeout the process group is
// killed and `timed_out` is set.
CommandResult run_command(const std::string& shell_command, Seconds timeout);

// POSIX single-quote escaping for substitution into shell templates.
std::string shell_quote(std::string_view s);

}  // namespace asreval

#endif  // ASREVAL_PROCESS_HPP_
