/* Copyright 2026 The pat Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef PAT_TESTS_SUPPORT_PROCESS_HPP_
#define PAT_TESTS_SUPPORT_PROCESS_HPP_

#include <sys/types.h>

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pat::testing {

struct ProcessResult {
  int exit_code = -1;  // 128 + signal when killed
  std::string out;
  std::string err;
};

using Env = std::map<std::string, std::string>;

// Runs argv to completion. Env entries with empty values are removed from
// the child's environment.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input = {},
                          const Env& env = {});

// A long-running child whose stdout can be read line by line.
class BackgroundProcess {
 public:
  explicit BackgroundProcess(const std::vector<std::string>& argv, const Env& env = {});
  ~BackgroundProcess();
  BackgroundProcess(const BackgroundProcess&) = delete;
  BackgroundProcess& operator=(const BackgroundProcess&) = delete;

  std::optional<std::string> read_line(std::chrono::milliseconds timeout);
  // Sends SIGTERM and waits; returns the exit code.
  int terminate();

 private:
  pid_t pid_ = -1;
  int out_fd_ = -1;
  int err_fd_ = -1;  // drained and discarded so the child never sees EPIPE
  std::string buffer_;
};

}  // namespace pat::testing

#endif  // PAT_TESTS_SUPPORT_PROCESS_HPP_
