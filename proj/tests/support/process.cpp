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
#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

extern char** environ;

namespace pat::testing {
namespace {

struct Spawned {
  pid_t pid;
  int in_fd;
  int out_fd;
  int err_fd;
};

std::vector<std::string> merged_env(const Env& overrides) {
  std::map<std::string, std::string> env;
  for (char** e = environ; *e != nullptr; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string::npos) env[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  for (const auto& [k, v] : overrides) {
    if (v.empty()) {
      env.erase(k);
    } else {
      env[k] = v;
    }
  }
  std::vector<std::string> out;
  for (const auto& [k, v] : env) out.push_back(k + "=" + v);
  return out;
}

Spawned spawn(const std::vector<std::string>& argv, const Env& env) {
  int in[2], out[2], err[2];
  if (::pipe2(in, O_CLOEXEC) != 0 || ::pipe2(out, O_CLOEXEC) != 0 || ::pipe2(err, O_CLOEXEC) != 0) {
    throw std::runtime_error("pipe failed");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err[1], STDERR_FILENO);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  const auto env_strings = merged_env(env);
  std::vector<char*> envp;
  for (const auto& e : env_strings) envp.push_back(const_cast<char*>(e.c_str()));
  envp.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, args[0], &actions, nullptr, args.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(in[0]);
  ::close(out[1]);
  ::close(err[1]);
  if (rc != 0) {
    ::close(in[1]);
    ::close(out[0]);
    ::close(err[0]);
    throw std::runtime_error("posix_spawn " + argv[0] + ": " + std::strerror(rc));
  }
  return {pid, in[1], out[0], err[0]};
}

int wait_exit(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return -1;
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return -1;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          const Env& env) {
  ::signal(SIGPIPE, SIG_IGN);
  Spawned s = spawn(argv, env);
  ProcessResult result;
  std::size_t written = 0;
  if (input.empty()) {
    ::close(s.in_fd);
    s.in_fd = -1;
  }
  while (s.out_fd >= 0 || s.err_fd >= 0) {
    pollfd fds[3];
    int n = 0;
    if (s.out_fd >= 0) fds[n++] = {s.out_fd, POLLIN, 0};
    if (s.err_fd >= 0) fds[n++] = {s.err_fd, POLLIN, 0};
    if (s.in_fd >= 0) fds[n++] = {s.in_fd, POLLOUT, 0};
    if (::poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < n; ++i) {
      if (fds[i].revents == 0) continue;
      if (fds[i].fd == s.in_fd) {
        const ssize_t w = ::write(s.in_fd, input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 || written == input.size()) {
          ::close(s.in_fd);
          s.in_fd = -1;
        }
        continue;
      }
      char buf[8192];
      const ssize_t r = ::read(fds[i].fd, buf, sizeof(buf));
      if (r <= 0) {
        if (fds[i].fd == s.out_fd) s.out_fd = -1;
        else s.err_fd = -1;
        ::close(fds[i].fd);
        continue;
      }
      (fds[i].fd == s.out_fd ? result.out : result.err).append(buf, static_cast<std::size_t>(r));
    }
  }
  if (s.in_fd >= 0) ::close(s.in_fd);
  result.exit_code = wait_exit(s.pid);
  return result;
}

BackgroundProcess::BackgroundProcess(const std::vector<std::string>& argv, const Env& env) {
  Spawned s = spawn(argv, env);
  ::close(s.in_fd);
  pid_ = s.pid;
  out_fd_ = s.out_fd;
  err_fd_ = s.err_fd;
}

BackgroundProcess::~BackgroundProcess() {
  if (pid_ > 0) terminate();
}

std::optional<std::string> BackgroundProcess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0 || out_fd_ < 0) return std::nullopt;
    pollfd fds[2] = {{out_fd_, POLLIN, 0}, {err_fd_, POLLIN, 0}};
    if (::poll(fds, err_fd_ >= 0 ? 2 : 1, static_cast<int>(left.count())) <= 0) continue;
    char buf[4096];
    if (err_fd_ >= 0 && fds[1].revents != 0 && ::read(err_fd_, buf, sizeof(buf)) <= 0) {
      ::close(err_fd_);
      err_fd_ = -1;
    }
    if (fds[0].revents == 0) continue;
    const ssize_t r = ::read(out_fd_, buf, sizeof(buf));
    if (r <= 0) {
      ::close(out_fd_);
      out_fd_ = -1;
      continue;
    }
    buffer_.append(buf, static_cast<std::size_t>(r));
  }
}

int BackgroundProcess::terminate() {
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGTERM);
  const int code = wait_exit(pid_);
  pid_ = -1;
  if (out_fd_ >= 0) ::close(out_fd_);
  if (err_fd_ >= 0) ::close(err_fd_);
  out_fd_ = err_fd_ = -1;
  return code;
}

}  // namespace pat::testing
