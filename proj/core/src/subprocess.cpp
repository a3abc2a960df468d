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
#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include "pat/error.hpp"

extern char** environ;

namespace pat::internal {
namespace {

constexpr std::size_t kMaxFrameBytes = 64u << 20;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    reset(o.release());
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  int release() {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

void make_pipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kSpawnError,
                std::string("pipe2 failed: ") + std::strerror(errno));
  }
  read_end.reset(fds[0]);
  write_end.reset(fds[1]);
}

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction current {};
    ::sigaction(SIGPIPE, nullptr, &current);
    if (current.sa_handler == SIG_DFL) ::signal(SIGPIPE, SIG_IGN);
  });
}

// Owns the child process group; kills and reaps it on destruction.
class ChildGroup {
 public:
  explicit ChildGroup(pid_t pid) : pid_(pid) {}
  ChildGroup(const ChildGroup&) = delete;
  ChildGroup& operator=(const ChildGroup&) = delete;
  ~ChildGroup() { terminate(std::chrono::milliseconds(0)); }

  // Waits up to `grace` for a voluntary exit, then SIGKILLs the group.
  void terminate(std::chrono::milliseconds grace) {
    if (reaped_) return;
    const auto deadline = std::chrono::steady_clock::now() + grace;
    while (true) {
      int status = 0;
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || (r < 0 && errno == ECHILD)) break;
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    // Grandchildren may still hold the group alive.
    ::kill(-pid_, SIGKILL);
    reaped_ = true;
  }

 private:
  pid_t pid_;
  bool reaped_ = false;
};

}  // namespace

std::vector<std::uint8_t> exchange_frame(const std::vector<std::string>& argv,
                                         std::span<const std::uint8_t> request,
                                         int timeout_ms) {
  if (argv.empty()) {
    throw Error(ErrorCode::kSpawnError, "empty plugin command");
  }
  ignore_sigpipe_once();
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::milliseconds(timeout_ms);

  Fd in_read, in_write, out_read, out_write, err_read, err_write;
  make_pipe(in_read, in_write);
  make_pipe(out_read, out_write);
  make_pipe(err_read, err_write);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_read.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_write.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_write.get(), STDERR_FILENO);

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t defaults, empty;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigemptyset(&empty);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF |
                                      POSIX_SPAWN_SETSIGMASK);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(),
                                environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw Error(ErrorCode::kSpawnError,
                "cannot start '" + argv[0] + "': " + std::strerror(rc));
  }
  ChildGroup child(pid);
  in_read.reset();
  out_write.reset();
  err_write.reset();

  ::fcntl(in_write.get(), F_SETFL, O_NONBLOCK);
  std::size_t written = 0;
  std::vector<std::uint8_t> response;
  std::string stderr_tail;
  bool stdout_open = true;

  auto frame_complete = [&] {
    if (response.size() < 4) return false;
    const std::size_t len = (std::size_t(response[0]) << 24) |
                            (std::size_t(response[1]) << 16) |
                            (std::size_t(response[2]) << 8) | response[3];
    if (len > kMaxFrameBytes) {
      throw Error(ErrorCode::kProtocolError, "plugin frame exceeds size limit");
    }
    return response.size() >= 4 + len;
  };

  while (!frame_complete()) {
    if (!stdout_open) {
      std::string msg = "plugin closed its output before sending a full frame";
      if (!stderr_tail.empty()) msg += ": " + stderr_tail;
      throw Error(ErrorCode::kProtocolError, msg);
    }
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      child.terminate(std::chrono::milliseconds(0));
      throw Error(ErrorCode::kTimeout, "plugin exceeded " +
                                           std::to_string(timeout_ms) + " ms");
    }
    const int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count()) + 1;

    pollfd fds[3];
    int nfds = 0;
    fds[nfds++] = {out_read.get(), POLLIN, 0};
    const int err_index = err_read.get() >= 0 ? nfds : -1;
    if (err_index >= 0) fds[nfds++] = {err_read.get(), POLLIN, 0};
    const int in_index = in_write.get() >= 0 ? nfds : -1;
    if (in_index >= 0) fds[nfds++] = {in_write.get(), POLLOUT, 0};

    const int ready = ::poll(fds, nfds, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProtocolError,
                  std::string("poll failed: ") + std::strerror(errno));
    }

    if (in_index >= 0 && fds[in_index].revents) {
      if (fds[in_index].revents & (POLLERR | POLLHUP)) {
        in_write.reset();
      } else {
        const ssize_t n = ::write(in_write.get(), request.data() + written,
                                  request.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) in_write.reset();
        if (written == request.size()) in_write.reset();
      }
    }
    if (err_index >= 0 && fds[err_index].revents) {
      char buf[4096];
      const ssize_t n = ::read(err_read.get(), buf, sizeof(buf));
      if (n > 0) {
        stderr_tail.append(buf, static_cast<std::size_t>(n));
        if (stderr_tail.size() > 2048) stderr_tail.erase(0, stderr_tail.size() - 2048);
      } else if (n == 0) {
        err_read.reset();
      }
    }
    if (fds[0].revents) {
      std::uint8_t buf[65536];
      const ssize_t n = ::read(out_read.get(), buf, sizeof(buf));
      if (n > 0) {
        response.insert(response.end(), buf, buf + n);
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        stdout_open = false;
      }
    }
  }
  child.terminate(std::chrono::milliseconds(200));

  const std::size_t len = response.size() - 4;
  if (len != ((std::size_t(response[0]) << 24) | (std::size_t(response[1]) << 16) |
              (std::size_t(response[2]) << 8) | response[3])) {
    throw Error(ErrorCode::kProtocolError, "trailing bytes after response frame");
  }
  return {response.begin() + 4, response.end()};
}

}  // namespace pat::internal
