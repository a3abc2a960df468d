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
#ifndef PAT_AUTH_HPP_
#define PAT_AUTH_HPP_

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "pat/timestamp.hpp"

namespace pat {

struct UserRecord {
  std::string user_id;
  std::string salt;  // hex
  std::string hash;  // hex PBKDF2-HMAC-SHA256
  int iterations = 0;
};

inline constexpr int kDefaultPbkdf2Iterations = 100000;

// PBKDF2-HMAC-SHA256, 32-byte output, hex encoded.
std::string hash_password(const std::string& password, const std::string& salt_hex,
                          int iterations);
// Fresh random salt.
UserRecord make_user(const std::string& user_id, const std::string& password,
                     int iterations = kDefaultPbkdf2Iterations);

// Users file: {"users": [{"user_id", "salt", "hash", "iterations"}]}.
// Throws kConfigError.
class UserDirectory {
 public:
  UserDirectory() = default;
  static UserDirectory load(const std::filesystem::path& path);

  void add(UserRecord record);
  // Constant-time comparison of the derived hash.
  bool verify(const std::string& user_id, const std::string& password) const;

 private:
  std::map<std::string, UserRecord> users_;
};

struct SessionToken {
  std::string token;  // 64 hex chars, 256 bits
  std::string user_id;
  Timestamp expires_at;
};

class TokenStore {
 public:
  using Clock = std::function<Timestamp()>;
  static constexpr std::chrono::hours kLifetime{24};

  explicit TokenStore(Clock clock = now_utc);

  SessionToken issue(const std::string& user_id);
  // The owning user, or nullopt for unknown or expired tokens.
  std::optional<std::string> authenticate(const std::string& token);

 private:
  Clock clock_;
  std::mutex mutex_;
  std::map<std::string, SessionToken> tokens_;
};

}  // namespace pat

#endif  // PAT_AUTH_HPP_
