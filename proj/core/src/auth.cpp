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
#include "pat/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <nlohmann/json.hpp>
#include <vector>

#include "pat/error.hpp"
#include "pat/hash.hpp"
#include "pat/store.hpp"

namespace pat {
namespace {

std::vector<unsigned char> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "odd-length hex string");
  std::vector<unsigned char> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<unsigned char>(std::stoi(hex.substr(2 * i, 2), nullptr, 16));
  }
  return out;
}

}  // namespace

std::string hash_password(const std::string& password, const std::string& salt_hex,
                          int iterations) {
  if (iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be positive");
  const auto salt = from_hex(salt_hex);
  std::uint8_t out[32];
  if (::PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                          static_cast<int>(salt.size()), iterations, EVP_sha256(), sizeof(out),
                          out) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "PBKDF2 failed");
  }
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string hex;
  for (auto b : out) {
    hex.push_back(kDigits[b >> 4]);
    hex.push_back(kDigits[b & 0xF]);
  }
  return hex;
}

UserRecord make_user(const std::string& user_id, const std::string& password, int iterations) {
  const std::string salt = random_hex(16);
  return {user_id, salt, hash_password(password, salt, iterations), iterations};
}

UserDirectory UserDirectory::load(const std::filesystem::path& path) {
  UserDirectory dir;
  try {
    const auto doc = nlohmann::json::parse(read_text_file(path));
    for (const auto& u : doc.at("users")) {
      dir.add({u.at("user_id").get<std::string>(), u.at("salt").get<std::string>(),
               u.at("hash").get<std::string>(), u.at("iterations").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, "invalid users file " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, "cannot load users file " + path.string() + ": " + e.what());
  }
  return dir;
}

void UserDirectory::add(UserRecord record) {
  if (record.user_id.empty() || record.iterations < 1 || record.hash.size() != 64) {
    throw Error(ErrorCode::kConfigError, "malformed user record " + record.user_id);
  }
  users_[record.user_id] = std::move(record);
}

bool UserDirectory::verify(const std::string& user_id, const std::string& password) const {
  const auto it = users_.find(user_id);
  if (it == users_.end()) return false;
  const auto& u = it->second;
  const std::string derived = hash_password(password, u.salt, u.iterations);
  return derived.size() == u.hash.size() &&
         CRYPTO_memcmp(derived.data(), u.hash.data(), derived.size()) == 0;
}

TokenStore::TokenStore(Clock clock) : clock_(std::move(clock)) {}

SessionToken TokenStore::issue(const std::string& user_id) {
  SessionToken t{random_hex(32), user_id,
                 clock_() + std::chrono::duration_cast<std::chrono::milliseconds>(kLifetime)};
  std::lock_guard<std::mutex> lock(mutex_);
  tokens_[t.token] = t;
  return t;
}

std::optional<std::string> TokenStore::authenticate(const std::string& token) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  if (clock_() >= it->second.expires_at) {
    tokens_.erase(it);
    return std::nullopt;
  }
  return it->second.user_id;
}

}  // namespace pat
