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
#ifndef PAT_CONFIG_HPP_
#define PAT_CONFIG_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pat/engine.hpp"

namespace pat {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store_path;  // empty: caller decides
  std::filesystem::path users_file;
  std::string cors_origin;
  int worker_cap = 2;
  int sync_timeout_ms = 60000;
  EngineConfig engine;
};

// Unknown keys are rejected. Relative paths resolve against base_dir.
// Throws kConfigError.
ServiceConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

// PAT_PORT replaces the listen port when set.
void apply_env_overrides(ServiceConfig& config);

}  // namespace pat

#endif  // PAT_CONFIG_HPP_
