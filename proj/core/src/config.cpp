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
#include "pat/config.hpp"

#include <cstdlib>
#include <initializer_list>
#include <string_view>

#include "pat/error.hpp"
#include "pat/store.hpp"

namespace pat {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) config_error(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) config_error("unknown key " + where + "." + item.key());
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(where + "." + key + " has the wrong type");
  }
}

fs::path resolve(const fs::path& base_dir, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() || base_dir.empty() ? p : (base_dir / p).lexically_normal();
}

FilterDescriptor parse_plugin(const json& j, std::size_t i) {
  const std::string where = "plugins[" + std::to_string(i) + "]";
  check_keys(j, where, {"id", "title", "section", "command", "url", "timeout_ms", "enabled"});
  FilterDescriptor d;
  d.kind = FilterKind::kExternal;
  std::string section = "custom";
  read(j, "id", d.id, where);
  read(j, "title", d.title, where);
  read(j, "section", section, where);
  read(j, "timeout_ms", d.timeout_ms, where);
  read(j, "enabled", d.enabled, where);
  const auto parsed = parse_section(section);
  if (!parsed) config_error(where + ".section is not a known section: " + section);
  d.section = *parsed;
  if (d.title.empty()) d.title = d.id;
  ExternalSpec spec;
  read(j, "command", spec.command, where);
  read(j, "url", spec.url, where);
  d.external_spec = spec;
  try {
    d.validate();
  } catch (const Error& e) {
    config_error(where + ": " + e.what());
  }
  return d;
}

}  // namespace

ServiceConfig parse_config(const json& doc, const fs::path& base_dir) {
  check_keys(doc, "config",
             {"listen", "store_path", "users_file", "cors_origin", "worker_cap",
              "sync_timeout_ms", "resize", "pipeline", "builtins", "plugins"});
  ServiceConfig c;
  if (doc.contains("listen")) {
    const auto& l = doc.at("listen");
    check_keys(l, "listen", {"host", "port"});
    read(l, "host", c.host, "listen");
    read(l, "port", c.port, "listen");
  }
  std::string store_path, users_file;
  read(doc, "store_path", store_path, "config");
  read(doc, "users_file", users_file, "config");
  if (!store_path.empty()) c.store_path = resolve(base_dir, store_path);
  if (!users_file.empty()) c.users_file = resolve(base_dir, users_file);
  read(doc, "cors_origin", c.cors_origin, "config");
  read(doc, "worker_cap", c.worker_cap, "config");
  read(doc, "sync_timeout_ms", c.sync_timeout_ms, "config");
  if (c.port < 0 || c.port > 65535) config_error("listen.port out of range");
  if (c.worker_cap < 1) config_error("worker_cap must be at least 1");
  if (c.sync_timeout_ms < 0) config_error("sync_timeout_ms must be non-negative");

  auto& e = c.engine;
  if (doc.contains("resize")) {
    const auto& r = doc.at("resize");
    check_keys(r, "resize", {"max_width", "max_height", "warn_min_width", "warn_min_height"});
    read(r, "max_width", e.resize.max_w, "resize");
    read(r, "max_height", e.resize.max_h, "resize");
    read(r, "warn_min_width", e.resize.warn_min_w, "resize");
    read(r, "warn_min_height", e.resize.warn_min_h, "resize");
  }
  if (doc.contains("pipeline")) {
    const auto& p = doc.at("pipeline");
    check_keys(p, "pipeline", {"parallel", "text_min_height"});
    read(p, "parallel", e.pipeline.parallel, "pipeline");
    read(p, "text_min_height", e.pipeline.text_min_height, "pipeline");
  }
  if (doc.contains("builtins")) {
    const auto& b = doc.at("builtins");
    check_keys(b, "builtins", {"disabled", "color_suggestions", "entropy", "salience"});
    read(b, "disabled", e.disabled_builtins, "builtins");
    read(b, "color_suggestions", e.builtins.color_suggestions, "builtins");
    if (b.contains("entropy")) {
      const auto& en = b.at("entropy");
      check_keys(en, "builtins.entropy", {"window_radius", "bins"});
      read(en, "window_radius", e.builtins.entropy.window_radius, "builtins.entropy");
      read(en, "bins", e.builtins.entropy.bins, "builtins.entropy");
    }
    if (b.contains("salience")) {
      const auto& s = b.at("salience");
      check_keys(s, "builtins.salience", {"working_size", "box_size", "sigma"});
      read(s, "working_size", e.builtins.salience.working_size, "builtins.salience");
      read(s, "box_size", e.builtins.salience.box_size, "builtins.salience");
      read(s, "sigma", e.builtins.salience.sigma, "builtins.salience");
    }
  }
  if (doc.contains("plugins")) {
    const auto& plugins = doc.at("plugins");
    if (!plugins.is_array()) config_error("plugins must be an array");
    for (std::size_t i = 0; i < plugins.size(); ++i) {
      auto d = parse_plugin(plugins[i], i);
      auto& argv = d.external_spec->command;
      // A relative executable path containing a slash resolves like other paths.
      if (!argv.empty() && argv[0].find('/') != std::string::npos) {
        argv[0] = resolve(base_dir, argv[0]).string();
      }
      e.plugins.push_back(std::move(d));
    }
  }
  try {
    AnalysisEngine probe(e);
  } catch (const Error& err) {
    config_error(err.what());
  }
  return c;
}

ServiceConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    config_error("cannot read config " + path.string() + ": " + e.what());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_error("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc, fs::absolute(path).parent_path());
}

void apply_env_overrides(ServiceConfig& config) {
  const char* port = std::getenv("PAT_PORT");
  if (port == nullptr || *port == '\0') return;
  char* end = nullptr;
  const long value = std::strtol(port, &end, 10);
  if (*end != '\0' || value < 0 || value > 65535) config_error(std::string("invalid PAT_PORT ") + port);
  config.port = static_cast<int>(value);
}

}  // namespace pat
