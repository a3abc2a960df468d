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
#ifndef PAT_PLUGIN_HPP_
#define PAT_PLUGIN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pat/image.hpp"
#include "pat/section.hpp"

namespace pat {

enum class FilterKind { kBuiltin, kExternal };

std::string_view to_string(FilterKind kind);

// Where an external filter lives: a command line (process mode) or an HTTP
// endpoint. Exactly one of the two is set.
struct ExternalSpec {
  std::vector<std::string> command;
  std::string url;

  bool is_http() const { return !url.empty(); }
  void validate() const;

  friend bool operator==(const ExternalSpec&, const ExternalSpec&) = default;
};

struct FilterDescriptor {
  std::string id;  // unique, kebab-case
  std::string title;
  Section section = Section::kCustom;
  FilterKind kind = FilterKind::kBuiltin;
  std::optional<ExternalSpec> external_spec;  // iff kind == kExternal
  int timeout_ms = 30000;
  bool enabled = true;

  void validate() const;

  friend bool operator==(const FilterDescriptor&, const FilterDescriptor&) = default;
};

bool is_kebab_case(std::string_view id);

using BuiltinFilter = std::function<SectionPayload(const RasterImage&)>;

class FilterRegistry {
 public:
  struct Entry {
    FilterDescriptor descriptor;
    BuiltinFilter impl;  // empty for external filters
  };

  // Throws kDuplicateId, or kInvalidArgument for a malformed descriptor or a
  // builtin registered without an implementation.
  void register_filter(FilterDescriptor descriptor, BuiltinFilter impl = {});

  std::vector<FilterDescriptor> list_filters() const;
  const FilterDescriptor* find(std::string_view id) const;
  // Throws kNotFound for unknown ids.
  void set_enabled(std::string_view id, bool enabled);
  std::size_t enabled_count() const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

struct PipelineConfig {
  bool parallel = true;
  double text_min_height = 10.0;
};

// Runs every enabled filter and returns exactly one result per canonical
// section (unavailable placeholders where nothing ran) followed by one per
// enabled custom filter in registration order. Failures and timeouts are
// isolated to their own section. Throws kNoFiltersEnabled.
std::vector<SectionResult> run_pipeline(const RasterImage& img,
                                        const FilterRegistry& registry,
                                        const PipelineConfig& config = {});

// --- plugin wire protocol -------------------------------------------------

// 4-byte big-endian length followed by the body.
std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> body);
// Returns the body when `bytes` holds exactly one complete frame; throws
// kProtocolError otherwise.
std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> bytes);

// Parses a plugin response document into a payload on the image grid.
// Heatmaps of a different size are resampled; boxes are clipped to the image.
// Throws kProtocolError for malformed documents and kPluginReportedError for
// status "error".
SectionPayload decode_plugin_response(std::string_view document, int width,
                                      int height);

// Sends the image to the plugin and returns its decoded payload. Throws
// kSpawnError, kTimeout, kProtocolError or kPluginReportedError.
SectionPayload invoke_plugin(const ExternalSpec& spec, const RasterImage& img,
                             int timeout_ms);

// invoke_plugin folded into a SectionResult: errors become failed/timeout
// statuses with the message preserved. filter_id and section are left for the
// caller to fill.
SectionResult run_external(const ExternalSpec& spec, const RasterImage& img,
                           int timeout_ms);

}  // namespace pat

#endif  // PAT_PLUGIN_HPP_
