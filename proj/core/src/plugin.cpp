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
#include "pat/plugin.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pat/error.hpp"
#include "pat/hash.hpp"
#include "subprocess.hpp"

namespace pat {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

std::int64_t elapsed_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

[[noreturn]] void protocol_error(const std::string& what) {
  throw Error(ErrorCode::kProtocolError, "plugin response: " + what);
}

double number_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    protocol_error(std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

BBox clipped_box(const json& obj, int width, int height) {
  const double x = number_field(obj, "x"), y = number_field(obj, "y");
  const double w = number_field(obj, "w"), h = number_field(obj, "h");
  if (w <= 0 || h <= 0) protocol_error("box with non-positive extent");
  const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, width - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, height - 1);
  const int x1 = std::clamp(static_cast<int>(std::ceil(x + w)), x0 + 1, width);
  const int y1 = std::clamp(static_cast<int>(std::ceil(y + h)), y0 + 1, height);
  return {x0, y0, x1 - x0, y1 - y0};
}

double confidence_field(const json& obj) {
  const double c = number_field(obj, "confidence");
  if (!(c >= 0.0 && c <= 1.0)) protocol_error("confidence outside [0,1]");
  return c;
}

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "plugin url lacks a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string invoke_http(const std::string& url, const std::vector<std::uint8_t>& png,
                        int timeout_ms) {
  const auto [origin, path] = split_url(url);
  httplib::Client client(origin);
  const auto timeout = std::chrono::milliseconds(timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const auto start = Clock::now();
  auto res = client.Post(path, reinterpret_cast<const char*>(png.data()),
                         png.size(), "image/png");
  if (!res) {
    const auto err = res.error();
    if (elapsed_since(start) >= timeout_ms - 5) {
      throw Error(ErrorCode::kTimeout, "plugin endpoint exceeded " +
                                           std::to_string(timeout_ms) + " ms");
    }
    if (err == httplib::Error::Connection) {
      throw Error(ErrorCode::kSpawnError, "cannot reach plugin endpoint " + url);
    }
    throw Error(ErrorCode::kProtocolError,
                "plugin endpoint request failed: " + httplib::to_string(err));
  }
  if (res->status != 200) {
    // An error document is still surfaced as the plugin's own message.
    try {
      const json doc = json::parse(res->body);
      if (doc.value("status", "") == "error") {
        throw Error(ErrorCode::kPluginReportedError,
                    doc.value("error", std::string("plugin reported an error")));
      }
    } catch (const json::exception&) {
    }
    protocol_error("HTTP status " + std::to_string(res->status));
  }
  return res->body;
}

bool payload_fits(Section section, const SectionPayload& payload) {
  switch (section) {
    case Section::kEntropy:
    case Section::kGaze:
    case Section::kLowLevelSalience:
      return std::holds_alternative<Heatmap>(payload);
    case Section::kObjects:
      return std::holds_alternative<ObjectBoxes>(payload);
    case Section::kText:
      return std::holds_alternative<TextFindings>(payload);
    case Section::kCvd:
      return std::holds_alternative<ImageVariantSet>(payload);
    case Section::kSpecs:
      return std::holds_alternative<SpecsTable>(payload);
    case Section::kCustom:
      return true;
  }
  return false;
}

SectionResult execute(const FilterRegistry::Entry& entry, const RasterImage& img) {
  const FilterDescriptor& d = entry.descriptor;
  SectionResult result;
  if (d.kind == FilterKind::kExternal) {
    result = run_external(*d.external_spec, img, d.timeout_ms);
  } else {
    const auto start = Clock::now();
    try {
      result.payload = entry.impl(img);
      result.status = SectionStatus::kOk;
    } catch (const std::exception& e) {
      result.status = SectionStatus::kFailed;
      result.message = e.what();
    }
    result.elapsed_ms = elapsed_since(start);
  }
  result.filter_id = d.id;
  result.section = d.section;
  if (result.status == SectionStatus::kOk &&
      !payload_fits(d.section, result.payload)) {
    result.status = SectionStatus::kFailed;
    result.message = std::string("payload kind '") +
                     std::string(payload_kind(result.payload)) +
                     "' does not fit section '" +
                     std::string(to_string(d.section)) + "'";
    result.payload = std::monostate{};
  }
  return result;
}

// Several filters may feed one canonical section. Text results are merged
// (external OCR takes precedence); otherwise the first ok external result
// wins, then the first ok builtin, then the first failure.
SectionResult combine(Section section, const std::vector<const SectionResult*>& results,
                      const std::vector<FilterKind>& kinds,
                      const PipelineConfig& config) {
  if (results.size() == 1) return *results.front();

  if (section == Section::kText) {
    std::vector<TextRegion> builtin, external;
    std::string ids;
    std::int64_t elapsed = 0;
    bool any_ok = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
      const SectionResult& r = *results[i];
      elapsed = std::max(elapsed, r.elapsed_ms);
      if (r.status != SectionStatus::kOk) continue;
      any_ok = true;
      const auto& found = std::get<TextFindings>(r.payload).regions;
      auto& dst = kinds[i] == FilterKind::kExternal ? external : builtin;
      dst.insert(dst.end(), found.begin(), found.end());
      ids += (ids.empty() ? "" : "+") + r.filter_id;
    }
    if (any_ok) {
      SectionResult merged;
      merged.filter_id = ids;
      merged.section = section;
      merged.status = SectionStatus::kOk;
      merged.elapsed_ms = elapsed;
      TextFindings findings;
      findings.regions = merge_ocr_results(builtin, external);
      findings.warnings = legibility_flags(findings.regions, config.text_min_height);
      merged.payload = std::move(findings);
      return merged;
    }
    return *results.front();
  }

  for (FilterKind preferred : {FilterKind::kExternal, FilterKind::kBuiltin}) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (kinds[i] == preferred && results[i]->status == SectionStatus::kOk) {
        return *results[i];
      }
    }
  }
  return *results.front();
}

}  // namespace

std::string_view to_string(FilterKind kind) {
  return kind == FilterKind::kBuiltin ? "builtin" : "external";
}

void ExternalSpec::validate() const {
  if (command.empty() == url.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "external spec needs exactly one of command or url");
  }
  if (!command.empty() && command.front().empty()) {
    throw Error(ErrorCode::kInvalidArgument, "external command is empty");
  }
  if (!url.empty() && url.rfind("http://", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "plugin url must be http://");
  }
}

bool is_kebab_case(std::string_view id) {
  if (id.empty() || id.front() == '-' || id.back() == '-') return false;
  char prev = 0;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    if (!ok || (c == '-' && prev == '-')) return false;
    prev = c;
  }
  return true;
}

void FilterDescriptor::validate() const {
  if (!is_kebab_case(id)) {
    throw Error(ErrorCode::kInvalidArgument, "filter id must be kebab-case: '" + id + "'");
  }
  if (timeout_ms < 100) {
    throw Error(ErrorCode::kInvalidArgument, "timeout_ms must be >= 100");
  }
  if ((kind == FilterKind::kExternal) != external_spec.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "external_spec must be present iff the filter is external");
  }
  if (external_spec) external_spec->validate();
}

void FilterRegistry::register_filter(FilterDescriptor descriptor, BuiltinFilter impl) {
  descriptor.validate();
  if (find(descriptor.id) != nullptr) {
    throw Error(ErrorCode::kDuplicateId, "filter already registered: " + descriptor.id);
  }
  if (descriptor.kind == FilterKind::kBuiltin && !impl) {
    throw Error(ErrorCode::kInvalidArgument,
                "builtin filter needs an implementation: " + descriptor.id);
  }
  entries_.push_back({std::move(descriptor), std::move(impl)});
}

std::vector<FilterDescriptor> FilterRegistry::list_filters() const {
  std::vector<FilterDescriptor> out;
  for (const auto& e : entries_) out.push_back(e.descriptor);
  return out;
}

const FilterDescriptor* FilterRegistry::find(std::string_view id) const {
  for (const auto& e : entries_) {
    if (e.descriptor.id == id) return &e.descriptor;
  }
  return nullptr;
}

void FilterRegistry::set_enabled(std::string_view id, bool enabled) {
  for (auto& e : entries_) {
    if (e.descriptor.id == id) {
      e.descriptor.enabled = enabled;
      return;
    }
  }
  throw Error(ErrorCode::kNotFound, "no such filter: " + std::string(id));
}

std::size_t FilterRegistry::enabled_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(),
      [](const Entry& e) { return e.descriptor.enabled; }));
}

std::vector<SectionResult> run_pipeline(const RasterImage& img,
                                        const FilterRegistry& registry,
                                        const PipelineConfig& config) {
  std::vector<const FilterRegistry::Entry*> active;
  for (const auto& e : registry.entries()) {
    if (e.descriptor.enabled) active.push_back(&e);
  }
  if (active.empty()) {
    throw Error(ErrorCode::kNoFiltersEnabled, "no filters are enabled");
  }

  std::vector<SectionResult> results(active.size());
  if (config.parallel && active.size() > 1) {
    std::vector<std::jthread> workers;
    workers.reserve(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      workers.emplace_back([&, i] { results[i] = execute(*active[i], img); });
    }
  } else {
    for (std::size_t i = 0; i < active.size(); ++i) {
      results[i] = execute(*active[i], img);
    }
  }

  std::vector<SectionResult> out;
  for (Section section : kCanonicalSections) {
    std::vector<const SectionResult*> mine;
    std::vector<FilterKind> kinds;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (active[i]->descriptor.section == section) {
        mine.push_back(&results[i]);
        kinds.push_back(active[i]->descriptor.kind);
      }
    }
    if (mine.empty()) {
      out.push_back(SectionResult::unavailable(section, {}, "no enabled filter"));
    } else {
      out.push_back(combine(section, mine, kinds, config));
    }
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i]->descriptor.section == Section::kCustom) {
      out.push_back(results[i]);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> body) {
  if (body.size() > 0xFFFFFFFFu) throw Error(ErrorCode::kInvalidArgument, "frame body too large");
  const auto n = static_cast<std::uint32_t>(body.size());
  std::vector<std::uint8_t> out(body.size() + 4);
  out[0] = static_cast<std::uint8_t>(n >> 24);
  out[1] = static_cast<std::uint8_t>(n >> 16);
  out[2] = static_cast<std::uint8_t>(n >> 8);
  out[3] = static_cast<std::uint8_t>(n);
  std::copy(body.begin(), body.end(), out.begin() + 4);
  return out;
}

std::vector<std::uint8_t> decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) protocol_error("frame shorter than its header");
  const std::size_t n = (std::size_t(bytes[0]) << 24) | (std::size_t(bytes[1]) << 16) |
                        (std::size_t(bytes[2]) << 8) | bytes[3];
  if (bytes.size() != n + 4) protocol_error("frame length does not match header");
  return {bytes.begin() + 4, bytes.end()};
}

SectionPayload decode_plugin_response(std::string_view document, int width,
                                      int height) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    protocol_error(std::string("not a JSON document: ") + e.what());
  }
  if (!doc.is_object()) protocol_error("top level is not an object");
  const auto status = doc.value("status", std::string());
  if (status == "error") {
    throw Error(ErrorCode::kPluginReportedError,
                doc.value("error", std::string("plugin reported an error")));
  }
  if (status != "ok") protocol_error("status must be \"ok\" or \"error\"");

  const auto kind = doc.value("payload_kind", std::string());
  try {
    if (kind == "heatmap") {
      if (!doc.contains("heatmap_png_b64") || !doc["heatmap_png_b64"].is_string()) {
        protocol_error("heatmap payload without heatmap_png_b64");
      }
      const auto png = base64_decode(doc["heatmap_png_b64"].get<std::string>());
      return resize_heatmap(decode_heatmap(png), width, height);
    }
    if (kind == "boxes") {
      if (!doc.contains("boxes") || !doc["boxes"].is_array()) {
        protocol_error("boxes payload without a boxes array");
      }
      ObjectBoxes boxes;
      for (const auto& b : doc["boxes"]) {
        if (!b.is_object()) protocol_error("box entry is not an object");
        boxes.boxes.push_back({clipped_box(b, width, height),
                               b.value("label", std::string()),
                               confidence_field(b)});
      }
      return boxes;
    }
    if (kind == "text_regions") {
      if (!doc.contains("text_regions") || !doc["text_regions"].is_array()) {
        protocol_error("text_regions payload without a text_regions array");
      }
      TextFindings findings;
      for (const auto& t : doc["text_regions"]) {
        if (!t.is_object()) protocol_error("text region entry is not an object");
        TextRegion r;
        r.bbox = clipped_box(t, width, height);
        r.est_height = r.bbox.h;
        r.confidence = confidence_field(t);
        if (t.contains("text") && t["text"].is_string()) {
          r.text = t["text"].get<std::string>();
        }
        findings.regions.push_back(std::move(r));
      }
      return findings;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kProtocolError) throw;
    protocol_error(e.what());
  }
  protocol_error("unknown payload_kind '" + kind + "'");
}

SectionPayload invoke_plugin(const ExternalSpec& spec, const RasterImage& img,
                             int timeout_ms) {
  spec.validate();
  const auto png = encode_png(img);
  std::string document;
  if (spec.is_http()) {
    document = invoke_http(spec.url, png, timeout_ms);
  } else {
    const auto body = internal::exchange_frame(spec.command, encode_frame(png), timeout_ms);
    document.assign(body.begin(), body.end());
  }
  return decode_plugin_response(document, img.width(), img.height());
}

SectionResult run_external(const ExternalSpec& spec, const RasterImage& img,
                           int timeout_ms) {
  const auto start = Clock::now();
  SectionResult result;
  try {
    result.payload = invoke_plugin(spec, img, timeout_ms);
    result.status = SectionStatus::kOk;
  } catch (const Error& e) {
    result.status = e.code() == ErrorCode::kTimeout ? SectionStatus::kTimeout
                                                    : SectionStatus::kFailed;
    result.message = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    result.status = SectionStatus::kFailed;
    result.message = e.what();
  }
  result.elapsed_ms = elapsed_since(start);
  return result;
}

}  // namespace pat
