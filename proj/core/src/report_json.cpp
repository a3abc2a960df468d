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
#include <algorithm>
#include <cstdio>

#include "pat/error.hpp"
#include "pat/report.hpp"

namespace pat {
namespace {

using json = nlohmann::json;

std::string hex_color(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

json bbox_json(const BBox& b) {
  return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}};
}

BBox bbox_from(const json& j) {
  return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
          j.at("h").get<int>()};
}

json region_json(const TextRegion& r) {
  json j = bbox_json(r.bbox);
  j["est_height"] = r.est_height;
  j["confidence"] = r.confidence;
  if (r.text) j["text"] = *r.text;
  return j;
}

TextRegion region_from(const json& j) {
  TextRegion r;
  r.bbox = bbox_from(j);
  r.est_height = j.at("est_height").get<double>();
  r.confidence = j.at("confidence").get<double>();
  if (j.contains("text")) r.text = j.at("text").get<std::string>();
  return r;
}

json dominant_json(const std::vector<DominantColor>& colors) {
  json arr = json::array();
  for (const auto& c : colors) {
    arr.push_back({{"rgb", {c.color.r, c.color.g, c.color.b}},
                   {"hex", hex_color(c.color)},
                   {"fraction", c.fraction}});
  }
  return arr;
}

std::vector<DominantColor> dominant_from(const json& arr) {
  std::vector<DominantColor> out;
  for (const auto& c : arr) {
    const auto& rgb = c.at("rgb");
    out.push_back({Rgb{rgb.at(0).get<std::uint8_t>(), rgb.at(1).get<std::uint8_t>(),
                       rgb.at(2).get<std::uint8_t>()},
                   c.at("fraction").get<double>()});
  }
  return out;
}

SpecsTable specs_from(const json& j) {
  SpecsTable t;
  t.width = j.at("width").get<int>();
  t.height = j.at("height").get<int>();
  t.format = j.at("format").get<std::string>();
  t.file_size = j.at("file_size").get<std::uint64_t>();
  t.distinct_quantized_colors = j.at("distinct_quantized_colors").get<int>();
  t.dominant_colors = dominant_from(j.at("dominant_colors"));
  t.mean_saturation = j.at("mean_saturation").get<double>();
  t.mean_value = j.at("mean_value").get<double>();
  return t;
}

json payload_json(const SectionPayload& payload, ArtifactSink& sink) {
  struct Visitor {
    ArtifactSink& sink;
    json operator()(const std::monostate&) const { return nullptr; }
    json operator()(const Heatmap& hm) const {
      return {{"kind", "heatmap"},
              {"width", hm.width()},
              {"height", hm.height()},
              {"mean", hm.mean()},
              {"png", sink.put_artifact(encode_png(hm))}};
    }
    json operator()(const ImageVariantSet& set) const {
      json arr = json::array();
      for (const auto& v : set.variants) {
        arr.push_back({{"label", v.label},
                       {"width", v.image.width()},
                       {"height", v.image.height()},
                       {"png", sink.put_artifact(encode_png(v.image))}});
      }
      return {{"kind", "variants"}, {"variants", arr}};
    }
    json operator()(const TextFindings& f) const {
      json regions = json::array(), warnings = json::array();
      for (const auto& r : f.regions) regions.push_back(region_json(r));
      for (const auto& w : f.warnings) {
        warnings.push_back({{"region", region_json(w.region)},
                            {"reason", to_string(w.reason)},
                            {"threshold", w.threshold}});
      }
      return {{"kind", "text_regions"}, {"regions", regions}, {"warnings", warnings}};
    }
    json operator()(const ColorStats& s) const {
      return {{"kind", "color_stats"},
              {"dominant_colors", dominant_json(s.dominant_colors)},
              {"mean_saturation", s.mean_saturation},
              {"mean_value", s.mean_value},
              {"distinct_quantized_colors", s.distinct_quantized_colors}};
    }
    json operator()(const ObjectBoxes& b) const {
      json arr = json::array();
      for (const auto& o : b.boxes) {
        json j = bbox_json(o.bbox);
        j["label"] = o.label;
        j["confidence"] = o.confidence;
        arr.push_back(std::move(j));
      }
      return {{"kind", "boxes"}, {"boxes", arr}};
    }
    json operator()(const SpecsTable& t) const {
      json j = specs_to_json(t);
      j["kind"] = "specs";
      return j;
    }
  };
  return std::visit(Visitor{sink}, payload);
}

SectionPayload payload_from(const json& j, const ArtifactSource& source) {
  if (j.is_null()) return std::monostate{};
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "heatmap") {
    Heatmap hm = decode_heatmap(source.get_artifact(j.at("png").get<std::string>()));
    if (hm.width() != j.at("width").get<int>() || hm.height() != j.at("height").get<int>()) {
      throw Error(ErrorCode::kInvalidArgument, "heatmap artifact size mismatch");
    }
    return hm;
  }
  if (kind == "variants") {
    ImageVariantSet set;
    for (const auto& v : j.at("variants")) {
      RasterImage decoded = load_image(source.get_artifact(v.at("png").get<std::string>()));
      std::vector<std::uint8_t> px(decoded.pixels().begin(), decoded.pixels().end());
      set.variants.push_back({v.at("label").get<std::string>(),
                              RasterImage(decoded.width(), decoded.height(), std::move(px))});
    }
    return set;
  }
  if (kind == "text_regions") {
    TextFindings f;
    for (const auto& r : j.at("regions")) f.regions.push_back(region_from(r));
    for (const auto& w : j.at("warnings")) {
      f.warnings.push_back({region_from(w.at("region")),
                            w.at("reason").get<std::string>() == "too_small"
                                ? LegibilityReason::kTooSmall
                                : LegibilityReason::kLowContrast,
                            w.at("threshold").get<double>()});
    }
    return f;
  }
  if (kind == "color_stats") {
    ColorStats s;
    s.dominant_colors = dominant_from(j.at("dominant_colors"));
    s.mean_saturation = j.at("mean_saturation").get<double>();
    s.mean_value = j.at("mean_value").get<double>();
    s.distinct_quantized_colors = j.at("distinct_quantized_colors").get<int>();
    return s;
  }
  if (kind == "boxes") {
    ObjectBoxes b;
    for (const auto& o : j.at("boxes")) {
      b.boxes.push_back({bbox_from(o), o.at("label").get<std::string>(),
                         o.at("confidence").get<double>()});
    }
    return b;
  }
  if (kind == "specs") return specs_from(j);
  throw Error(ErrorCode::kInvalidArgument, "unknown payload kind " + kind);
}

// Minimal typed-field checker used by validate_report_json.
class Checker {
 public:
  explicit Checker(std::vector<std::string>& problems) : problems_(problems) {}

  bool require(const json& obj, const std::string& path, const char* key,
               json::value_t type) {
    if (!obj.is_object() || !obj.contains(key)) {
      problems_.push_back(path + "." + key + " is missing");
      return false;
    }
    const auto actual = obj.at(key).type();
    const bool number_ok =
        type == json::value_t::number_float &&
        (actual == json::value_t::number_integer || actual == json::value_t::number_unsigned);
    const bool int_ok = type == json::value_t::number_integer &&
                        actual == json::value_t::number_unsigned;
    if (actual != type && !number_ok && !int_ok) {
      problems_.push_back(path + "." + key + " has the wrong type");
      return false;
    }
    return true;
  }

  void fail(const std::string& message) { problems_.push_back(message); }

 private:
  std::vector<std::string>& problems_;
};

constexpr auto kString = json::value_t::string;
constexpr auto kNumber = json::value_t::number_float;
constexpr auto kInteger = json::value_t::number_integer;
constexpr auto kArray = json::value_t::array;
constexpr auto kObject = json::value_t::object;

void check_specs(Checker& c, const json& j, const std::string& path) {
  c.require(j, path, "width", kInteger);
  c.require(j, path, "height", kInteger);
  c.require(j, path, "format", kString);
  c.require(j, path, "file_size", kInteger);
  c.require(j, path, "distinct_quantized_colors", kInteger);
  c.require(j, path, "mean_saturation", kNumber);
  c.require(j, path, "mean_value", kNumber);
  if (c.require(j, path, "dominant_colors", kArray)) {
    if (j.at("dominant_colors").size() > 5) c.fail(path + ".dominant_colors has more than 5 entries");
  }
}

void check_timestamp(Checker& c, const json& obj, const std::string& path, const char* key) {
  if (!c.require(obj, path, key, kString)) return;
  try {
    parse_timestamp(obj.at(key).get<std::string>());
  } catch (const Error&) {
    c.fail(path + "." + key + " is not an ISO-8601 UTC timestamp");
  }
}

}  // namespace

json specs_to_json(const SpecsTable& t) {
  return {{"width", t.width},
          {"height", t.height},
          {"format", t.format},
          {"file_size", t.file_size},
          {"distinct_quantized_colors", t.distinct_quantized_colors},
          {"dominant_colors", dominant_json(t.dominant_colors)},
          {"mean_saturation", t.mean_saturation},
          {"mean_value", t.mean_value}};
}

json report_to_json(const Report& r, ArtifactSink& sink) {
  json sections = json::array();
  for (const auto& s : r.sections) {
    sections.push_back({{"key", s.key()},
                        {"section", to_string(s.section)},
                        {"filter_id", s.filter_id},
                        {"status", to_string(s.status)},
                        {"elapsed_ms", s.elapsed_ms},
                        {"message", s.message},
                        {"payload", payload_json(s.payload, sink)}});
  }
  json notes = json::array();
  for (const auto& n : r.notes) {
    notes.push_back({{"note_id", n.note_id},
                     {"section", n.section},
                     {"text", n.text},
                     {"created_at", format_timestamp(n.created_at)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"report_id", r.report_id},
          {"user_id", r.user_id},
          {"created_at", format_timestamp(r.created_at)},
          {"image_ref", r.image_ref},
          {"image_specs", specs_to_json(r.image_specs)},
          {"warnings", r.warnings},
          {"sections", sections},
          {"notes", notes}};
}

std::string serialize_report(const Report& report, ArtifactSink& sink) {
  return report_to_json(report, sink).dump(2) + "\n";
}

std::vector<std::string> validate_report_json(const json& doc) {
  std::vector<std::string> problems;
  Checker c(problems);
  if (!doc.is_object()) return {"document is not an object"};
  if (c.require(doc, "$", "schema_version", kInteger) &&
      doc.at("schema_version").get<int>() != kReportSchemaVersion) {
    c.fail("$.schema_version is not " + std::to_string(kReportSchemaVersion));
  }
  c.require(doc, "$", "report_id", kString);
  c.require(doc, "$", "user_id", kString);
  check_timestamp(c, doc, "$", "created_at");
  if (c.require(doc, "$", "image_ref", kString) &&
      doc.at("image_ref").get<std::string>().size() != 64) {
    c.fail("$.image_ref is not a SHA-256 hex digest");
  }
  if (c.require(doc, "$", "image_specs", kObject)) {
    check_specs(c, doc.at("image_specs"), "$.image_specs");
  }
  if (c.require(doc, "$", "warnings", kArray)) {
    for (const auto& w : doc.at("warnings")) {
      if (!w.is_string()) c.fail("$.warnings contains a non-string");
    }
  }

  std::vector<std::string> keys;
  if (c.require(doc, "$", "sections", kArray)) {
    const auto& sections = doc.at("sections");
    std::size_t canonical_seen = 0;
    for (std::size_t i = 0; i < sections.size(); ++i) {
      const auto& s = sections[i];
      const std::string path = "$.sections[" + std::to_string(i) + "]";
      if (!c.require(s, path, "key", kString) || !c.require(s, path, "section", kString) ||
          !c.require(s, path, "status", kString)) {
        continue;
      }
      c.require(s, path, "filter_id", kString);
      c.require(s, path, "message", kString);
      if (c.require(s, path, "elapsed_ms", kInteger) && s.at("elapsed_ms").get<long long>() < 0) {
        c.fail(path + ".elapsed_ms is negative");
      }
      keys.push_back(s.at("key").get<std::string>());
      const auto section = parse_section(s.at("section").get<std::string>());
      const auto status = parse_section_status(s.at("status").get<std::string>());
      if (!section) c.fail(path + ".section is not a known section");
      if (!status) c.fail(path + ".status is not a known status");
      if (section && *section != Section::kCustom) {
        if (canonical_seen >= kCanonicalSections.size() ||
            kCanonicalSections[canonical_seen] != *section) {
          c.fail(path + " breaks canonical section order");
        }
        ++canonical_seen;
      }
      if (!s.contains("payload")) {
        c.fail(path + ".payload is missing");
      } else if (status) {
        const bool ok = *status == SectionStatus::kOk;
        const auto& p = s.at("payload");
        if (ok != !p.is_null()) c.fail(path + ".payload must be present iff status is ok");
        if (!p.is_null() && c.require(p, path + ".payload", "kind", kString)) {
          const auto kind = p.at("kind").get<std::string>();
          const std::string pp = path + ".payload";
          if (kind == "heatmap") {
            c.require(p, pp, "png", kString);
            c.require(p, pp, "width", kInteger);
            c.require(p, pp, "height", kInteger);
          } else if (kind == "variants") {
            c.require(p, pp, "variants", kArray);
          } else if (kind == "text_regions") {
            c.require(p, pp, "regions", kArray);
            c.require(p, pp, "warnings", kArray);
          } else if (kind == "boxes") {
            c.require(p, pp, "boxes", kArray);
          } else if (kind == "specs") {
            check_specs(c, p, pp);
          } else if (kind != "color_stats") {
            c.fail(pp + ".kind is unknown");
          }
        }
      }
    }
    if (canonical_seen != kCanonicalSections.size()) {
      c.fail("$.sections does not contain every canonical section");
    }
  }
  if (c.require(doc, "$", "notes", kArray)) {
    const auto& notes = doc.at("notes");
    for (std::size_t i = 0; i < notes.size(); ++i) {
      const std::string path = "$.notes[" + std::to_string(i) + "]";
      c.require(notes[i], path, "note_id", kString);
      c.require(notes[i], path, "text", kString);
      check_timestamp(c, notes[i], path, "created_at");
      if (c.require(notes[i], path, "section", kString) &&
          std::find(keys.begin(), keys.end(), notes[i].at("section").get<std::string>()) ==
              keys.end()) {
        c.fail(path + ".section does not name a report section");
      }
    }
  }
  return problems;
}

Report report_from_json(const json& doc, const ArtifactSource& source) {
  const auto problems = validate_report_json(doc);
  if (!problems.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid report document: " + problems.front());
  }
  Report r;
  r.report_id = doc.at("report_id").get<std::string>();
  r.user_id = doc.at("user_id").get<std::string>();
  r.created_at = parse_timestamp(doc.at("created_at").get<std::string>());
  r.image_ref = doc.at("image_ref").get<std::string>();
  r.image_specs = specs_from(doc.at("image_specs"));
  r.warnings = doc.at("warnings").get<std::vector<std::string>>();
  for (const auto& s : doc.at("sections")) {
    SectionResult res;
    res.section = *parse_section(s.at("section").get<std::string>());
    res.filter_id = s.at("filter_id").get<std::string>();
    res.status = *parse_section_status(s.at("status").get<std::string>());
    res.elapsed_ms = s.at("elapsed_ms").get<std::int64_t>();
    res.message = s.at("message").get<std::string>();
    res.payload = payload_from(s.at("payload"), source);
    r.sections.push_back(std::move(res));
  }
  for (const auto& n : doc.at("notes")) {
    r.notes.push_back({n.at("note_id").get<std::string>(), n.at("section").get<std::string>(),
                       n.at("text").get<std::string>(),
                       parse_timestamp(n.at("created_at").get<std::string>())});
  }
  return r;
}

json diff_to_json(const ComparisonDiff& diff) {
  json rows = json::array();
  for (const auto& d : diff.per_section) {
    rows.push_back({{"section", d.section},
                    {"status_a", to_string(d.status_a)},
                    {"status_b", to_string(d.status_b)},
                    {"scalar_deltas", d.scalar_deltas}});
  }
  return {{"report_a", diff.report_a}, {"report_b", diff.report_b}, {"per_section", rows}};
}

}  // namespace pat
