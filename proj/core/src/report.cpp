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
#include "pat/report.hpp"

#include <algorithm>
#include <set>

#include "pat/error.hpp"
#include "pat/hash.hpp"
#include "pat/metrics.hpp"

namespace pat {
namespace {

SectionPayload canonical_payload(SectionPayload payload) {
  if (auto* hm = std::get_if<Heatmap>(&payload)) {
    return quantize_heatmap(*hm);
  }
  if (auto* set = std::get_if<ImageVariantSet>(&payload)) {
    // Variants are derived images; the source container metadata does not
    // carry over to them.
    for (auto& v : set->variants) {
      std::vector<std::uint8_t> px(v.image.pixels().begin(), v.image.pixels().end());
      v.image = RasterImage(v.image.width(), v.image.height(), std::move(px));
    }
  }
  return payload;
}

void heatmap_deltas(const std::string& key, const Heatmap& a, const Heatmap& b,
                    std::map<std::string, double>& out) {
  if (key == "entropy") out["mean_entropy_delta"] = b.mean() - a.mean();
  if (a.width() != b.width() || a.height() != b.height()) return;
  try {
    out["kl"] = kl_divergence(a, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAllZeroMap) throw;
  }
}

}  // namespace

const SectionResult* Report::find_section(std::string_view key) const {
  for (const auto& s : sections) {
    if (s.key() == key) return &s;
  }
  return nullptr;
}

Report build_report(const RasterImage& img, const SpecsTable& specs,
                    std::vector<SectionResult> section_results,
                    std::string user_id, Timestamp now,
                    std::vector<std::string> warnings) {
  Report r;
  r.user_id = std::move(user_id);
  r.created_at = now;
  r.image_ref = content_hash(encode_png(img));
  r.image_specs = specs;
  r.warnings = std::move(warnings);

  for (Section section : kCanonicalSections) {
    auto it = std::find_if(section_results.begin(), section_results.end(),
                           [section](const SectionResult& s) { return s.section == section; });
    if (it == section_results.end()) {
      r.sections.push_back(SectionResult::unavailable(section, {}, "no enabled filter"));
    } else {
      r.sections.push_back(std::move(*it));
    }
  }
  for (auto& s : section_results) {
    if (s.section == Section::kCustom) r.sections.push_back(std::move(s));
  }
  for (auto& s : r.sections) {
    s.payload = canonical_payload(std::move(s.payload));
    if (s.elapsed_ms < 0) s.elapsed_ms = 0;
    if (s.status != SectionStatus::kOk) s.payload = std::monostate{};
  }
  return r;
}

ComparisonDiff compare_reports(const Report& a, const Report& b) {
  ComparisonDiff diff;
  diff.report_a = a.report_id;
  diff.report_b = b.report_id;

  std::vector<std::string> keys;
  for (const auto& s : a.sections) keys.push_back(s.key());
  for (const auto& s : b.sections) {
    if (std::find(keys.begin(), keys.end(), s.key()) == keys.end()) {
      keys.push_back(s.key());
    }
  }

  for (const auto& key : keys) {
    const SectionResult* sa = a.find_section(key);
    const SectionResult* sb = b.find_section(key);
    SectionDelta d;
    d.section = key;
    d.status_a = sa ? sa->status : SectionStatus::kUnavailable;
    d.status_b = sb ? sb->status : SectionStatus::kUnavailable;
    if (d.status_a == SectionStatus::kOk && d.status_b == SectionStatus::kOk) {
      const auto& pa = sa->payload;
      const auto& pb = sb->payload;
      if (pa.index() == pb.index()) {
        if (auto* ha = std::get_if<Heatmap>(&pa)) {
          heatmap_deltas(key, *ha, std::get<Heatmap>(pb), d.scalar_deltas);
        } else if (auto* ta = std::get_if<TextFindings>(&pa)) {
          const auto& tb = std::get<TextFindings>(pb);
          d.scalar_deltas["text_region_count_delta"] =
              double(tb.regions.size()) - double(ta->regions.size());
          d.scalar_deltas["legibility_warning_count_delta"] =
              double(tb.warnings.size()) - double(ta->warnings.size());
        } else if (auto* spa = std::get_if<SpecsTable>(&pa)) {
          const auto& spb = std::get<SpecsTable>(pb);
          std::set<Rgb> ca, cb;
          for (const auto& c : spa->dominant_colors) ca.insert(c.color);
          for (const auto& c : spb.dominant_colors) cb.insert(c.color);
          std::vector<Rgb> sym;
          std::set_symmetric_difference(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                        std::back_inserter(sym));
          d.scalar_deltas["dominant_color_symdiff"] = double(sym.size());
        } else if (auto* oa = std::get_if<ObjectBoxes>(&pa)) {
          d.scalar_deltas["object_count_delta"] =
              double(std::get<ObjectBoxes>(pb).boxes.size()) - double(oa->boxes.size());
        }
      }
    }
    diff.per_section.push_back(std::move(d));
  }
  return diff;
}

std::string MemoryArtifacts::put_artifact(std::span<const std::uint8_t> png) {
  std::string ref = content_hash(png);
  blobs_.try_emplace(ref, png.begin(), png.end());
  return ref;
}

std::vector<std::uint8_t> MemoryArtifacts::get_artifact(const std::string& ref) const {
  auto it = blobs_.find(ref);
  if (it == blobs_.end()) throw Error(ErrorCode::kNotFound, "no artifact " + ref);
  return it->second;
}

}  // namespace pat
