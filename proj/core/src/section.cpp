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
#include "pat/section.hpp"

namespace pat {

std::string_view to_string(Section section) {
  switch (section) {
    case Section::kSpecs: return "specs";
    case Section::kText: return "text";
    case Section::kEntropy: return "entropy";
    case Section::kGaze: return "gaze";
    case Section::kLowLevelSalience: return "low_level_salience";
    case Section::kObjects: return "objects";
    case Section::kCvd: return "cvd";
    case Section::kCustom: return "custom";
  }
  return "custom";
}

std::optional<Section> parse_section(std::string_view name) {
  for (Section s : kCanonicalSections) {
    if (to_string(s) == name) return s;
  }
  if (name == "custom") return Section::kCustom;
  return std::nullopt;
}

std::string_view to_string(SectionStatus status) {
  switch (status) {
    case SectionStatus::kOk: return "ok";
    case SectionStatus::kFailed: return "failed";
    case SectionStatus::kTimeout: return "timeout";
    case SectionStatus::kUnavailable: return "unavailable";
  }
  return "unavailable";
}

std::optional<SectionStatus> parse_section_status(std::string_view name) {
  for (auto s : {SectionStatus::kOk, SectionStatus::kFailed,
                 SectionStatus::kTimeout, SectionStatus::kUnavailable}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view payload_kind(const SectionPayload& payload) {
  struct Visitor {
    std::string_view operator()(const std::monostate&) const { return "none"; }
    std::string_view operator()(const Heatmap&) const { return "heatmap"; }
    std::string_view operator()(const ImageVariantSet&) const { return "variants"; }
    std::string_view operator()(const TextFindings&) const { return "text_regions"; }
    std::string_view operator()(const ColorStats&) const { return "color_stats"; }
    std::string_view operator()(const ObjectBoxes&) const { return "boxes"; }
    std::string_view operator()(const SpecsTable&) const { return "specs"; }
  };
  return std::visit(Visitor{}, payload);
}

std::string SectionResult::key() const {
  return section == Section::kCustom ? filter_id
                                     : std::string(to_string(section));
}

SectionResult SectionResult::unavailable(Section section, std::string filter_id,
                                         std::string message) {
  SectionResult r;
  r.filter_id = std::move(filter_id);
  r.section = section;
  r.status = SectionStatus::kUnavailable;
  r.message = std::move(message);
  return r;
}

SectionResult SectionResult::failure(Section section, std::string filter_id,
                                     SectionStatus status,
                                     std::int64_t elapsed_ms,
                                     std::string message) {
  SectionResult r;
  r.filter_id = std::move(filter_id);
  r.section = section;
  r.status = status;
  r.elapsed_ms = elapsed_ms;
  r.message = std::move(message);
  return r;
}

bool SectionResult::well_formed() const {
  const bool none = std::holds_alternative<std::monostate>(payload);
  return elapsed_ms >= 0 && (none == (status != SectionStatus::kOk));
}

}  // namespace pat
