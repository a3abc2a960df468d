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
#ifndef PAT_SECTION_HPP_
#define PAT_SECTION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pat/color.hpp"
#include "pat/image.hpp"
#include "pat/text.hpp"

namespace pat {

// Report sections in canonical order. kCustom sections follow the seven
// canonical ones, one per enabled custom filter.
enum class Section {
  kSpecs,
  kText,
  kEntropy,
  kGaze,
  kLowLevelSalience,
  kObjects,
  kCvd,
  kCustom,
};

inline constexpr std::array<Section, 7> kCanonicalSections = {
    Section::kSpecs,   Section::kText,
    Section::kEntropy, Section::kGaze,
    Section::kLowLevelSalience, Section::kObjects,
    Section::kCvd,
};

std::string_view to_string(Section section);
std::optional<Section> parse_section(std::string_view name);

enum class SectionStatus { kOk, kFailed, kTimeout, kUnavailable };

std::string_view to_string(SectionStatus status);
std::optional<SectionStatus> parse_section_status(std::string_view name);

struct ObjectBox {
  BBox bbox;
  std::string label;
  double confidence = 0.0;

  friend bool operator==(const ObjectBox&, const ObjectBox&) = default;
};

struct ObjectBoxes {
  std::vector<ObjectBox> boxes;
  friend bool operator==(const ObjectBoxes&, const ObjectBoxes&) = default;
};

struct ImageVariant {
  std::string label;
  RasterImage image;
  friend bool operator==(const ImageVariant&, const ImageVariant&) = default;
};

struct ImageVariantSet {
  std::vector<ImageVariant> variants;
  friend bool operator==(const ImageVariantSet&, const ImageVariantSet&) = default;
};

struct TextFindings {
  std::vector<TextRegion> regions;
  std::vector<LegibilityWarning> warnings;
  friend bool operator==(const TextFindings&, const TextFindings&) = default;
};

struct SpecsTable {
  int width = 0;
  int height = 0;
  std::string format;
  std::uint64_t file_size = 0;
  int distinct_quantized_colors = 0;
  std::vector<DominantColor> dominant_colors;
  double mean_saturation = 0.0;
  double mean_value = 0.0;

  friend bool operator==(const SpecsTable&, const SpecsTable&) = default;
};

using SectionPayload = std::variant<std::monostate, Heatmap, ImageVariantSet,
                                    TextFindings, ColorStats, ObjectBoxes,
                                    SpecsTable>;

std::string_view payload_kind(const SectionPayload& payload);

struct SectionResult {
  std::string filter_id;
  Section section = Section::kCustom;
  SectionStatus status = SectionStatus::kUnavailable;
  std::int64_t elapsed_ms = 0;
  SectionPayload payload;
  std::string message;  // diagnostic for non-ok results

  // Section key used in reports: the canonical name, or the filter id for
  // custom sections.
  std::string key() const;

  static SectionResult unavailable(Section section, std::string filter_id = {},
                                   std::string message = {});
  static SectionResult failure(Section section, std::string filter_id,
                               SectionStatus status, std::int64_t elapsed_ms,
                               std::string message);

  // payload == none iff status != ok; elapsed_ms >= 0.
  bool well_formed() const;

  friend bool operator==(const SectionResult&, const SectionResult&) = default;
};

}  // namespace pat

#endif  // PAT_SECTION_HPP_
