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
#ifndef PAT_TEXT_HPP_
#define PAT_TEXT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pat/image.hpp"

namespace pat {

struct BBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  long long area() const { return static_cast<long long>(w) * h; }
  bool inside(int width, int height) const {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= width &&
           y + h <= height;
  }
  friend bool operator==(const BBox&, const BBox&) = default;
};

double intersection_area(const BBox& a, const BBox& b);
double iou(const BBox& a, const BBox& b);

struct TextRegion {
  BBox bbox;
  double est_height = 0.0;
  double confidence = 0.0;
  std::optional<std::string> text;  // set only by external OCR engines

  friend bool operator==(const TextRegion&, const TextRegion&) = default;
};

enum class LegibilityReason { kTooSmall, kLowContrast };

std::string_view to_string(LegibilityReason reason);

struct LegibilityWarning {
  TextRegion region;
  LegibilityReason reason = LegibilityReason::kTooSmall;
  double threshold = 0.0;

  friend bool operator==(const LegibilityWarning&,
                         const LegibilityWarning&) = default;
};

struct TextDetectorConfig {
  int window = 15;          // adaptive-threshold window (odd)
  int offset = 10;          // gray levels below/above the local mean
  int min_area = 8;
  int max_area = 5000;
  double min_aspect = 0.05; // w / h
  double max_aspect = 15.0;
  double min_fill = 0.10;   // area / bbox area
  double max_fill = 0.95;
  double merge_gap = 1.0;   // horizontal gap <= merge_gap * component height
  double min_line_overlap = 0.5;  // vertical overlap / smaller height
  double min_ring_contrast = 4.5; // ink vs 1 px surround, in surround stddevs
  double min_height = 10.0; // legibility threshold, px

  void validate() const;
};

// Heuristic text-line detector: adaptive mean threshold in both polarities,
// 8-connected components, geometric gates, horizontal line merging.
// Deterministic; every box lies inside the image.
std::vector<TextRegion> detect_text_regions(const GrayImage& gray,
                                            const TextDetectorConfig& cfg = {});

// One kTooSmall warning per region whose est_height < min_height, in input
// order.
std::vector<LegibilityWarning> legibility_flags(
    const std::vector<TextRegion>& regions, double min_height = 10.0);

// External regions first; built-in regions overlapping any external box with
// IoU > 0.5 are dropped; the rest are appended.
std::vector<TextRegion> merge_ocr_results(const std::vector<TextRegion>& builtin,
                                          const std::vector<TextRegion>& external);

}  // namespace pat

#endif  // PAT_TEXT_HPP_
