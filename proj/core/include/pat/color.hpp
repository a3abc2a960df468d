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
#ifndef PAT_COLOR_HPP_
#define PAT_COLOR_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pat/image.hpp"

namespace pat {

struct DominantColor {
  Rgb color;
  double fraction = 0.0;

  friend bool operator==(const DominantColor&, const DominantColor&) = default;
};

struct ColorStats {
  std::vector<DominantColor> dominant_colors;  // <= 5, fractions descending
  double mean_saturation = 0.0;
  double mean_value = 0.0;
  int distinct_quantized_colors = 0;  // 4 bits per channel

  friend bool operator==(const ColorStats&, const ColorStats&) = default;
};

// Median-cut into at most `max_colors` boxes; HSV means over all pixels.
ColorStats color_statistics(const RasterImage& img, int max_colors = 5);

enum class AdjustmentKind { kBlur, kGamma, kGrayscale, kContrast, kSaturate };

std::string_view to_string(AdjustmentKind kind);
std::optional<AdjustmentKind> parse_adjustment_kind(std::string_view name);

struct Adjustment {
  AdjustmentKind kind;
  double amount;

  // Throws kInvalidAmount when amount falls outside the kind's range.
  void validate() const;
  // Amount at which the adjustment leaves every pixel unchanged.
  static double identity_amount(AdjustmentKind kind);
  std::string label() const;
};

// CSS filter-effects semantics in [0,1] channel space, rounded and clamped.
RasterImage apply_adjustment(const RasterImage& img, const Adjustment& adj);

// The palette of previews shown as colour suggestions.
std::vector<Adjustment> default_color_suggestions();

enum class CvdType { kDeuteranopia, kProtanopia, kTritanopia };

inline constexpr CvdType kAllCvdTypes[] = {
    CvdType::kDeuteranopia, CvdType::kProtanopia, CvdType::kTritanopia};

std::string_view to_string(CvdType type);
std::optional<CvdType> parse_cvd_type(std::string_view name);

// Dichromat simulation: sRGB -> linear RGB -> LMS -> projection -> sRGB.
// Protanopia/deuteranopia use a single projection plane; tritanopia uses
// two half-planes.
RasterImage simulate_cvd(const RasterImage& img, CvdType type);

// Linear-RGB Euclidean distance / sqrt(3) per pixel.
Heatmap cvd_difference(const RasterImage& original,
                       const RasterImage& simulated);

// Standard sRGB transfer functions on [0,1].
double srgb_to_linear(double v);
double linear_to_srgb(double v);

}  // namespace pat

#endif  // PAT_COLOR_HPP_
