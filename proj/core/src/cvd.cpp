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
#include <array>
#include <cmath>

#include "pat/color.hpp"
#include "pat/error.hpp"

namespace pat {
namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Linear RGB -> LMS cone space (Smith-Pokorny fundamentals as tabulated by
// Viénot, Brettel & Mollon 1999). See docs/cvd-matrices.md.
constexpr Mat3 kLmsFromLinearRgb = {{
    {17.8824, 43.5161, 4.11935},
    {3.45565, 27.1554, 3.86714},
    {0.0299566, 0.184309, 1.46709},
}};

// Single-plane dichromat projections in LMS. Each plane contains the
// achromatic axis and the blue primary.
constexpr double kProtanFromM = 2.02344, kProtanFromS = -2.52581;
constexpr double kDeutanFromL = 0.494207, kDeutanFromS = 1.24827;

// CIE 1931 2-degree colour matching functions at the tritan anchors.
constexpr Vec3 kXyz485nm = {0.05795, 0.16930, 0.61620};
constexpr Vec3 kXyz660nm = {0.16490, 0.06100, 0.00001};

constexpr Mat3 kLinearRgbFromXyz = {{
    {3.2406, -1.5372, -0.4986},
    {-0.9689, 1.8758, 0.0415},
    {0.0557, -0.2040, 1.0570},
}};

Vec3 mul(const Mat3& m, const Vec3& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
          m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
          m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Mat3 inverse(const Mat3& m) {
  const Vec3 c0 = cross(m[1], m[2]);
  const Vec3 c1 = cross(m[2], m[0]);
  const Vec3 c2 = cross(m[0], m[1]);
  const double det = dot(m[0], c0);
  Mat3 inv{};
  for (int i = 0; i < 3; ++i) {
    inv[i][0] = c0[i] / det;
    inv[i][1] = c1[i] / det;
    inv[i][2] = c2[i] / det;
  }
  return inv;
}

struct TritanPlanes {
  Vec3 plane_485;   // normal of the half-plane through white and 485 nm
  Vec3 plane_660;   // normal of the half-plane through white and 660 nm
  Vec3 separation;  // normal of the plane through white and the S axis
  double side_485;  // sign of the 485 nm anchor w.r.t. `separation`
};

struct CvdModel {
  Mat3 rgb_to_lms = kLmsFromLinearRgb;
  Mat3 lms_to_rgb = inverse(kLmsFromLinearRgb);
  TritanPlanes tritan{};
  std::array<double, 256> decode{};      // byte -> linear
  std::array<double, 255> thresholds{};  // linear cut points between bytes

  CvdModel() {
    const Vec3 white = mul(rgb_to_lms, {1.0, 1.0, 1.0});
    const Vec3 a485 = mul(rgb_to_lms, mul(kLinearRgbFromXyz, kXyz485nm));
    const Vec3 a660 = mul(rgb_to_lms, mul(kLinearRgbFromXyz, kXyz660nm));
    tritan.plane_485 = cross(white, a485);
    tritan.plane_660 = cross(white, a660);
    tritan.separation = cross(white, Vec3{0.0, 0.0, 1.0});
    tritan.side_485 = dot(tritan.separation, a485) >= 0 ? 1.0 : -1.0;
    for (int i = 0; i < 256; ++i) decode[i] = srgb_to_linear(i / 255.0);
    for (int i = 0; i < 255; ++i) {
      thresholds[i] = srgb_to_linear((i + 0.5) / 255.0);
    }
  }

  // Same as round(linear_to_srgb(v) * 255) for a monotone transfer curve.
  std::uint8_t encode(double linear) const {
    return static_cast<std::uint8_t>(
        std::upper_bound(thresholds.begin(), thresholds.end(), linear) -
        thresholds.begin());
  }

  Vec3 project(Vec3 lms, CvdType type) const {
    switch (type) {
      case CvdType::kProtanopia:
        lms[0] = kProtanFromM * lms[1] + kProtanFromS * lms[2];
        break;
      case CvdType::kDeuteranopia:
        lms[1] = kDeutanFromL * lms[0] + kDeutanFromS * lms[2];
        break;
      case CvdType::kTritanopia: {
        const bool near_485 =
            dot(tritan.separation, lms) * tritan.side_485 >= 0.0;
        const Vec3& n = near_485 ? tritan.plane_485 : tritan.plane_660;
        lms[2] = -(n[0] * lms[0] + n[1] * lms[1]) / n[2];
        break;
      }
    }
    return lms;
  }
};

// Pulls an out-of-gamut colour toward the gray of equal luminance until every
// channel fits in [0, 1]. Gray lies on every projection plane, so the result
// stays on the plane and a second projection leaves it in place.
Vec3 fit_gamut(const Vec3& rgb) {
  const double y = std::clamp(
      0.2126 * rgb[0] + 0.7152 * rgb[1] + 0.0722 * rgb[2], 0.0, 1.0);
  double t = 1.0;
  for (double c : rgb) {
    if (c > 1.0) t = std::min(t, (1.0 - y) / (c - y));
    if (c < 0.0) t = std::min(t, y / (y - c));
  }
  return {y + t * (rgb[0] - y), y + t * (rgb[1] - y), y + t * (rgb[2] - y)};
}

const CvdModel& model() {
  static const CvdModel m;
  return m;
}

}  // namespace

double srgb_to_linear(double v) {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) {
  return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

std::string_view to_string(CvdType type) {
  switch (type) {
    case CvdType::kDeuteranopia: return "deuteranopia";
    case CvdType::kProtanopia: return "protanopia";
    case CvdType::kTritanopia: return "tritanopia";
  }
  return "unknown";
}

std::optional<CvdType> parse_cvd_type(std::string_view name) {
  for (CvdType t : kAllCvdTypes) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

RasterImage simulate_cvd(const RasterImage& img, CvdType type) {
  const CvdModel& m = model();
  RasterImage out = img;
  auto px = out.mutable_pixels();
  for (std::size_t i = 0; i < px.size(); i += 3) {
    const Vec3 rgb = {m.decode[px[i]], m.decode[px[i + 1]], m.decode[px[i + 2]]};
    const Vec3 sim =
        fit_gamut(mul(m.lms_to_rgb, m.project(mul(m.rgb_to_lms, rgb), type)));
    for (int c = 0; c < 3; ++c) {
      px[i + c] = m.encode(std::clamp(sim[c], 0.0, 1.0));
    }
  }
  return out;
}

Heatmap cvd_difference(const RasterImage& original,
                       const RasterImage& simulated) {
  if (original.width() != simulated.width() ||
      original.height() != simulated.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cvd_difference requires equal dimensions");
  }
  const CvdModel& m = model();
  const auto a = original.pixels();
  const auto b = simulated.pixels();
  std::vector<double> out(original.pixel_count());
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sq = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = m.decode[a[i * 3 + c]] - m.decode[b[i * 3 + c]];
      sq += d * d;
    }
    out[i] = std::clamp(std::sqrt(sq) * inv_sqrt3, 0.0, 1.0);
  }
  return Heatmap(original.width(), original.height(), std::move(out));
}

}  // namespace pat
