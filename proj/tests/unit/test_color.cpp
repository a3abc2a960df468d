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
#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "pat/color.hpp"
#include "pat/error.hpp"

namespace pat {
namespace {

int max_channel_diff(const RasterImage& a, const RasterImage& b) {
  int worst = 0;
  for (std::size_t i = 0; i < a.pixels().size(); ++i) {
    worst = std::max(worst, std::abs(int(a.pixels()[i]) - int(b.pixels()[i])));
  }
  return worst;
}

TEST(ColorStatsTest, SolidRed) {
  const ColorStats s = color_statistics(RasterImage::filled(10, 10, {255, 0, 0}));
  ASSERT_EQ(s.dominant_colors.size(), 1u);
  EXPECT_EQ(s.dominant_colors[0].color, (Rgb{255, 0, 0}));
  EXPECT_DOUBLE_EQ(s.dominant_colors[0].fraction, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_saturation, 1.0);
  EXPECT_DOUBLE_EQ(s.mean_value, 1.0);
  EXPECT_EQ(s.distinct_quantized_colors, 1);
}

TEST(ColorStatsTest, Checkerboard) {
  RasterImage img = RasterImage::filled(8, 8, {0, 0, 0});
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      if ((x + y) % 2 == 0) img.set(x, y, {255, 255, 255});
    }
  }
  const ColorStats s = color_statistics(img);
  ASSERT_EQ(s.dominant_colors.size(), 2u);
  EXPECT_DOUBLE_EQ(s.dominant_colors[0].fraction, 0.5);
  EXPECT_DOUBLE_EQ(s.dominant_colors[1].fraction, 0.5);
  EXPECT_DOUBLE_EQ(s.mean_saturation, 0.0);
  EXPECT_EQ(s.distinct_quantized_colors, 2);
}

TEST(ColorStatsTest, SolidGray) {
  const ColorStats s = color_statistics(RasterImage::filled(4, 4, {128, 128, 128}));
  EXPECT_DOUBLE_EQ(s.mean_saturation, 0.0);
  EXPECT_NEAR(s.mean_value, 0.502, 1e-3);
}

TEST(ColorStatsTest, FractionsPartitionAndDescend) {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    const ColorStats s = color_statistics(testing::random_image(50, 40, seed));
    ASSERT_LE(s.dominant_colors.size(), 5u);
    double sum = 0;
    for (std::size_t i = 0; i < s.dominant_colors.size(); ++i) {
      EXPECT_GT(s.dominant_colors[i].fraction, 0.0);
      EXPECT_LE(s.dominant_colors[i].fraction, 1.0);
      if (i > 0) {
        EXPECT_LE(s.dominant_colors[i].fraction, s.dominant_colors[i - 1].fraction);
      }
      sum += s.dominant_colors[i].fraction;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(ColorStatsTest, ChartDominantColorsAreItsPalette) {
  const ColorStats s = color_statistics(testing::bar_chart());
  ASSERT_FALSE(s.dominant_colors.empty());
  EXPECT_EQ(s.dominant_colors[0].color, (Rgb{255, 255, 255}));
}

TEST(AdjustmentTest, IdentityAmountsArePixelIdentical) {
  const RasterImage img = testing::random_image(64, 64, 8);
  for (auto kind : {AdjustmentKind::kContrast, AdjustmentKind::kSaturate,
                    AdjustmentKind::kGrayscale, AdjustmentKind::kGamma, AdjustmentKind::kBlur}) {
    const Adjustment adj{kind, Adjustment::identity_amount(kind)};
    EXPECT_EQ(apply_adjustment(img, adj), img) << to_string(kind);
  }
}

TEST(AdjustmentTest, GrayscaleOfRed) {
  const auto out = apply_adjustment(RasterImage::filled(1, 1, {255, 0, 0}),
                                    {AdjustmentKind::kGrayscale, 1.0});
  EXPECT_EQ(out.at(0, 0), (Rgb{54, 54, 54}));
}

TEST(AdjustmentTest, FullGrayscaleIsAchromatic) {
  const auto out = apply_adjustment(testing::random_image(30, 30, 2), {AdjustmentKind::kGrayscale, 1.0});
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 30; ++x) {
      const Rgb c = out.at(x, y);
      EXPECT_EQ(c.r, c.g);
      EXPECT_EQ(c.g, c.b);
    }
  }
}

TEST(AdjustmentTest, DesaturateMatchesGrayscale) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const RasterImage img = testing::random_image(64, 64, 100 + seed);
    EXPECT_LE(max_channel_diff(apply_adjustment(img, {AdjustmentKind::kSaturate, 0.0}),
                               apply_adjustment(img, {AdjustmentKind::kGrayscale, 1.0})),
              1);
  }
}

TEST(AdjustmentTest, ContrastAndGammaFormulas) {
  const RasterImage img(2, 1, {64, 128, 192, 0, 255, 100});
  const auto c = apply_adjustment(img, {AdjustmentKind::kContrast, 2.0});
  for (std::size_t i = 0; i < 6; ++i) {
    const double x = img.pixels()[i] / 255.0;
    const double y = std::clamp(2.0 * (x - 0.5) + 0.5, 0.0, 1.0);
    EXPECT_EQ(c.pixels()[i], std::lround(y * 255.0));
  }
  const auto g = apply_adjustment(img, {AdjustmentKind::kGamma, 2.2});
  for (std::size_t i = 0; i < 6; ++i) {
    const double x = img.pixels()[i] / 255.0;
    EXPECT_EQ(g.pixels()[i], std::lround(std::pow(x, 1.0 / 2.2) * 255.0));
  }
}

TEST(AdjustmentTest, BlurPreservesConstantAndSpreadsImpulse) {
  const auto flat = RasterImage::filled(9, 9, {40, 80, 120});
  EXPECT_EQ(apply_adjustment(flat, {AdjustmentKind::kBlur, 2.0}), flat);
  RasterImage dot = RasterImage::filled(9, 9, {0, 0, 0});
  dot.set(4, 4, {255, 255, 255});
  const auto b = apply_adjustment(dot, {AdjustmentKind::kBlur, 1.0});
  EXPECT_LT(b.at(4, 4).r, 255);
  EXPECT_GT(b.at(5, 4).r, 0);
  EXPECT_EQ(b.at(5, 4), b.at(3, 4));
}

TEST(AdjustmentTest, RejectsOutOfRangeAmounts) {
  const auto img = RasterImage::filled(2, 2, {});
  const Adjustment bad[] = {{AdjustmentKind::kBlur, -1.0},
                            {AdjustmentKind::kBlur, 101.0},
                            {AdjustmentKind::kGamma, 0.0},
                            {AdjustmentKind::kGrayscale, 1.5},
                            {AdjustmentKind::kContrast, -0.1},
                            {AdjustmentKind::kSaturate, std::nan("")}};
  for (const auto& adj : bad) {
    try {
      apply_adjustment(img, adj);
      ADD_FAILURE() << adj.label();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidAmount);
    }
  }
}

TEST(CvdTest, GrayRampPreservedForAllTypes) {
  std::vector<std::uint8_t> px;
  for (int v = 0; v < 256; ++v) px.insert(px.end(), {std::uint8_t(v), std::uint8_t(v), std::uint8_t(v)});
  const RasterImage ramp(256, 1, px);
  for (CvdType t : kAllCvdTypes) {
    EXPECT_LE(max_channel_diff(simulate_cvd(ramp, t), ramp), 2) << to_string(t);
  }
}

TEST(CvdTest, MidGrayWithinTwo) {
  const auto gray = RasterImage::filled(1, 1, {128, 128, 128});
  for (CvdType t : kAllCvdTypes) EXPECT_LE(max_channel_diff(simulate_cvd(gray, t), gray), 2);
}

TEST(CvdTest, RedUnderProtanopiaCollapses) {
  const Rgb c = simulate_cvd(RasterImage::filled(1, 1, {255, 0, 0}), CvdType::kProtanopia).at(0, 0);
  EXPECT_LE(std::abs(int(c.r) - int(c.g)), 8);
}

TEST(CvdTest, MatchesPublishedMatrixOracle) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> d(0, 255);
  for (int i = 0; i < 500; ++i) {
    const std::array<int, 3> rgb = {d(rng), d(rng), d(rng)};
    const RasterImage px(1, 1, {std::uint8_t(rgb[0]), std::uint8_t(rgb[1]), std::uint8_t(rgb[2])});
    const std::pair<CvdType, testing::oracle::Dichromat> cases[] = {
        {CvdType::kProtanopia, testing::oracle::Dichromat::kProtan},
        {CvdType::kDeuteranopia, testing::oracle::Dichromat::kDeutan}};
    for (auto [type, kind] : cases) {
      const Rgb got = simulate_cvd(px, type).at(0, 0);
      const auto want = testing::oracle::simulate(rgb, kind);
      EXPECT_LE(std::abs(got.r - want[0]), 1.0);
      EXPECT_LE(std::abs(got.g - want[1]), 1.0);
      EXPECT_LE(std::abs(got.b - want[2]), 1.0);
    }
  }
}

TEST(CvdTest, SimulationIsIdempotentWithinOne) {
  const RasterImage img = testing::random_image(1000, 1, 77);
  for (CvdType t : kAllCvdTypes) {
    const auto once = simulate_cvd(img, t);
    EXPECT_LE(max_channel_diff(simulate_cvd(once, t), once), 1) << to_string(t);
  }
}

TEST(CvdTest, TritanopiaKeepsBlueYellowDistinctFromRedGreen) {
  // Tritan confusion lines run roughly blue to green; red and cyan stay apart.
  const RasterImage img(2, 1, {255, 0, 0, 0, 255, 255});
  const auto out = simulate_cvd(img, CvdType::kTritanopia);
  const RasterImage red(1, 1, {out.at(0, 0).r, out.at(0, 0).g, out.at(0, 0).b});
  const RasterImage cyan(1, 1, {out.at(1, 0).r, out.at(1, 0).g, out.at(1, 0).b});
  EXPECT_GT(cvd_difference(red, cyan).values()[0], 0.5);
}

TEST(CvdDifferenceTest, Examples) {
  const auto a = testing::random_image(6, 6, 1);
  const Heatmap same = cvd_difference(a, a);
  for (double v : same.values()) EXPECT_EQ(v, 0.0);
  const auto white = RasterImage::filled(1, 1, {255, 255, 255});
  const auto black = RasterImage::filled(1, 1, {0, 0, 0});
  EXPECT_NEAR(cvd_difference(white, black).values()[0], 1.0, 1e-12);
  const auto red = RasterImage::filled(1, 1, {255, 0, 0});
  const auto green = RasterImage::filled(1, 1, {0, 255, 0});
  EXPECT_NEAR(cvd_difference(red, green).values()[0], std::sqrt(2.0) / std::sqrt(3.0), 1e-4);
  EXPECT_THROW(cvd_difference(white, RasterImage::filled(2, 1, {})), Error);
}

TEST(SrgbTest, TransferFunctionsInvert) {
  for (int v = 0; v < 256; ++v) {
    EXPECT_NEAR(linear_to_srgb(srgb_to_linear(v / 255.0)), v / 255.0, 1e-12);
  }
}

}  // namespace
}  // namespace pat
