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
#ifndef PAT_TESTS_SUPPORT_FIXTURES_HPP_
#define PAT_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pat/image.hpp"
#include "pat/report.hpp"

namespace pat::testing {

// Uppercase 5x8 bitmap font; each font pixel becomes a scale x scale block,
// so the cap height is 8 * scale. Unknown characters render as spaces.
struct TextMetrics {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;  // cap height
};
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 8;
TextMetrics draw_text(RasterImage& img, int x, int y, std::string_view text, int scale, Rgb ink);
int text_width(std::string_view text, int scale);

// 800x600 bar chart with a 16 px title, axes, five bars and 8 px labels.
RasterImage bar_chart(int width = 800, int height = 600);

RasterImage random_image(int width, int height, std::uint32_t seed);
GrayImage random_gray(int width, int height, std::uint32_t seed);
Heatmap random_heatmap(int width, int height, std::uint32_t seed);

std::vector<std::uint8_t> png_bytes(const RasterImage& img);
std::vector<std::uint8_t> gif_bytes();

// A fully specified report built from hand-written payloads, independent of
// the filters' numerical behaviour.
Report fixture_report();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

// Locations baked in at configure time.
std::filesystem::path source_dir();
std::filesystem::path cli_path();
std::filesystem::path stub_plugin_path();

}  // namespace pat::testing

#endif  // PAT_TESTS_SUPPORT_FIXTURES_HPP_
