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
#include "fixtures.hpp"

#include <stdlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "pat/builtins.hpp"

namespace pat::testing {
namespace {

using Glyph = std::array<const char*, kGlyphHeight>;

const std::map<char, Glyph>& font() {
  static const std::map<char, Glyph> kFont = {
      {'A', {".###.", "#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
      {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "#...#", "####."}},
      {'C', {".###.", "#...#", "#....", "#....", "#....", "#....", "#...#", ".###."}},
      {'D', {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "####."}},
      {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#....", "#####"}},
      {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#....", "#...."}},
      {'G', {".###.", "#...#", "#....", "#....", "#.###", "#...#", "#...#", ".###."}},
      {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#", "#...#"}},
      {'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
      {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", "#..#.", ".##.."}},
      {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#", "#...#"}},
      {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
      {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#", "#...#"}},
      {'N', {"#...#", "##..#", "##..#", "#.#.#", "#.#.#", "#..##", "#..##", "#...#"}},
      {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
      {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#....", "#...."}},
      {'Q', {".###.", "#...#", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
      {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#", "#...#"}},
      {'S', {".###.", "#...#", "#....", ".###.", "....#", "....#", "#...#", ".###."}},
      {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
      {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
      {'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", ".#.#.", "..#.."}},
      {'W', {"#...#", "#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"}},
      {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#..", "..#.."}},
      {'X', {"#...#", "#...#", ".#.#.", "..#..", "..#..", ".#.#.", "#...#", "#...#"}},
      {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#....", "#####"}},
      {'0', {".###.", "#...#", "#..##", "#.#.#", "#.#.#", "##..#", "#...#", ".###."}},
      {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
      {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
      {'3', {".###.", "#...#", "....#", "..##.", "....#", "....#", "#...#", ".###."}},
      {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#.", "...#."}},
      {'5', {"#####", "#....", "####.", "....#", "....#", "....#", "#...#", ".###."}},
      {'6', {".###.", "#....", "#....", "####.", "#...#", "#...#", "#...#", ".###."}},
      {'7', {"#####", "....#", "...#.", "..#..", "..#..", "..#..", "..#..", "..#.."}},
      {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", "#...#", ".###."}},
      {'9', {".###.", "#...#", "#...#", ".####", "....#", "....#", "....#", ".###."}},
  };
  return kFont;
}

void fill_rect(RasterImage& img, int x0, int y0, int w, int h, Rgb c) {
  for (int y = std::max(0, y0); y < std::min(img.height(), y0 + h); ++y) {
    for (int x = std::max(0, x0); x < std::min(img.width(), x0 + w); ++x) img.set(x, y, c);
  }
}

}  // namespace

int text_width(std::string_view text, int scale) {
  if (text.empty()) return 0;
  return static_cast<int>(text.size()) * (kGlyphWidth + 1) * scale - scale;
}

TextMetrics draw_text(RasterImage& img, int x, int y, std::string_view text, int scale, Rgb ink) {
  int pen = x;
  for (char ch : text) {
    const auto it = font().find(ch);
    if (it != font().end()) {
      for (int gy = 0; gy < kGlyphHeight; ++gy) {
        for (int gx = 0; gx < kGlyphWidth; ++gx) {
          if (it->second[gy][gx] == '#') {
            fill_rect(img, pen + gx * scale, y + gy * scale, scale, scale, ink);
          }
        }
      }
    }
    pen += (kGlyphWidth + 1) * scale;
  }
  return {x, y, text_width(text, scale), kGlyphHeight * scale};
}

RasterImage bar_chart(int width, int height) {
  RasterImage img = RasterImage::filled(width, height, {255, 255, 255});
  const Rgb ink{30, 30, 30};
  const std::string title = "QUARTERLY SALES BY REGION";
  draw_text(img, (width - text_width(title, 2)) / 2, 24, title, 2, ink);

  const int left = width / 10, bottom = height - height / 8, top = height / 6;
  fill_rect(img, left, top, 2, bottom - top, ink);
  fill_rect(img, left, bottom, width - 2 * left, 2, ink);

  const std::array<Rgb, 5> palette = {{{31, 119, 180}, {255, 127, 14}, {44, 160, 44},
                                       {214, 39, 40}, {148, 103, 189}}};
  const std::array<double, 5> values = {0.55, 0.35, 0.8, 0.25, 0.65};
  const std::array<const char*, 5> labels = {"NORTH", "SOUTH", "EAST", "WEST", "CENTRAL"};
  const int slot = (width - 2 * left) / 5;
  for (int i = 0; i < 5; ++i) {
    const int bar_h = static_cast<int>(values[i] * (bottom - top));
    const int x = left + i * slot + slot / 5;
    fill_rect(img, x, bottom - bar_h, slot * 3 / 5, bar_h, palette[i]);
    draw_text(img, x, bottom + 12, labels[i], 1, ink);
  }
  return img;
}

RasterImage random_image(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
  for (auto& v : px) v = static_cast<std::uint8_t>(dist(rng));
  return RasterImage(width, height, std::move(px));
}

GrayImage random_gray(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(width) * height);
  for (auto& x : v) x = static_cast<std::uint8_t>(dist(rng));
  return GrayImage(width, height, std::move(v));
}

Heatmap random_heatmap(int width, int height, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (auto& x : v) x = dist(rng);
  return Heatmap(width, height, std::move(v));
}

std::vector<std::uint8_t> png_bytes(const RasterImage& img) { return encode_png(img); }

std::vector<std::uint8_t> gif_bytes() {
  // 1x1 transparent GIF.
  static const std::uint8_t kGif[] = {
      0x47, 0x49, 0x46, 0x38, 0x39, 0x61, 0x01, 0x00, 0x01, 0x00, 0x80, 0x00, 0x00, 0xff,
      0xff, 0xff, 0x00, 0x00, 0x00, 0x21, 0xf9, 0x04, 0x01, 0x00, 0x00, 0x00, 0x00, 0x2c,
      0x00, 0x00, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x02, 0x02, 0x44, 0x01, 0x00, 0x3b};
  return {std::begin(kGif), std::end(kGif)};
}

Report fixture_report() {
  RasterImage chart = RasterImage::filled(8, 6, {255, 255, 255});
  for (int x = 2; x < 4; ++x) {
    for (int y = 1; y < 6; ++y) chart.set(x, y, {31, 119, 180});
  }
  for (int x = 5; x < 7; ++x) {
    for (int y = 3; y < 6; ++y) chart.set(x, y, {214, 39, 40});
  }

  std::vector<double> ramp(48), spot(48, 0.0);
  for (int i = 0; i < 48; ++i) ramp[i] = (i * 5) / 255.0;
  spot[3 * 8 + 2] = 1.0;
  spot[3 * 8 + 3] = 128 / 255.0;

  TextRegion title{{1, 0, 6, 2}, 2.0, 0.75, std::nullopt};
  TextRegion label{{0, 4, 3, 2}, 2.0, 0.5, std::string("Q1")};

  ImageVariantSet cvd;
  cvd.variants.push_back({"deuteranopia", simulate_cvd(chart, CvdType::kDeuteranopia)});
  cvd.variants.push_back({"protanopia", simulate_cvd(chart, CvdType::kProtanopia)});
  cvd.variants.push_back({"tritanopia", simulate_cvd(chart, CvdType::kTritanopia)});

  std::vector<SectionResult> results;
  results.push_back({"cvd-simulation", Section::kCvd, SectionStatus::kOk, 3, cvd, ""});
  results.push_back({"visual-entropy", Section::kEntropy, SectionStatus::kOk, 12,
                     Heatmap(8, 6, ramp), ""});
  results.push_back({"chart-specs", Section::kSpecs, SectionStatus::kOk, 1, chart_specs(chart), ""});
  results.push_back({"text-regions", Section::kText, SectionStatus::kOk, 7,
                     TextFindings{{title, label}, legibility_flags({title, label}, 10.0)}, ""});
  results.push_back({"spectral-residual", Section::kLowLevelSalience, SectionStatus::kOk, 4,
                     Heatmap(8, 6, spot), ""});
  results.push_back(SectionResult::failure(Section::kObjects, "object-detector",
                                           SectionStatus::kFailed, 40,
                                           "SpawnError: cannot start detector"));
  results.push_back({"palette-check", Section::kCustom, SectionStatus::kOk, 2,
                     ObjectBoxes{{{{1, 1, 2, 2}, "swatch", 0.25}}}, ""});

  Report r = build_report(chart, chart_specs(chart), std::move(results), "alice",
                          parse_timestamp("2026-01-02T03:04:05.678Z"),
                          {"image 8x6 is below recommended 400×300 resolution"});
  r.notes.push_back({"note-1", "entropy", "Title competes with the bars.",
                     parse_timestamp("2026-01-02T03:10:00.000Z")});
  return r;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "pat-test-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::filesystem::path source_dir() { return PAT_TEST_SOURCE_DIR; }
std::filesystem::path cli_path() { return PAT_TEST_CLI_PATH; }
std::filesystem::path stub_plugin_path() { return PAT_TEST_STUB_PLUGIN_PATH; }

}  // namespace pat::testing
