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
#ifndef PAT_IMAGE_HPP_
#define PAT_IMAGE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pat {

enum class ImageFormat { kPng, kJpeg };

std::string_view to_string(ImageFormat format);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
  friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

// Decoded sRGB image, 8 bits per channel, row-major RGB triplets.
class RasterImage {
 public:
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels,
              ImageFormat source_format = ImageFormat::kPng,
              std::size_t source_bytes_len = 0);

  static RasterImage filled(int width, int height, Rgb color);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  ImageFormat source_format() const { return source_format_; }
  std::size_t source_bytes_len() const { return source_bytes_len_; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  // Length is fixed; only the values may change.
  std::span<std::uint8_t> mutable_pixels() { return pixels_; }

  Rgb at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  bool same_pixels(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           pixels_ == other.pixels_;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
  ImageFormat source_format_;
  std::size_t source_bytes_len_;
};

class GrayImage {
 public:
  GrayImage(int width, int height, std::vector<std::uint8_t> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> values() const { return values_; }
  std::span<std::uint8_t> mutable_values() { return values_; }
  std::uint8_t at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

// Per-pixel scalar field in [0,1] on an image grid.
class Heatmap {
 public:
  Heatmap(int width, int height, std::vector<double> values);

  static Heatmap zeros(int width, int height);
  static Heatmap filled(int width, int height, double value);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  double mean() const;

  friend bool operator==(const Heatmap&, const Heatmap&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

struct ResizePolicy {
  int max_w = 1000;
  int max_h = 1000;
  int warn_min_w = 400;
  int warn_min_h = 300;

  // Throws kInvalidArgument when the bounds are inconsistent.
  void validate() const;
};

struct ResizeResult {
  RasterImage image;
  std::vector<std::string> warnings;
};

// Decodes PNG or JPEG. Alpha, when present, is composited over white.
RasterImage load_image(std::span<const std::uint8_t> bytes);

// Identifies the container from its magic bytes; throws kUnsupportedFormat for
// anything other than PNG/JPEG.
ImageFormat sniff_format(std::span<const std::uint8_t> bytes);

// Downscales (bilinear, aspect-preserving) images exceeding the policy maxima.
// Never upscales. Images under the recommended minimum pass through with a
// warning.
ResizeResult validate_and_resize(const RasterImage& img,
                                 const ResizePolicy& policy = {});

RasterImage resize_bilinear(const RasterImage& img, int width, int height);
Heatmap resize_heatmap(const Heatmap& hm, int width, int height);

// Rec. 709 luminance, rounded to nearest.
GrayImage to_grayscale(const RasterImage& img);
RasterImage gray_to_rgb(const GrayImage& gray);

// Blue-to-red overlay ramp: nine anchors, linear interpolation between them.
inline constexpr std::array<Rgb, 9> kOverlayAnchors = {{
    {69, 117, 180},
    {116, 173, 209},
    {171, 217, 233},
    {224, 243, 248},
    {255, 255, 191},
    {254, 224, 144},
    {253, 174, 97},
    {244, 109, 67},
    {215, 48, 39},
}};

// Unrounded colormap value in 0..255 per channel.
std::array<double, 3> colormap(double v);

RasterImage composite_overlay(const RasterImage& base, const Heatmap& hm,
                              double opacity);

// out = (1 - opacity) * base + opacity * top, per channel, rounded.
RasterImage blend_images(const RasterImage& base, const RasterImage& top,
                         double opacity);

// 8-bit PNG, no interlacing. Heatmaps are written as grayscale round(v*255).
std::vector<std::uint8_t> encode_png(const RasterImage& img);
std::vector<std::uint8_t> encode_png(const Heatmap& hm);

// Reads a PNG/JPEG as a heatmap: luminance / 255.
Heatmap decode_heatmap(std::span<const std::uint8_t> bytes);

// Snaps every value to the nearest multiple of 1/255 so that a PNG round trip
// is lossless.
Heatmap quantize_heatmap(const Heatmap& hm);

}  // namespace pat

#endif  // PAT_IMAGE_HPP_
