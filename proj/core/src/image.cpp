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
#include "pat/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "pat/error.hpp"

namespace pat {
namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "image dimensions must be positive, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

std::uint8_t round_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

cv::Mat to_bgr_mat(const RasterImage& img) {
  cv::Mat bgr(img.height(), img.width(), CV_8UC3);
  auto px = img.pixels();
  for (int y = 0; y < img.height(); ++y) {
    auto* row = bgr.ptr<std::uint8_t>(y);
    const std::size_t base = static_cast<std::size_t>(y) * img.width() * 3;
    for (int x = 0; x < img.width(); ++x) {
      row[x * 3 + 0] = px[base + x * 3 + 2];
      row[x * 3 + 1] = px[base + x * 3 + 1];
      row[x * 3 + 2] = px[base + x * 3 + 0];
    }
  }
  return bgr;
}

// Accepts 8-bit 1/3/4-channel BGR(A); alpha composited over white.
std::vector<std::uint8_t> mat_to_rgb(const cv::Mat& m) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(m.rows) * m.cols * 3);
  const int ch = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      std::uint8_t r, g, b;
      int alpha = 255;
      if (ch == 1) {
        r = g = b = row[x];
      } else if (ch == 2) {
        r = g = b = row[x * 2];
        alpha = row[x * 2 + 1];
      } else {
        b = row[x * ch + 0];
        g = row[x * ch + 1];
        r = row[x * ch + 2];
        if (ch == 4) alpha = row[x * 4 + 3];
      }
      const std::size_t o = (static_cast<std::size_t>(y) * m.cols + x) * 3;
      if (alpha == 255) {
        out[o] = r;
        out[o + 1] = g;
        out[o + 2] = b;
      } else {
        auto over_white = [alpha](int c) {
          return round_u8((c * alpha + 255.0 * (255 - alpha)) / 255.0);
        };
        out[o] = over_white(r);
        out[o + 1] = over_white(g);
        out[o + 2] = over_white(b);
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> imencode_png(const cv::Mat& m) {
  std::vector<std::uint8_t> buf;
  const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 6};
  if (!cv::imencode(".png", m, buf, params)) {
    throw Error(ErrorCode::kInvalidArgument, "PNG encoding failed");
  }
  return buf;
}

}  // namespace

std::string_view to_string(ImageFormat format) {
  return format == ImageFormat::kPng ? "png" : "jpeg";
}

RasterImage::RasterImage(int width, int height,
                         std::vector<std::uint8_t> pixels,
                         ImageFormat source_format,
                         std::size_t source_bytes_len)
    : width_(width),
      height_(height),
      pixels_(std::move(pixels)),
      source_format_(source_format),
      source_bytes_len_(source_bytes_len) {
  check_dims(width, height);
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel buffer length does not match width*height*3");
  }
}

RasterImage RasterImage::filled(int width, int height, Rgb color) {
  check_dims(width, height);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < px.size(); i += 3) {
    px[i] = color.r;
    px[i + 1] = color.g;
    px[i + 2] = color.b;
  }
  return RasterImage(width, height, std::move(px));
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "gray buffer length does not match width*height");
  }
}

Heatmap::Heatmap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "heatmap length does not match width*height");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "heatmap value is not finite");
    }
    if (v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "heatmap value outside [0,1]: " + std::to_string(v));
    }
  }
}

Heatmap Heatmap::zeros(int width, int height) {
  return filled(width, height, 0.0);
}

Heatmap Heatmap::filled(int width, int height, double value) {
  check_dims(width, height);
  return Heatmap(width, height,
                 std::vector<double>(static_cast<std::size_t>(width) * height,
                                     value));
}

double Heatmap::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) /
         static_cast<double>(values_.size());
}

void ResizePolicy::validate() const {
  if (max_w < 1 || max_h < 1 || warn_min_w < 0 || warn_min_h < 0 ||
      max_w < warn_min_w || max_h < warn_min_h) {
    throw Error(ErrorCode::kInvalidArgument,
                "resize policy requires max >= warn minimum on both axes");
  }
}

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngMagic[] = {0x89, 'P', 'N', 'G',
                                               0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= sizeof(kPngMagic) &&
      std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
    return ImageFormat::kPng;
  }
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 &&
      bytes[2] == 0xFF) {
    return ImageFormat::kJpeg;
  }
  throw Error(ErrorCode::kUnsupportedFormat,
              "unsupported image format (expected png or jpeg)");
}

RasterImage load_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) {
    throw Error(ErrorCode::kDecodeError, "empty image stream");
  }
  const ImageFormat format = sniff_format(bytes);
  cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
              const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded;
  try {
    decoded = cv::imdecode(raw, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::kDecodeError, std::string("decode failed: ") + e.what());
  }
  if (decoded.empty()) {
    throw Error(ErrorCode::kDecodeError,
                std::string("corrupt ") + std::string(to_string(format)) +
                    " stream");
  }
  if (decoded.depth() == CV_16U) {
    cv::Mat eight;
    decoded.convertTo(eight, CV_8U, 1.0 / 257.0);
    decoded = eight;
  } else if (decoded.depth() != CV_8U) {
    throw Error(ErrorCode::kDecodeError, "unsupported sample depth");
  }
  return RasterImage(decoded.cols, decoded.rows, mat_to_rgb(decoded), format,
                     bytes.size());
}

ResizeResult validate_and_resize(const RasterImage& img,
                                 const ResizePolicy& policy) {
  policy.validate();
  std::vector<std::string> warnings;
  const int w = img.width();
  const int h = img.height();
  if (w > policy.max_w || h > policy.max_h) {
    const double scale = std::min(static_cast<double>(policy.max_w) / w,
                                  static_cast<double>(policy.max_h) / h);
    const int nw = std::clamp(static_cast<int>(std::lround(w * scale)), 1,
                              policy.max_w);
    const int nh = std::clamp(static_cast<int>(std::lround(h * scale)), 1,
                              policy.max_h);
    return {resize_bilinear(img, nw, nh), std::move(warnings)};
  }
  if (w < policy.warn_min_w || h < policy.warn_min_h) {
    warnings.push_back("image " + std::to_string(w) + "x" + std::to_string(h) +
                       " is below recommended " +
                       std::to_string(policy.warn_min_w) + "×" +
                       std::to_string(policy.warn_min_h) + " resolution");
  }
  return {img, std::move(warnings)};
}

RasterImage resize_bilinear(const RasterImage& img, int width, int height) {
  check_dims(width, height);
  if (width == img.width() && height == img.height()) return img;
  cv::Mat src(img.height(), img.width(), CV_8UC3,
              const_cast<std::uint8_t*>(img.pixels().data()));
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  std::vector<std::uint8_t> px(dst.data, dst.data + dst.total() * 3);
  return RasterImage(width, height, std::move(px), img.source_format(),
                     img.source_bytes_len());
}

Heatmap resize_heatmap(const Heatmap& hm, int width, int height) {
  check_dims(width, height);
  if (width == hm.width() && height == hm.height()) return hm;
  cv::Mat src(hm.height(), hm.width(), CV_64F,
              const_cast<double*>(hm.values().data()));
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  std::vector<double> v(dst.ptr<double>(), dst.ptr<double>() + dst.total());
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return Heatmap(width, height, std::move(v));
}

GrayImage to_grayscale(const RasterImage& img) {
  std::vector<std::uint8_t> out(img.pixel_count());
  auto px = img.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = round_u8(0.2126 * px[i * 3] + 0.7152 * px[i * 3 + 1] +
                      0.0722 * px[i * 3 + 2]);
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

RasterImage gray_to_rgb(const GrayImage& gray) {
  std::vector<std::uint8_t> px(gray.values().size() * 3);
  for (std::size_t i = 0; i < gray.values().size(); ++i) {
    px[i * 3] = px[i * 3 + 1] = px[i * 3 + 2] = gray.values()[i];
  }
  return RasterImage(gray.width(), gray.height(), std::move(px));
}

std::array<double, 3> colormap(double v) {
  const double t = std::clamp(v, 0.0, 1.0) * (kOverlayAnchors.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(t));
  if (lo >= kOverlayAnchors.size() - 1) {
    const Rgb c = kOverlayAnchors.back();
    return {double(c.r), double(c.g), double(c.b)};
  }
  const double f = t - lo;
  const Rgb a = kOverlayAnchors[lo];
  const Rgb b = kOverlayAnchors[lo + 1];
  return {a.r + f * (b.r - a.r), a.g + f * (b.g - a.g), a.b + f * (b.b - a.b)};
}

RasterImage composite_overlay(const RasterImage& base, const Heatmap& hm,
                              double opacity) {
  if (base.width() != hm.width() || base.height() != hm.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "heatmap dimensions differ from base image");
  }
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "opacity must lie in [0,1]");
  }
  RasterImage out = base;
  if (opacity == 0.0) return out;
  auto px = out.mutable_pixels();
  auto values = hm.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto c = colormap(values[i]);
    for (int k = 0; k < 3; ++k) {
      px[i * 3 + k] =
          round_u8((1.0 - opacity) * px[i * 3 + k] + opacity * c[k]);
    }
  }
  return out;
}

RasterImage blend_images(const RasterImage& base, const RasterImage& top,
                         double opacity) {
  if (base.width() != top.width() || base.height() != top.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "blend operands differ in dimensions");
  }
  if (!(opacity >= 0.0 && opacity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "opacity must lie in [0,1]");
  }
  RasterImage out = base;
  if (opacity == 0.0) return out;
  auto px = out.mutable_pixels();
  auto tp = top.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = round_u8((1.0 - opacity) * px[i] + opacity * tp[i]);
  }
  return out;
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  return imencode_png(to_bgr_mat(img));
}

std::vector<std::uint8_t> encode_png(const Heatmap& hm) {
  cv::Mat gray(hm.height(), hm.width(), CV_8UC1);
  auto values = hm.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    gray.data[i] = round_u8(values[i] * 255.0);
  }
  return imencode_png(gray);
}

Heatmap decode_heatmap(std::span<const std::uint8_t> bytes) {
  const GrayImage gray = to_grayscale(load_image(bytes));
  std::vector<double> v(gray.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = gray.values()[i] / 255.0;
  return Heatmap(gray.width(), gray.height(), std::move(v));
}

Heatmap quantize_heatmap(const Heatmap& hm) {
  std::vector<double> v(hm.values().begin(), hm.values().end());
  for (double& x : v) x = std::lround(x * 255.0) / 255.0;
  return Heatmap(hm.width(), hm.height(), std::move(v));
}

}  // namespace pat
