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
#include "pat/color.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "pat/error.hpp"

namespace pat {
namespace {

struct ColorCount {
  std::uint32_t packed;
  std::uint64_t count;
};

int channel(std::uint32_t packed, int ch) {
  return static_cast<int>((packed >> (16 - 8 * ch)) & 0xFF);
}

struct Box {
  std::size_t begin;
  std::size_t end;
  std::uint64_t count;
  int widest = 0;
  int range = 0;
};

void measure(Box& box, const std::vector<ColorCount>& colors) {
  int lo[3] = {255, 255, 255};
  int hi[3] = {0, 0, 0};
  for (std::size_t i = box.begin; i < box.end; ++i) {
    for (int ch = 0; ch < 3; ++ch) {
      const int v = channel(colors[i].packed, ch);
      lo[ch] = std::min(lo[ch], v);
      hi[ch] = std::max(hi[ch], v);
    }
  }
  box.widest = 0;
  box.range = hi[0] - lo[0];
  for (int ch = 1; ch < 3; ++ch) {
    if (hi[ch] - lo[ch] > box.range) {
      box.range = hi[ch] - lo[ch];
      box.widest = ch;
    }
  }
}

std::uint8_t to_byte(double v01) {
  return static_cast<std::uint8_t>(
      std::clamp(std::lround(v01 * 255.0), 0L, 255L));
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  }
  const double sum = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= sum;
  return k;
}

// Separable Gaussian on [0,1] planes with clamp-to-edge sampling.
std::vector<double> gaussian_blur(const std::vector<double>& src, int w, int h,
                                  double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(src.size());
  std::vector<double> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int xx = std::clamp(x + k, 0, w - 1);
          acc += kernel[k + radius] * src[(std::size_t(y) * w + xx) * 3 + c];
        }
        tmp[(std::size_t(y) * w + x) * 3 + c] = acc;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
          const int yy = std::clamp(y + k, 0, h - 1);
          acc += kernel[k + radius] * tmp[(std::size_t(yy) * w + x) * 3 + c];
        }
        out[(std::size_t(y) * w + x) * 3 + c] = acc;
      }
    }
  }
  return out;
}

}  // namespace

ColorStats color_statistics(const RasterImage& img, int max_colors) {
  if (max_colors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_colors must be >= 1");
  }
  const auto px = img.pixels();
  const std::size_t n = img.pixel_count();

  ColorStats stats;
  double sat_sum = 0.0;
  double val_sum = 0.0;
  std::vector<std::uint32_t> packed(n);
  std::vector<bool> quantized(4096, false);
  for (std::size_t i = 0; i < n; ++i) {
    const int r = px[i * 3], g = px[i * 3 + 1], b = px[i * 3 + 2];
    const int mx = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    val_sum += mx / 255.0;
    if (mx > 0) sat_sum += double(mx - mn) / mx;
    packed[i] = (std::uint32_t(r) << 16) | (std::uint32_t(g) << 8) | b;
    quantized[((r >> 4) << 8) | ((g >> 4) << 4) | (b >> 4)] = true;
  }
  stats.mean_saturation = sat_sum / n;
  stats.mean_value = val_sum / n;
  stats.distinct_quantized_colors =
      static_cast<int>(std::count(quantized.begin(), quantized.end(), true));

  std::sort(packed.begin(), packed.end());
  std::vector<ColorCount> colors;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && packed[j] == packed[i]) ++j;
    colors.push_back({packed[i], j - i});
    i = j;
  }

  std::vector<Box> boxes;
  boxes.push_back({0, colors.size(), n});
  measure(boxes.back(), colors);

  while (static_cast<int>(boxes.size()) < max_colors) {
    int pick = -1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const Box& b = boxes[i];
      if (b.end - b.begin < 2) continue;
      if (pick < 0 || b.range > boxes[pick].range ||
          (b.range == boxes[pick].range && b.count > boxes[pick].count)) {
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;

    Box box = boxes[pick];
    const int ch = box.widest;
    std::sort(colors.begin() + box.begin, colors.begin() + box.end,
              [ch](const ColorCount& a, const ColorCount& b) {
                const int va = channel(a.packed, ch), vb = channel(b.packed, ch);
                return va != vb ? va < vb : a.packed < b.packed;
              });
    // Weighted median, kept strictly inside the box so both halves are
    // non-empty.
    std::uint64_t acc = 0;
    std::size_t split = box.begin + 1;
    for (std::size_t i = box.begin; i < box.end - 1; ++i) {
      acc += colors[i].count;
      split = i + 1;
      if (2 * acc >= box.count) break;
    }
    Box left{box.begin, split, 0};
    Box right{split, box.end, 0};
    for (std::size_t i = left.begin; i < left.end; ++i) left.count += colors[i].count;
    right.count = box.count - left.count;
    measure(left, colors);
    measure(right, colors);
    boxes[pick] = left;
    boxes.insert(boxes.begin() + pick + 1, right);
  }

  for (const Box& b : boxes) {
    double sum[3] = {0, 0, 0};
    for (std::size_t i = b.begin; i < b.end; ++i) {
      for (int ch = 0; ch < 3; ++ch) {
        sum[ch] += double(channel(colors[i].packed, ch)) * colors[i].count;
      }
    }
    const double cnt = double(b.count);
    stats.dominant_colors.push_back(
        {Rgb{static_cast<std::uint8_t>(std::lround(sum[0] / cnt)),
             static_cast<std::uint8_t>(std::lround(sum[1] / cnt)),
             static_cast<std::uint8_t>(std::lround(sum[2] / cnt))},
         cnt / double(n)});
  }
  std::sort(stats.dominant_colors.begin(), stats.dominant_colors.end(),
            [](const DominantColor& a, const DominantColor& b) {
              return a.fraction != b.fraction ? a.fraction > b.fraction
                                              : a.color < b.color;
            });
  return stats;
}

std::string_view to_string(AdjustmentKind kind) {
  switch (kind) {
    case AdjustmentKind::kBlur: return "blur";
    case AdjustmentKind::kGamma: return "gamma";
    case AdjustmentKind::kGrayscale: return "grayscale";
    case AdjustmentKind::kContrast: return "contrast";
    case AdjustmentKind::kSaturate: return "saturate";
  }
  return "unknown";
}

std::optional<AdjustmentKind> parse_adjustment_kind(std::string_view name) {
  for (auto k : {AdjustmentKind::kBlur, AdjustmentKind::kGamma,
                 AdjustmentKind::kGrayscale, AdjustmentKind::kContrast,
                 AdjustmentKind::kSaturate}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void Adjustment::validate() const {
  bool ok = std::isfinite(amount);
  if (ok) {
    switch (kind) {
      case AdjustmentKind::kBlur: ok = amount >= 0.0 && amount <= 100.0; break;
      case AdjustmentKind::kGamma: ok = amount > 0.0; break;
      case AdjustmentKind::kGrayscale: ok = amount >= 0.0 && amount <= 1.0; break;
      case AdjustmentKind::kContrast: ok = amount >= 0.0; break;
      case AdjustmentKind::kSaturate: ok = amount >= 0.0; break;
    }
  }
  if (!ok) {
    throw Error(ErrorCode::kInvalidAmount,
                std::string(to_string(kind)) + " amount out of range: " +
                    std::to_string(amount));
  }
}

double Adjustment::identity_amount(AdjustmentKind kind) {
  switch (kind) {
    case AdjustmentKind::kBlur: return 0.0;
    case AdjustmentKind::kGrayscale: return 0.0;
    default: return 1.0;
  }
}

std::string Adjustment::label() const {
  std::ostringstream os;
  os << to_string(kind) << "(" << amount << ")";
  return os.str();
}

RasterImage apply_adjustment(const RasterImage& img, const Adjustment& adj) {
  adj.validate();
  const auto px = img.pixels();
  std::vector<double> plane(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) plane[i] = px[i] / 255.0;

  const double a = adj.amount;
  switch (adj.kind) {
    case AdjustmentKind::kGrayscale:
      for (std::size_t i = 0; i < plane.size(); i += 3) {
        const double lum =
            0.2126 * plane[i] + 0.7152 * plane[i + 1] + 0.0722 * plane[i + 2];
        for (int c = 0; c < 3; ++c) {
          plane[i + c] = (1.0 - a) * plane[i + c] + a * lum;
        }
      }
      break;
    case AdjustmentKind::kSaturate: {
      const double m[3][3] = {
          {0.213 + 0.787 * a, 0.715 - 0.715 * a, 0.072 - 0.072 * a},
          {0.213 - 0.213 * a, 0.715 + 0.285 * a, 0.072 - 0.072 * a},
          {0.213 - 0.213 * a, 0.715 - 0.715 * a, 0.072 + 0.928 * a},
      };
      for (std::size_t i = 0; i < plane.size(); i += 3) {
        const double r = plane[i], g = plane[i + 1], b = plane[i + 2];
        for (int c = 0; c < 3; ++c) {
          plane[i + c] = m[c][0] * r + m[c][1] * g + m[c][2] * b;
        }
      }
      break;
    }
    case AdjustmentKind::kContrast:
      for (double& v : plane) v = a * (v - 0.5) + 0.5;
      break;
    case AdjustmentKind::kGamma:
      for (double& v : plane) v = std::pow(v, 1.0 / a);
      break;
    case AdjustmentKind::kBlur:
      if (a > 0.0) plane = gaussian_blur(plane, img.width(), img.height(), a);
      break;
  }

  std::vector<std::uint8_t> out(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) out[i] = to_byte(plane[i]);
  return RasterImage(img.width(), img.height(), std::move(out),
                     img.source_format(), img.source_bytes_len());
}

std::vector<Adjustment> default_color_suggestions() {
  return {
      {AdjustmentKind::kBlur, 2.0},
      {AdjustmentKind::kGamma, 1.8},
      {AdjustmentKind::kGrayscale, 1.0},
      {AdjustmentKind::kContrast, 1.5},
      {AdjustmentKind::kSaturate, 2.0},
  };
}

}  // namespace pat
