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
#include "pat/saliency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "parallel.hpp"
#include "pat/error.hpp"

namespace pat {

void EntropyConfig::validate() const {
  if (window_radius < 1) {
    throw Error(ErrorCode::kInvalidArgument, "entropy window_radius must be >= 1");
  }
  if (bins != 256) {
    throw Error(ErrorCode::kInvalidArgument, "entropy histogram uses 256 bins");
  }
}

Heatmap visual_entropy(const GrayImage& gray, const EntropyConfig& cfg,
                       unsigned threads) {
  cfg.validate();
  const int w = gray.width();
  const int h = gray.height();
  const int r = cfg.window_radius;
  const int max_count = (2 * r + 1) * (2 * r + 1);

  // c*log2(c) for every count a window can hold; S = sum over bins lets the
  // entropy be read as log2(N) - S/N after each O(1) histogram update.
  std::vector<double> c_log_c(max_count + 1, 0.0);
  for (int c = 2; c <= max_count; ++c) c_log_c[c] = c * std::log2(double(c));
  std::vector<double> inv_norm(max_count + 1, 0.0);
  for (int n = 2; n <= max_count; ++n) {
    inv_norm[n] = 1.0 / std::log2(double(std::min(n, cfg.bins)));
  }

  std::vector<double> out(static_cast<std::size_t>(w) * h);
  auto values = gray.values();

  internal::for_each_row_band(h, threads, [&](int row_begin, int row_end) {
    std::array<int, 256> hist{};
    for (int y = row_begin; y < row_end; ++y) {
      const int y0 = std::max(0, y - r);
      const int y1 = std::min(h - 1, y + r);
      const int col_height = y1 - y0 + 1;
      hist.fill(0);
      double s = 0.0;
      int n = 0;
      int occupied = 0;

      auto add_column = [&](int x) {
        for (int yy = y0; yy <= y1; ++yy) {
          int& c = hist[values[static_cast<std::size_t>(yy) * w + x]];
          s += c_log_c[c + 1] - c_log_c[c];
          occupied += c == 0;
          ++c;
        }
        n += col_height;
      };
      auto remove_column = [&](int x) {
        for (int yy = y0; yy <= y1; ++yy) {
          int& c = hist[values[static_cast<std::size_t>(yy) * w + x]];
          s += c_log_c[c - 1] - c_log_c[c];
          --c;
          occupied -= c == 0;
        }
        n -= col_height;
      };

      for (int x = 0; x <= std::min(w - 1, r); ++x) add_column(x);
      for (int x = 0; x < w; ++x) {
        double e = 0.0;
        // A single occupied bin is exactly zero; the running sum may drift.
        if (occupied > 1) {
          e = (std::log2(double(n)) - s / n) * inv_norm[n];
          e = std::clamp(e, 0.0, 1.0);
        }
        out[static_cast<std::size_t>(y) * w + x] = e;
        if (x - r >= 0) remove_column(x - r);
        if (x + r + 1 < w) add_column(x + r + 1);
      }
    }
  });
  return Heatmap(w, h, std::move(out));
}

Heatmap normalize_heatmap(std::span<const double> raw, int width, int height) {
  if (raw.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument, "field length != width*height");
  }
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "cannot normalize non-finite value");
    }
    if (first) {
      lo = hi = v;
      first = false;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(raw.size(), 0.0);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      out[i] = std::clamp((raw[i] - lo) / range, 0.0, 1.0);
    }
  }
  return Heatmap(width, height, std::move(out));
}

namespace {
constexpr double kMinAmplitude = 1.0;
}  // namespace

Heatmap spectral_residual_saliency(const RasterImage& img,
                                   const SpectralResidualConfig& cfg) {
  const int w = img.width();
  const int h = img.height();

  cv::Mat lum(h, w, CV_64F);
  {
    auto px = img.pixels();
    auto* dst = lum.ptr<double>();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      dst[i] = 0.2126 * px[i * 3] + 0.7152 * px[i * 3 + 1] +
               0.0722 * px[i * 3 + 2];
    }
  }
  double lmin = 0, lmax = 0;
  cv::minMaxLoc(lum, &lmin, &lmax);
  if (lmax == lmin) return Heatmap::zeros(w, h);

  const double scale = double(cfg.working_size) / std::max(w, h);
  const int ww = std::max(1, static_cast<int>(std::lround(w * scale)));
  const int wh = std::max(1, static_cast<int>(std::lround(h * scale)));
  cv::Mat work;
  if (ww == w && wh == h) {
    work = lum;
  } else {
    cv::resize(lum, work, cv::Size(ww, wh), 0, 0,
               scale < 1.0 ? cv::INTER_AREA : cv::INTER_LINEAR);
  }

  cv::Mat spectrum;
  cv::dft(work, spectrum, cv::DFT_COMPLEX_OUTPUT);
  std::vector<cv::Mat> planes;
  cv::split(spectrum, planes);
  cv::Mat amplitude;
  cv::magnitude(planes[0], planes[1], amplitude);

  // Amplitudes below one luminance unit are far under 8-bit quantization
  // noise. Flooring them keeps exact spectral zeros (a 4 px box on a 128 grid
  // has whole rows of them) from dragging the box-filtered log-amplitude down
  // and amplifying their neighbours by orders of magnitude.
  cv::Mat log_amp(amplitude.size(), CV_64F);
  for (int i = 0; i < static_cast<int>(amplitude.total()); ++i) {
    log_amp.ptr<double>()[i] = std::log(std::max(amplitude.ptr<double>()[i], kMinAmplitude));
  }
  cv::Mat smoothed;
  cv::blur(log_amp, smoothed, cv::Size(cfg.box_size, cfg.box_size),
           cv::Point(-1, -1), cv::BORDER_REPLICATE);

  // exp(log A - smoothed) with the original phase is the spectrum scaled by
  // exp(-smoothed); scaling keeps the phase exact.
  cv::Mat gain;
  cv::exp(-smoothed, gain);
  planes[0] = planes[0].mul(gain);
  planes[1] = planes[1].mul(gain);
  cv::Mat merged, inverse;
  cv::merge(planes, merged);
  cv::idft(merged, inverse, cv::DFT_COMPLEX_OUTPUT | cv::DFT_SCALE);
  cv::split(inverse, planes);
  cv::Mat power = planes[0].mul(planes[0]) + planes[1].mul(planes[1]);

  const int radius = static_cast<int>(std::ceil(3.0 * cfg.sigma));
  cv::Mat blurred;
  cv::GaussianBlur(power, blurred, cv::Size(2 * radius + 1, 2 * radius + 1),
                   cfg.sigma, cfg.sigma, cv::BORDER_REPLICATE);

  std::vector<double> raw(blurred.ptr<double>(),
                          blurred.ptr<double>() + blurred.total());
  Heatmap normalized = normalize_heatmap(raw, ww, wh);
  return resize_heatmap(normalized, w, h);
}

}  // namespace pat
