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
#ifndef PAT_SALIENCY_HPP_
#define PAT_SALIENCY_HPP_

#include <span>

#include "pat/image.hpp"

namespace pat {

struct EntropyConfig {
  int window_radius = 4;  // 9x9 window
  int bins = 256;

  void validate() const;
};

// Local Shannon entropy (bits) of the gray-level histogram in a
// (2r+1)x(2r+1) window clipped at the borders, divided by
// log2(min(bins, clipped window size)).
//
// Rows are processed independently so the result does not depend on
// `threads` (0 = hardware concurrency).
Heatmap visual_entropy(const GrayImage& gray, const EntropyConfig& cfg = {},
                       unsigned threads = 0);

struct SpectralResidualConfig {
  int working_size = 128;  // longer side at working scale
  int box_size = 3;        // log-amplitude smoothing
  double sigma = 3.0;      // Gaussian smoothing of the saliency map, px
};

// Spectral-residual saliency at a fixed working scale, upsampled back to the
// input grid.
Heatmap spectral_residual_saliency(const RasterImage& img,
                                   const SpectralResidualConfig& cfg = {});

// Min-max normalization; a degenerate range maps to all zeros.
Heatmap normalize_heatmap(std::span<const double> raw, int width, int height);

}  // namespace pat

#endif  // PAT_SALIENCY_HPP_
