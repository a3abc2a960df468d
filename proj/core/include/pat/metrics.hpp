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
#ifndef PAT_METRICS_HPP_
#define PAT_METRICS_HPP_

#include <vector>

#include "pat/image.hpp"

namespace pat {

class BinaryMask {
 public:
  BinaryMask(int width, int height, std::vector<bool> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<bool>& bits() const { return bits_; }
  bool at(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x];
  }
  std::size_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<bool> bits_;
};

// Pixel fractions; tp + tn + fp + fn == 1.
struct ConfusionFractions {
  double tp = 0.0;
  double tn = 0.0;
  double fp = 0.0;
  double fn = 0.0;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Rounds each pixel to 0 or 1, with 0.5 rounding up.
BinaryMask binarize(const Heatmap& hm);

ConfusionFractions confusion(const BinaryMask& pred, const BinaryMask& gt);

// Zero denominators yield 0.
PrecisionRecall precision_recall(const ConfusionFractions& c);

// KL(gt || pred) in nats after adding eps per pixel and normalizing each map
// to unit sum.
double kl_divergence(const Heatmap& gt, const Heatmap& pred, double eps = 1e-7);

}  // namespace pat

#endif  // PAT_METRICS_HPP_
