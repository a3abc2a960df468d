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
#include "pat/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pat/error.hpp"

namespace pat {

BinaryMask::BinaryMask(int width, int height, std::vector<bool> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1 ||
      bits_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask length does not match width*height");
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

BinaryMask binarize(const Heatmap& hm) {
  std::vector<bool> bits(hm.size());
  auto v = hm.values();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = v[i] >= 0.5;
  return BinaryMask(hm.width(), hm.height(), std::move(bits));
}

ConfusionFractions confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction and ground truth differ in dimensions");
  }
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  const auto& p = pred.bits();
  const auto& g = gt.bits();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++tp : ++fp;
    } else {
      g[i] ? ++fn : ++tn;
    }
  }
  const double n = static_cast<double>(p.size());
  return {tp / n, tn / n, fp / n, fn / n};
}

PrecisionRecall precision_recall(const ConfusionFractions& c) {
  PrecisionRecall pr;
  if (c.tp + c.fp > 0.0) pr.precision = c.tp / (c.tp + c.fp);
  if (c.tp + c.fn > 0.0) pr.recall = c.tp / (c.tp + c.fn);
  return pr;
}

double kl_divergence(const Heatmap& gt, const Heatmap& pred, double eps) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "KL operands differ in dimensions");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be finite and >= 0");
  }
  auto g = gt.values();
  auto p = pred.values();
  double g_raw = 0.0, p_raw = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g_raw += g[i];
    p_raw += p[i];
  }
  if (g_raw <= 0.0 || p_raw <= 0.0) {
    throw Error(ErrorCode::kAllZeroMap, "KL requires a positive value in each map");
  }
  const double extra = eps * static_cast<double>(g.size());
  const double g_sum = g_raw + extra;
  const double p_sum = p_raw + extra;
  double kl = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gi = (g[i] + eps) / g_sum;
    const double pi = (p[i] + eps) / p_sum;
    if (gi > 0.0) kl += gi * std::log(gi / pi);
  }
  return kl;
}

}  // namespace pat
