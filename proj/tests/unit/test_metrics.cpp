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

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "pat/error.hpp"
#include "pat/metrics.hpp"

namespace pat {
namespace {

std::vector<bool> random_bits(std::size_t n, std::mt19937& rng) {
  std::bernoulli_distribution d(0.5);
  std::vector<bool> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = d(rng);
  return bits;
}

TEST(BinarizeTest, HalfRoundsUp) {
  const BinaryMask m = binarize(Heatmap(4, 1, {0.0, 0.49, 0.5, 1.0}));
  EXPECT_EQ(m.bits(), (std::vector<bool>{false, false, true, true}));
  EXPECT_EQ(m.count(), 2u);
}

TEST(ConfusionTest, TwoByTwoExample) {
  const BinaryMask pred(2, 2, {true, true, false, false});
  const BinaryMask gt(2, 2, {true, false, true, false});
  const ConfusionFractions c = confusion(pred, gt);
  EXPECT_DOUBLE_EQ(c.tp, 0.25);
  EXPECT_DOUBLE_EQ(c.fp, 0.25);
  EXPECT_DOUBLE_EQ(c.fn, 0.25);
  EXPECT_DOUBLE_EQ(c.tn, 0.25);
  const PrecisionRecall pr = precision_recall(c);
  EXPECT_DOUBLE_EQ(pr.precision, 0.5);
  EXPECT_DOUBLE_EQ(pr.recall, 0.5);
}

TEST(ConfusionTest, IdenticalMasks) {
  const BinaryMask m(3, 1, {true, false, true});
  const auto pr = precision_recall(confusion(m, m));
  EXPECT_DOUBLE_EQ(pr.precision, 1.0);
  EXPECT_DOUBLE_EQ(pr.recall, 1.0);
}

TEST(ConfusionTest, DimensionMismatch) {
  try {
    confusion(BinaryMask(2, 2, std::vector<bool>(4)), BinaryMask(4, 1, std::vector<bool>(4)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(ConfusionTest, MatchesOracleOnRandomMasks) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_bits(32 * 32, rng);
    const auto g = random_bits(32 * 32, rng);
    const auto got = confusion(BinaryMask(32, 32, p), BinaryMask(32, 32, g));
    const auto want = testing::oracle::confusion(p, g);
    EXPECT_EQ(got.tp, want.tp);
    EXPECT_EQ(got.tn, want.tn);
    EXPECT_EQ(got.fp, want.fp);
    EXPECT_EQ(got.fn, want.fn);
    EXPECT_DOUBLE_EQ(got.tp + got.tn + got.fp + got.fn, 1.0);
  }
}

TEST(PrecisionRecallTest, PublishedRows) {
  const auto scanner = precision_recall({0.0631, 0.0, 0.1028, 0.0220});
  EXPECT_NEAR(scanner.precision, 0.38, 0.005);
  EXPECT_NEAR(scanner.recall, 0.74, 0.005);
  const auto low_level = precision_recall({0.0586, 0.0, 0.1300, 0.0265});
  EXPECT_NEAR(low_level.precision, 0.31, 0.005);
  EXPECT_NEAR(low_level.recall, 0.69, 0.005);
}

TEST(PrecisionRecallTest, ZeroDenominators) {
  const auto pr = precision_recall({0.0, 1.0, 0.0, 0.0});
  EXPECT_EQ(pr.precision, 0.0);
  EXPECT_EQ(pr.recall, 0.0);
}

TEST(KlTest, SelfDivergenceIsZero) {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const Heatmap h = testing::random_heatmap(16, 16, seed);
    EXPECT_LE(std::abs(kl_divergence(h, h)), 1e-9);
  }
}

TEST(KlTest, NonNegativeAndMatchesOracle) {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    const Heatmap a = testing::random_heatmap(12, 10, 2 * seed);
    const Heatmap b = testing::random_heatmap(12, 10, 2 * seed + 1);
    const double got = kl_divergence(a, b);
    EXPECT_GE(got, 0.0);
    const double want = testing::oracle::kl({a.values().begin(), a.values().end()},
                                            {b.values().begin(), b.values().end()}, 1e-7);
    EXPECT_NEAR(got, want, 1e-9);
  }
}

TEST(KlTest, TwoPointCase) {
  EXPECT_NEAR(kl_divergence(Heatmap(2, 1, {1.0, 0.0}), Heatmap(2, 1, {0.5, 0.5})), std::log(2.0),
              1e-3);
}

TEST(KlTest, Errors) {
  try {
    kl_divergence(Heatmap::zeros(2, 2), Heatmap::filled(2, 2, 0.5));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllZeroMap);
  }
  EXPECT_THROW(kl_divergence(Heatmap::zeros(2, 2), Heatmap::zeros(4, 1)), Error);
  EXPECT_THROW(kl_divergence(Heatmap(1, 1, {std::nan("")}), Heatmap(1, 1, {1.0})), Error);
}

}  // namespace
}  // namespace pat
