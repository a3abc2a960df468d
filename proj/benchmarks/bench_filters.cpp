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
#include <benchmark/benchmark.h>

#include <random>

#include "pat/color.hpp"
#include "pat/metrics.hpp"
#include "pat/saliency.hpp"
#include "pat/text.hpp"

namespace {

pat::RasterImage noise_image(int w, int h) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(d(rng));
  return pat::RasterImage(w, h, std::move(px));
}

void BM_VisualEntropy(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const pat::GrayImage gray = pat::to_grayscale(noise_image(side, side));
  for (auto _ : state) benchmark::DoNotOptimize(pat::visual_entropy(gray));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_VisualEntropy)->Arg(256)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SpectralResidual(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const pat::RasterImage img = noise_image(side, side);
  for (auto _ : state) benchmark::DoNotOptimize(pat::spectral_residual_saliency(img));
}
BENCHMARK(BM_SpectralResidual)->Arg(256)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SimulateCvd(benchmark::State& state) {
  const pat::RasterImage img = noise_image(800, 600);
  for (auto _ : state) benchmark::DoNotOptimize(pat::simulate_cvd(img, pat::CvdType::kTritanopia));
}
BENCHMARK(BM_SimulateCvd)->Unit(benchmark::kMillisecond);

void BM_TextRegions(benchmark::State& state) {
  const pat::GrayImage gray = pat::to_grayscale(noise_image(800, 600));
  for (auto _ : state) benchmark::DoNotOptimize(pat::detect_text_regions(gray));
}
BENCHMARK(BM_TextRegions)->Unit(benchmark::kMillisecond);

void BM_KlDivergence(benchmark::State& state) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> a(1000 * 1000), b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = d(rng);
    b[i] = d(rng);
  }
  const pat::Heatmap ha(1000, 1000, a), hb(1000, 1000, b);
  for (auto _ : state) benchmark::DoNotOptimize(pat::kl_divergence(ha, hb));
}
BENCHMARK(BM_KlDivergence)->Unit(benchmark::kMillisecond);

}  // namespace
