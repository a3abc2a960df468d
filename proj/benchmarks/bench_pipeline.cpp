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


#include "pat/engine.hpp"

namespace {

// Flat background with a few coloured bars, roughly what uploads look like.
pat::RasterImage bar_chart(int w, int h) {
  pat::RasterImage img = pat::RasterImage::filled(w, h, {255, 255, 255});
  const pat::Rgb palette[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40}};
  for (int i = 0; i < 4; ++i) {
    const int left = w / 10 + i * w / 5;
    const int top = h / 5 + (i * 37) % (h / 2);
    for (int y = top; y < h * 9 / 10; ++y) {
      for (int x = left; x < left + w / 8; ++x) img.set(x, y, palette[i]);
    }
  }
  return img;
}

void BM_AnalyzeBuiltins(benchmark::State& state) {
  const pat::AnalysisEngine engine({});
  const pat::StagedImage chart{bar_chart(800, 600), {}};
  for (auto _ : state) benchmark::DoNotOptimize(engine.analyze(chart, "bench", pat::now_utc()));
}
BENCHMARK(BM_AnalyzeBuiltins)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AnalyzeSequential(benchmark::State& state) {
  pat::EngineConfig cfg;
  cfg.pipeline.parallel = false;
  const pat::AnalysisEngine engine(cfg);
  const pat::StagedImage chart{bar_chart(800, 600), {}};
  for (auto _ : state) benchmark::DoNotOptimize(engine.analyze(chart, "bench", pat::now_utc()));
}
BENCHMARK(BM_AnalyzeSequential)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
