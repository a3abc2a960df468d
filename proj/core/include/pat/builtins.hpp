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
#ifndef PAT_BUILTINS_HPP_
#define PAT_BUILTINS_HPP_

#include "pat/plugin.hpp"
#include "pat/saliency.hpp"
#include "pat/text.hpp"

namespace pat {

// Ids of the filters that ship with the engine.
namespace builtin_ids {
inline constexpr const char* kChartSpecs = "chart-specs";
inline constexpr const char* kTextRegions = "text-regions";
inline constexpr const char* kVisualEntropy = "visual-entropy";
inline constexpr const char* kSpectralResidual = "spectral-residual";
inline constexpr const char* kCvdSimulation = "cvd-simulation";
inline constexpr const char* kColorSuggestions = "color-suggestions";
}  // namespace builtin_ids

struct BuiltinOptions {
  EntropyConfig entropy;
  SpectralResidualConfig salience;
  TextDetectorConfig text;
  // Adjustment previews form an extra custom section; off by default so the
  // built-in report has exactly the canonical sections.
  bool color_suggestions = false;
};

SpecsTable chart_specs(const RasterImage& img);

void register_builtins(FilterRegistry& registry, const BuiltinOptions& options = {});
FilterRegistry default_registry(const BuiltinOptions& options = {});

}  // namespace pat

#endif  // PAT_BUILTINS_HPP_
