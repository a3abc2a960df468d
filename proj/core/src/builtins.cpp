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
#include "pat/builtins.hpp"

#include "pat/color.hpp"

namespace pat {

SpecsTable chart_specs(const RasterImage& img) {
  const ColorStats stats = color_statistics(img);
  SpecsTable t;
  t.width = img.width();
  t.height = img.height();
  t.format = std::string(to_string(img.source_format()));
  t.file_size = img.source_bytes_len();
  t.distinct_quantized_colors = stats.distinct_quantized_colors;
  t.dominant_colors = stats.dominant_colors;
  t.mean_saturation = stats.mean_saturation;
  t.mean_value = stats.mean_value;
  return t;
}

void register_builtins(FilterRegistry& registry, const BuiltinOptions& options) {
  auto builtin = [](std::string id, std::string title, Section section) {
    FilterDescriptor d;
    d.id = std::move(id);
    d.title = std::move(title);
    d.section = section;
    d.kind = FilterKind::kBuiltin;
    return d;
  };

  registry.register_filter(
      builtin(builtin_ids::kChartSpecs, "Chart specifications", Section::kSpecs),
      [](const RasterImage& img) -> SectionPayload { return chart_specs(img); });

  registry.register_filter(
      builtin(builtin_ids::kTextRegions, "Text legibility", Section::kText),
      [cfg = options.text](const RasterImage& img) -> SectionPayload {
        TextFindings f;
        f.regions = detect_text_regions(to_grayscale(img), cfg);
        f.warnings = legibility_flags(f.regions, cfg.min_height);
        return f;
      });

  registry.register_filter(
      builtin(builtin_ids::kVisualEntropy, "Visual entropy", Section::kEntropy),
      [cfg = options.entropy](const RasterImage& img) -> SectionPayload {
        return visual_entropy(to_grayscale(img), cfg);
      });

  registry.register_filter(
      builtin(builtin_ids::kSpectralResidual, "Low-level salience",
              Section::kLowLevelSalience),
      [cfg = options.salience](const RasterImage& img) -> SectionPayload {
        return spectral_residual_saliency(img, cfg);
      });

  registry.register_filter(
      builtin(builtin_ids::kCvdSimulation, "Color vision deficiency", Section::kCvd),
      [](const RasterImage& img) -> SectionPayload {
        ImageVariantSet set;
        for (CvdType t : kAllCvdTypes) {
          set.variants.push_back({std::string(to_string(t)), simulate_cvd(img, t)});
        }
        return set;
      });

  auto suggestions = builtin(builtin_ids::kColorSuggestions, "Color suggestions",
                             Section::kCustom);
  suggestions.enabled = options.color_suggestions;
  registry.register_filter(std::move(suggestions), [](const RasterImage& img) -> SectionPayload {
    ImageVariantSet set;
    for (const Adjustment& adj : default_color_suggestions()) {
      set.variants.push_back({adj.label(), apply_adjustment(img, adj)});
    }
    return set;
  });
}

FilterRegistry default_registry(const BuiltinOptions& options) {
  FilterRegistry registry;
  register_builtins(registry, options);
  return registry;
}

}  // namespace pat
