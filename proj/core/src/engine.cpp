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
#include "pat/engine.hpp"

#include "pat/error.hpp"

namespace pat {

AnalysisEngine::AnalysisEngine(EngineConfig config) : config_(std::move(config)) {
  try {
    config_.resize.validate();
    config_.builtins.entropy.validate();
    config_.builtins.text.min_height = config_.pipeline.text_min_height;
    config_.builtins.text.validate();
    register_builtins(registry_, config_.builtins);
    for (const auto& id : config_.disabled_builtins) registry_.set_enabled(id, false);
    for (const auto& plugin : config_.plugins) registry_.register_filter(plugin);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
}

StagedImage AnalysisEngine::ingest(std::span<const std::uint8_t> bytes) const {
  auto resized = validate_and_resize(load_image(bytes), config_.resize);
  return {std::move(resized.image), std::move(resized.warnings)};
}

Report AnalysisEngine::analyze(const StagedImage& chart, const std::string& user_id,
                               Timestamp now) const {
  auto results = run_pipeline(chart.image, registry_, config_.pipeline);
  return build_report(chart.image, chart_specs(chart.image), std::move(results), user_id, now,
                      chart.warnings);
}

}  // namespace pat
