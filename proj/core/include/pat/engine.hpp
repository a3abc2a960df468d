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
#ifndef PAT_ENGINE_HPP_
#define PAT_ENGINE_HPP_

#include <span>
#include <string>
#include <vector>

#include "pat/builtins.hpp"
#include "pat/image.hpp"
#include "pat/plugin.hpp"
#include "pat/report.hpp"
#include "pat/store.hpp"

namespace pat {

struct EngineConfig {
  ResizePolicy resize;
  PipelineConfig pipeline;
  BuiltinOptions builtins;
  std::vector<std::string> disabled_builtins;
  std::vector<FilterDescriptor> plugins;  // external filters, registration order
};

// The analysis path shared by the CLI and the service: decode, resize,
// run the filter pipeline, build the report.
class AnalysisEngine {
 public:
  // Throws kConfigError for invalid policies, plugin descriptors or ids.
  explicit AnalysisEngine(EngineConfig config);

  // Decode and resize. Throws kUnsupportedFormat or kDecodeError.
  StagedImage ingest(std::span<const std::uint8_t> bytes) const;

  // Report with an empty report_id; the store assigns it on save.
  Report analyze(const StagedImage& chart, const std::string& user_id, Timestamp now) const;

  const FilterRegistry& registry() const { return registry_; }
  const EngineConfig& config() const { return config_; }

 private:
  EngineConfig config_;
  FilterRegistry registry_;
};

}  // namespace pat

#endif  // PAT_ENGINE_HPP_
