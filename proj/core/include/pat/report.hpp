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
#ifndef PAT_REPORT_HPP_
#define PAT_REPORT_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pat/image.hpp"
#include "pat/section.hpp"
#include "pat/timestamp.hpp"

namespace pat {

inline constexpr int kReportSchemaVersion = 1;

struct Note {
  std::string note_id;
  std::string section;  // section key
  std::string text;
  Timestamp created_at;

  friend bool operator==(const Note&, const Note&) = default;
};

// One analysed chart version.
struct Report {
  std::string report_id;  // assigned by the store on save
  std::string user_id;
  Timestamp created_at;
  std::string image_ref;  // SHA-256 of the stored chart PNG
  SpecsTable image_specs;
  std::vector<SectionResult> sections;  // canonical order, then custom
  std::vector<Note> notes;
  std::vector<std::string> warnings;

  const SectionResult* find_section(std::string_view key) const;

  friend bool operator==(const Report&, const Report&) = default;
};

// Orders results canonically, inserts unavailable placeholders for missing
// canonical sections, and snaps heatmaps to the 8-bit grid used for storage.
Report build_report(const RasterImage& img, const SpecsTable& specs,
                    std::vector<SectionResult> section_results,
                    std::string user_id, Timestamp now,
                    std::vector<std::string> warnings = {});

struct SectionDelta {
  std::string section;
  SectionStatus status_a = SectionStatus::kUnavailable;
  SectionStatus status_b = SectionStatus::kUnavailable;
  // Present only when both sides are ok. Keys:
  //   mean_entropy_delta, kl               (entropy)
  //   kl                                   (gaze, low_level_salience, heatmap customs)
  //   text_region_count_delta, legibility_warning_count_delta   (text)
  //   dominant_color_symdiff               (specs)
  //   object_count_delta                   (objects)
  std::map<std::string, double> scalar_deltas;

  friend bool operator==(const SectionDelta&, const SectionDelta&) = default;
};

struct ComparisonDiff {
  std::string report_a;
  std::string report_b;
  std::vector<SectionDelta> per_section;  // union of both reports' sections

  friend bool operator==(const ComparisonDiff&, const ComparisonDiff&) = default;
};

// Deltas are b - a; KL is kl_divergence(gt = a, pred = b).
ComparisonDiff compare_reports(const Report& a, const Report& b);

// --- serialization ----------------------------------------------------------

// Heatmaps and variant images are stored as PNG artifacts referenced by hash.
class ArtifactSink {
 public:
  virtual ~ArtifactSink() = default;
  virtual std::string put_artifact(std::span<const std::uint8_t> png) = 0;
};

class ArtifactSource {
 public:
  virtual ~ArtifactSource() = default;
  // Throws kNotFound.
  virtual std::vector<std::uint8_t> get_artifact(const std::string& ref) const = 0;
};

// In-memory artifact map, for tests and stand-alone serialization.
class MemoryArtifacts : public ArtifactSink, public ArtifactSource {
 public:
  std::string put_artifact(std::span<const std::uint8_t> png) override;
  std::vector<std::uint8_t> get_artifact(const std::string& ref) const override;
  std::size_t size() const { return blobs_.size(); }

 private:
  std::map<std::string, std::vector<std::uint8_t>> blobs_;
};

nlohmann::json report_to_json(const Report& report, ArtifactSink& sink);
// Throws kInvalidArgument when the document fails validation.
Report report_from_json(const nlohmann::json& doc, const ArtifactSource& source);

// Pretty-printed document with a trailing newline. Stable for equal reports.
std::string serialize_report(const Report& report, ArtifactSink& sink);

// Structural validation against the versioned report schema. Returns the list
// of problems; empty means valid.
std::vector<std::string> validate_report_json(const nlohmann::json& doc);

nlohmann::json diff_to_json(const ComparisonDiff& diff);
nlohmann::json specs_to_json(const SpecsTable& specs);

}  // namespace pat

#endif  // PAT_REPORT_HPP_
