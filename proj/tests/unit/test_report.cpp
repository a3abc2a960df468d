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
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "../support/fixtures.hpp"
#include "pat/builtins.hpp"
#include "pat/error.hpp"
#include "pat/hash.hpp"
#include "pat/report.hpp"

namespace pat {
namespace {

using json = nlohmann::json;

const SectionDelta& row(const ComparisonDiff& d, const std::string& section) {
  for (const auto& r : d.per_section) {
    if (r.section == section) return r;
  }
  throw std::runtime_error("missing row " + section);
}

SectionResult& section_of(Report& r, const std::string& key) {
  for (auto& s : r.sections) {
    if (s.key() == key) return s;
  }
  throw std::runtime_error("missing section " + key);
}

TEST(ContentHashTest, StandardVectors) {
  EXPECT_EQ(content_hash(std::string_view()),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(content_hash(std::string_view("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::vector<std::uint8_t> bytes = {1, 2, 3};
  const auto h = content_hash(bytes);
  EXPECT_EQ(h, content_hash(bytes));
  bytes[1] ^= 0x01;
  EXPECT_NE(h, content_hash(bytes));
}

TEST(Base64Test, RoundTrip) {
  EXPECT_EQ(base64_encode(std::vector<std::uint8_t>{'f', 'o', 'o', 'b'}), "Zm9vYg==");
  EXPECT_EQ(base64_decode("Zm9v\nYg=="), (std::vector<std::uint8_t>{'f', 'o', 'o', 'b'}));
  EXPECT_THROW(base64_decode("@@@"), Error);
}

TEST(BuildReportTest, CanonicalOrderAndPlaceholders) {
  const Report r = testing::fixture_report();
  std::vector<std::string> keys;
  for (const auto& s : r.sections) keys.push_back(s.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"specs", "text", "entropy", "gaze",
                                            "low_level_salience", "objects", "cvd",
                                            "palette-check"}));
  EXPECT_EQ(r.find_section("gaze")->status, SectionStatus::kUnavailable);
  EXPECT_EQ(r.image_ref.size(), 64u);
  EXPECT_TRUE(r.report_id.empty());
}

TEST(BuildReportTest, MissingCvdGetsPlaceholder) {
  const auto chart = testing::bar_chart(120, 90);
  auto results = run_pipeline(chart, default_registry());
  std::erase_if(results, [](const SectionResult& s) { return s.section == Section::kCvd; });
  const Report r = build_report(chart, chart_specs(chart), results, "u", now_utc());
  ASSERT_EQ(r.sections.size(), 7u);
  EXPECT_EQ(r.sections[6].key(), "cvd");
  EXPECT_EQ(r.sections[6].status, SectionStatus::kUnavailable);
  EXPECT_TRUE(r.notes.empty());
}

TEST(BuildReportTest, HeatmapsSnapToEightBits) {
  const auto chart = RasterImage::filled(2, 1, {});
  std::vector<SectionResult> rs = {
      {"e", Section::kEntropy, SectionStatus::kOk, 0, Heatmap(2, 1, {0.1234, 0.5}), ""}};
  const Report r = build_report(chart, chart_specs(chart), rs, "u", now_utc());
  const auto& h = std::get<Heatmap>(r.find_section("entropy")->payload);
  EXPECT_DOUBLE_EQ(h.values()[0], 31 / 255.0);
  EXPECT_DOUBLE_EQ(h.values()[1], 128 / 255.0);
}

TEST(BuildReportTest, SameInputsSerializeIdentically) {
  MemoryArtifacts a, b;
  EXPECT_EQ(serialize_report(testing::fixture_report(), a),
            serialize_report(testing::fixture_report(), b));
  const auto chart = testing::bar_chart(160, 120);
  const auto t = parse_timestamp("2026-03-04T05:06:07.000Z");
  auto build = [&] {
    auto results = run_pipeline(chart, default_registry());
    for (auto& s : results) s.elapsed_ms = 0;
    return build_report(chart, chart_specs(chart), results, "bob", t);
  };
  EXPECT_EQ(serialize_report(build(), a), serialize_report(build(), b));
}

TEST(ReportJsonTest, RoundTrip) {
  MemoryArtifacts artifacts;
  const Report r = testing::fixture_report();
  const json doc = report_to_json(r, artifacts);
  EXPECT_TRUE(validate_report_json(doc).empty());
  EXPECT_EQ(report_from_json(doc, artifacts), r);
  EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
  EXPECT_TRUE(doc["sections"][3]["payload"].is_null());
  EXPECT_EQ(doc["sections"][2]["payload"]["kind"], "heatmap");
}

TEST(ReportJsonTest, GoldenDocument) {
  MemoryArtifacts artifacts;
  const std::string text = serialize_report(testing::fixture_report(), artifacts);
  const auto path = testing::source_dir() / "tests/golden/fixture_report.json";
  if (std::getenv("PAT_UPDATE_GOLDEN") != nullptr) {
    testing::write_text(path, text);
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << path;
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(text, golden.str());
}

TEST(ReportJsonTest, ValidationCatchesBrokenDocuments) {
  MemoryArtifacts artifacts;
  const json good = report_to_json(testing::fixture_report(), artifacts);
  auto broken = [&](auto mutate) {
    json doc = good;
    mutate(doc);
    return !validate_report_json(doc).empty();
  };
  EXPECT_TRUE(broken([](json& d) { d.erase("sections"); }));
  EXPECT_TRUE(broken([](json& d) { d["schema_version"] = 2; }));
  EXPECT_TRUE(broken([](json& d) { d["image_ref"] = "abc"; }));
  EXPECT_TRUE(broken([](json& d) { d["created_at"] = "yesterday"; }));
  EXPECT_TRUE(broken([](json& d) { std::swap(d["sections"][0], d["sections"][1]); }));
  EXPECT_TRUE(broken([](json& d) { d["sections"].erase(6); }));
  EXPECT_TRUE(broken([](json& d) { d["sections"][3]["payload"] = json::object(); }));
  EXPECT_TRUE(broken([](json& d) { d["sections"][2]["payload"] = nullptr; }));
  EXPECT_TRUE(broken([](json& d) { d["sections"][2]["status"] = "fine"; }));
  EXPECT_TRUE(broken([](json& d) { d["sections"][2]["payload"]["kind"] = "poem"; }));
  EXPECT_TRUE(broken([](json& d) { d["notes"][0]["section"] = "nowhere"; }));
  try {
    json doc = good;
    doc["sections"] = json::array();
    report_from_json(doc, artifacts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(ReportJsonTest, MissingArtifactIsNotFound) {
  MemoryArtifacts writer, empty;
  const json doc = report_to_json(testing::fixture_report(), writer);
  try {
    report_from_json(doc, empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(CompareTest, SelfComparisonIsZero) {
  const Report r = testing::fixture_report();
  const ComparisonDiff d = compare_reports(r, r);
  ASSERT_EQ(d.per_section.size(), r.sections.size());
  for (const auto& s : d.per_section) {
    EXPECT_EQ(s.status_a, s.status_b);
    for (const auto& [name, value] : s.scalar_deltas) {
      EXPECT_LE(std::abs(value), 1e-9) << s.section << "." << name;
    }
  }
  EXPECT_TRUE(row(d, "entropy").scalar_deltas.count("kl"));
  EXPECT_TRUE(row(d, "entropy").scalar_deltas.count("mean_entropy_delta"));
  EXPECT_TRUE(row(d, "objects").scalar_deltas.empty());
}

TEST(CompareTest, TextRegionDelta) {
  const Report a = testing::fixture_report();
  Report b = a;
  auto& text = std::get<TextFindings>(section_of(b, "text").payload);
  text.regions.push_back({{0, 0, 2, 2}, 14.0, 0.5, std::nullopt});
  text.regions.push_back({{3, 3, 2, 2}, 4.0, 0.5, std::nullopt});
  text.warnings = legibility_flags(text.regions, 10.0);
  const auto d = row(compare_reports(a, b), "text");
  EXPECT_DOUBLE_EQ(d.scalar_deltas.at("text_region_count_delta"), 2.0);
  EXPECT_DOUBLE_EQ(d.scalar_deltas.at("legibility_warning_count_delta"), 1.0);
}

TEST(CompareTest, UnavailableSideHasNoDelta) {
  const Report a = testing::fixture_report();
  Report b = a;
  section_of(b, "gaze") = {"gaze-stub", Section::kGaze, SectionStatus::kOk, 5,
                           Heatmap::filled(8, 6, 0.5), ""};
  const auto d = row(compare_reports(a, b), "gaze");
  EXPECT_EQ(d.status_a, SectionStatus::kUnavailable);
  EXPECT_EQ(d.status_b, SectionStatus::kOk);
  EXPECT_TRUE(d.scalar_deltas.empty());
}

TEST(CompareTest, EntropyAndColorDeltas) {
  const Report a = testing::fixture_report();
  Report b = a;
  section_of(b, "entropy").payload = Heatmap::filled(8, 6, 1.0);
  auto& specs = std::get<SpecsTable>(section_of(b, "specs").payload);
  specs.dominant_colors.push_back({{0, 255, 0}, 0.0});
  b.image_specs = specs;
  const auto diff = compare_reports(a, b);
  const double mean_a = std::get<Heatmap>(a.find_section("entropy")->payload).mean();
  EXPECT_NEAR(row(diff, "entropy").scalar_deltas.at("mean_entropy_delta"), 1.0 - mean_a, 1e-12);
  EXPECT_GT(row(diff, "entropy").scalar_deltas.at("kl"), 0.0);
  EXPECT_DOUBLE_EQ(row(diff, "specs").scalar_deltas.at("dominant_color_symdiff"), 1.0);
}

TEST(CompareTest, UnionOfCustomSections) {
  const Report a = testing::fixture_report();
  Report b = a;
  b.sections.pop_back();
  const auto d = compare_reports(a, b);
  const auto& custom = row(d, "palette-check");
  EXPECT_EQ(custom.status_a, SectionStatus::kOk);
  EXPECT_EQ(custom.status_b, SectionStatus::kUnavailable);
  const json j = diff_to_json(d);
  EXPECT_EQ(j["per_section"].size(), d.per_section.size());
}

}  // namespace
}  // namespace pat
