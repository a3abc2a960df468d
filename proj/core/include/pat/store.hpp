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
#ifndef PAT_STORE_HPP_
#define PAT_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "pat/image.hpp"
#include "pat/report.hpp"
#include "pat/timestamp.hpp"

namespace pat {

// PNG blobs addressed by the SHA-256 of their bytes, one file per blob.
class DirectoryArtifacts : public ArtifactSink, public ArtifactSource {
 public:
  explicit DirectoryArtifacts(std::filesystem::path dir);

  std::string put_artifact(std::span<const std::uint8_t> png) override;
  std::vector<std::uint8_t> get_artifact(const std::string& ref) const override;
  bool contains(const std::string& ref) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

// Tries each source in order; throws kNotFound when none has the ref.
class ChainedArtifacts : public ArtifactSource {
 public:
  void add(const ArtifactSource* source) { sources_.push_back(source); }
  std::vector<std::uint8_t> get_artifact(const std::string& ref) const override;

 private:
  std::vector<const ArtifactSource*> sources_;
};

struct ArchiveEntry {
  std::string report_id;
  Timestamp created_at;
  std::string thumbnail_ref;
  std::uint64_t seq = 0;
  friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

// An uploaded chart after validation and resizing, with the facts about the
// original upload that the specs table reports.
struct StagedImage {
  RasterImage image;
  std::vector<std::string> warnings;
};

class ReportStore {
 public:
  virtual ~ReportStore() = default;

  // Uploads are staged; a staged image is promoted into the archive by the
  // first save_report that references it. Returns the image_ref.
  virtual std::string stage_image(const RasterImage& image,
                                  const std::vector<std::string>& warnings) = 0;
  // Staged or archived image. Throws kNotFound.
  virtual StagedImage load_image(const std::string& image_ref) const = 0;
  virtual bool has_image(const std::string& image_ref) const = 0;

  // Assigns report_id and persists atomically. The image_ref must resolve.
  virtual std::string save_report(Report report) = 0;
  virtual Report load_report(const std::string& report_id) const = 0;
  // The stored document bytes, unchanged.
  virtual std::string load_report_document(const std::string& report_id) const = 0;
  // Ascending by created_at, ties by sequence number.
  virtual std::vector<ArchiveEntry> list_archive(const std::string& user_id) const = 0;
  // Throws kNotFound or kUnknownSection.
  virtual Report add_note(const std::string& report_id, const std::string& section,
                          const std::string& text, Timestamp now) = 0;

  virtual ArtifactSink& artifact_sink() = 0;
  virtual const ArtifactSource& artifact_source() const = 0;
};

// Layout under root:
//   images/<sha>.png + <sha>.meta.json   archived charts
//   staging/<sha>.png + <sha>.meta.json  uploads not yet referenced by a report
//   artifacts/<sha>.png                  heatmaps, variants, thumbnails
//   reports/<id>.json                    report documents
//   index.json                           {schema_version, next_seq, reports}
// Writers are serialized by a mutex and an flock on root/.lock; every file is
// written to a temporary name and renamed into place.
class FileReportStore : public ReportStore {
 public:
  static constexpr int kThumbnailSize = 160;

  // Creates the layout if absent. Throws kStoreIo.
  explicit FileReportStore(std::filesystem::path root);
  ~FileReportStore() override;

  std::string stage_image(const RasterImage& image,
                          const std::vector<std::string>& warnings) override;
  StagedImage load_image(const std::string& image_ref) const override;
  bool has_image(const std::string& image_ref) const override;

  std::string save_report(Report report) override;
  Report load_report(const std::string& report_id) const override;
  std::string load_report_document(const std::string& report_id) const override;
  std::vector<ArchiveEntry> list_archive(const std::string& user_id) const override;
  Report add_note(const std::string& report_id, const std::string& section,
                  const std::string& text, Timestamp now) override;

  ArtifactSink& artifact_sink() override { return artifacts_; }
  const ArtifactSource& artifact_source() const override { return artifacts_; }

  const std::filesystem::path& root() const { return root_; }

 private:
  class WriteLock;

  std::filesystem::path report_path(const std::string& report_id) const;
  void write_report_locked(const Report& report);

  std::filesystem::path root_;
  DirectoryArtifacts artifacts_;
  mutable std::mutex write_mutex_;
  int lock_fd_ = -1;
};

// Writes bytes to a sibling temporary file and renames it over path.
// Throws kStoreIo.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);
// Throws kNotFound when the file does not exist and kStoreIo on read errors.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace pat

#endif  // PAT_STORE_HPP_
