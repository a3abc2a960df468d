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
#include "pat/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <regex>
#include <tuple>

#include "pat/error.hpp"
#include "pat/hash.hpp"

namespace pat {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kIndexSchemaVersion = 1;

bool is_sha256_hex(const std::string& ref) {
  return ref.size() == 64 &&
         std::all_of(ref.begin(), ref.end(),
                     [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

bool is_report_id(const std::string& id) {
  static const std::regex kPattern("[0-9]{6,}-[0-9a-f]{16}");
  return std::regex_match(id, kPattern);
}

std::string io_message(const std::string& what, const fs::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

json load_index(const fs::path& root) {
  const fs::path path = root / "index.json";
  if (!fs::exists(path)) {
    return {{"schema_version", kIndexSchemaVersion}, {"next_seq", 1}, {"reports", json::array()}};
  }
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreIo, "corrupt index " + path.string() + ": " + e.what());
  }
}

json image_meta(const RasterImage& image, const std::vector<std::string>& warnings) {
  return {{"source_format", to_string(image.source_format())},
          {"source_bytes", image.source_bytes_len()},
          {"warnings", warnings}};
}

RasterImage thumbnail(const RasterImage& image) {
  const int limit = FileReportStore::kThumbnailSize;
  const double scale = std::min({1.0, static_cast<double>(limit) / image.width(),
                                 static_cast<double>(limit) / image.height()});
  const int w = std::max(1, static_cast<int>(std::lround(image.width() * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(image.height() * scale)));
  return resize_bilinear(image, w, h);
}

}  // namespace

// --- file helpers -------------------------------------------------------------

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  const fs::path tmp = path.string() + ".tmp-" + random_hex(6);
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::kStoreIo, io_message("cannot create", tmp));
  std::size_t written = 0;
  while (written < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string message = io_message("cannot write", tmp);
      ::close(fd);
      ::unlink(tmp.c_str());
      throw Error(ErrorCode::kStoreIo, message);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    const std::string message = io_message("cannot flush", tmp);
    ::unlink(tmp.c_str());
    throw Error(ErrorCode::kStoreIo, message);
  }
  if (::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string message = io_message("cannot rename onto", path);
    ::unlink(tmp.c_str());
    throw Error(ErrorCode::kStoreIo, message);
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, "no such file " + path.string());
    throw Error(ErrorCode::kStoreIo, io_message("cannot open", path));
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kStoreIo, io_message("cannot read", path));
  return bytes;
}

std::string read_text_file(const fs::path& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

// --- artifacts ------------------------------------------------------------------

DirectoryArtifacts::DirectoryArtifacts(fs::path dir) : dir_(std::move(dir)) {}

std::string DirectoryArtifacts::put_artifact(std::span<const std::uint8_t> png) {
  const std::string ref = content_hash(png);
  const fs::path path = dir_ / (ref + ".png");
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kStoreIo, "cannot create " + dir_.string() + ": " + ec.message());
  if (!fs::exists(path)) write_file_atomic(path, png);
  return ref;
}

std::vector<std::uint8_t> DirectoryArtifacts::get_artifact(const std::string& ref) const {
  if (!is_sha256_hex(ref)) throw Error(ErrorCode::kNotFound, "malformed artifact ref " + ref);
  return read_file(dir_ / (ref + ".png"));
}

bool DirectoryArtifacts::contains(const std::string& ref) const {
  return is_sha256_hex(ref) && fs::exists(dir_ / (ref + ".png"));
}

std::vector<std::uint8_t> ChainedArtifacts::get_artifact(const std::string& ref) const {
  for (const auto* source : sources_) {
    try {
      return source->get_artifact(ref);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFound) throw;
    }
  }
  throw Error(ErrorCode::kNotFound, "artifact " + ref + " not found");
}

// --- store ----------------------------------------------------------------------

class FileReportStore::WriteLock {
 public:
  explicit WriteLock(const FileReportStore& store) : guard_(store.write_mutex_), fd_(store.lock_fd_) {
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) throw Error(ErrorCode::kStoreIo, "cannot lock store");
    }
  }
  ~WriteLock() { ::flock(fd_, LOCK_UN); }
  WriteLock(const WriteLock&) = delete;
  WriteLock& operator=(const WriteLock&) = delete;

 private:
  std::lock_guard<std::mutex> guard_;
  int fd_;
};

FileReportStore::FileReportStore(fs::path root)
    : root_(std::move(root)), artifacts_(root_ / "artifacts") {
  std::error_code ec;
  for (const char* sub : {"images", "staging", "artifacts", "reports"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) throw Error(ErrorCode::kStoreIo, "cannot create store at " + root_.string() + ": " + ec.message());
  }
  const fs::path lock = root_ / ".lock";
  lock_fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) throw Error(ErrorCode::kStoreIo, io_message("cannot open", lock));
}

FileReportStore::~FileReportStore() {
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

std::string FileReportStore::stage_image(const RasterImage& image,
                                         const std::vector<std::string>& warnings) {
  const auto png = encode_png(image);
  const std::string ref = content_hash(png);
  WriteLock lock(*this);
  if (fs::exists(root_ / "images" / (ref + ".png")) ||
      fs::exists(root_ / "staging" / (ref + ".png"))) {
    return ref;
  }
  const fs::path base = root_ / "staging" / ref;
  write_file_atomic(base.string() + ".meta.json", image_meta(image, warnings).dump(2) + "\n");
  write_file_atomic(base.string() + ".png", png);
  return ref;
}

bool FileReportStore::has_image(const std::string& image_ref) const {
  return is_sha256_hex(image_ref) &&
         (fs::exists(root_ / "images" / (image_ref + ".png")) ||
          fs::exists(root_ / "staging" / (image_ref + ".png")));
}

StagedImage FileReportStore::load_image(const std::string& image_ref) const {
  if (!is_sha256_hex(image_ref)) throw Error(ErrorCode::kNotFound, "malformed image ref " + image_ref);
  for (const char* sub : {"images", "staging"}) {
    const fs::path base = root_ / sub / image_ref;
    std::vector<std::uint8_t> png;
    json meta;
    try {
      png = read_file(base.string() + ".png");
      meta = json::parse(read_text_file(base.string() + ".meta.json"));
    } catch (const Error& e) {
      // A promotion may have moved the files between the two reads.
      if (e.code() == ErrorCode::kNotFound) continue;
      throw;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kStoreIo, "corrupt image metadata for " + image_ref);
    }
    const RasterImage decoded = pat::load_image(png);
    const ImageFormat format =
        meta.value("source_format", "png") == "jpeg" ? ImageFormat::kJpeg : ImageFormat::kPng;
    std::vector<std::uint8_t> pixels(decoded.pixels().begin(), decoded.pixels().end());
    return {RasterImage(decoded.width(), decoded.height(), std::move(pixels), format,
                        meta.value("source_bytes", std::size_t{0})),
            meta.value("warnings", std::vector<std::string>{})};
  }
  throw Error(ErrorCode::kNotFound, "image " + image_ref + " not found");
}

fs::path FileReportStore::report_path(const std::string& report_id) const {
  if (!is_report_id(report_id)) throw Error(ErrorCode::kNotFound, "report " + report_id + " not found");
  return root_ / "reports" / (report_id + ".json");
}

void FileReportStore::write_report_locked(const Report& report) {
  write_file_atomic(report_path(report.report_id), serialize_report(report, artifacts_));
}

std::string FileReportStore::save_report(Report report) {
  if (!is_sha256_hex(report.image_ref)) {
    throw Error(ErrorCode::kNotFound, "image " + report.image_ref + " not found");
  }
  WriteLock lock(*this);
  const fs::path archived = root_ / "images" / report.image_ref;
  const fs::path staged = root_ / "staging" / report.image_ref;
  if (!fs::exists(archived.string() + ".png")) {
    if (!fs::exists(staged.string() + ".png")) {
      throw Error(ErrorCode::kNotFound, "image " + report.image_ref + " not found");
    }
    std::error_code ec;
    fs::rename(staged.string() + ".meta.json", archived.string() + ".meta.json", ec);
    if (!ec) fs::rename(staged.string() + ".png", archived.string() + ".png", ec);
    if (ec) throw Error(ErrorCode::kStoreIo, "cannot archive image: " + ec.message());
  }

  json index = load_index(root_);
  const auto seq = index.at("next_seq").get<std::uint64_t>();
  report.report_id.clear();
  const std::string digest = content_hash(serialize_report(report, artifacts_)).substr(0, 16);
  char id[64];
  std::snprintf(id, sizeof(id), "%06llu-%s", static_cast<unsigned long long>(seq), digest.c_str());
  report.report_id = id;

  const StagedImage chart = load_image(report.image_ref);
  const std::string thumb = artifacts_.put_artifact(encode_png(thumbnail(chart.image)));
  write_report_locked(report);

  index["next_seq"] = seq + 1;
  index["reports"].push_back({{"report_id", report.report_id},
                              {"user_id", report.user_id},
                              {"created_at", format_timestamp(report.created_at)},
                              {"seq", seq},
                              {"thumbnail_ref", thumb}});
  write_file_atomic(root_ / "index.json", index.dump(2) + "\n");
  return report.report_id;
}

std::string FileReportStore::load_report_document(const std::string& report_id) const {
  return read_text_file(report_path(report_id));
}

Report FileReportStore::load_report(const std::string& report_id) const {
  const std::string text = load_report_document(report_id);
  try {
    return report_from_json(json::parse(text), artifacts_);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreIo, "corrupt report " + report_id + ": " + e.what());
  }
}

std::vector<ArchiveEntry> FileReportStore::list_archive(const std::string& user_id) const {
  const json index = load_index(root_);
  std::vector<ArchiveEntry> out;
  try {
    for (const auto& e : index.at("reports")) {
      if (e.at("user_id").get<std::string>() != user_id) continue;
      out.push_back({e.at("report_id").get<std::string>(),
                     parse_timestamp(e.at("created_at").get<std::string>()),
                     e.at("thumbnail_ref").get<std::string>(), e.at("seq").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreIo, std::string("corrupt index: ") + e.what());
  }
  std::sort(out.begin(), out.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) {
    return std::tie(a.created_at, a.seq) < std::tie(b.created_at, b.seq);
  });
  return out;
}

Report FileReportStore::add_note(const std::string& report_id, const std::string& section,
                                 const std::string& text, Timestamp now) {
  WriteLock lock(*this);
  Report report = load_report(report_id);
  if (report.find_section(section) == nullptr) {
    throw Error(ErrorCode::kUnknownSection, "report has no section " + section);
  }
  report.notes.push_back(
      {"note-" + std::to_string(report.notes.size() + 1), section, text, now});
  write_report_locked(report);
  return report;
}

}  // namespace pat
