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
// pat: command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 unreadable or invalid input,
// 3 store or configuration error.

#include <signal.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "pat/auth.hpp"
#include "pat/config.hpp"
#include "pat/engine.hpp"
#include "pat/error.hpp"
#include "pat/metrics.hpp"
#include "pat/report.hpp"
#include "pat/service.hpp"
#include "pat/store.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitStore = 3;
constexpr double kDefaultOverlayOpacity = 0.6;

int exit_code_for(pat::ErrorCode code) {
  switch (code) {
    case pat::ErrorCode::kStoreIo:
    case pat::ErrorCode::kConfigError:
      return kExitStore;
    case pat::ErrorCode::kInvalidArgument:
    case pat::ErrorCode::kUnsupportedFormat:
    case pat::ErrorCode::kDecodeError:
    case pat::ErrorCode::kDimensionMismatch:
    case pat::ErrorCode::kNonFiniteInput:
    case pat::ErrorCode::kNotFound:
    case pat::ErrorCode::kAllZeroMap:
    case pat::ErrorCode::kUnknownSection:
      return kExitInput;
    default:
      return 1;
  }
}

struct Common {
  bool porcelain = false;
};

pat::ServiceConfig load_config_or_default(const std::string& path) {
  return path.empty() ? pat::ServiceConfig{} : pat::load_config(path);
}

// --store flag, then the config file, then PAT_STORE, then ./pat-store.
fs::path effective_store(const std::string& flag, const pat::ServiceConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.store_path.empty()) return config.store_path;
  if (const char* env = std::getenv("PAT_STORE"); env != nullptr && *env != '\0') return env;
  return "pat-store";
}

std::optional<fs::path> optional_store(const std::string& flag, const pat::ServiceConfig& config) {
  if (!flag.empty()) return fs::path(flag);
  if (!config.store_path.empty()) return config.store_path;
  if (const char* env = std::getenv("PAT_STORE"); env != nullptr && *env != '\0') return fs::path(env);
  return std::nullopt;
}

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (!fs::is_regular_file(path)) throw pat::Error(pat::ErrorCode::kNotFound, "cannot read " + path);
  return pat::read_file(path);
}

void write_png(const fs::path& path, const std::vector<std::uint8_t>& png) {
  pat::write_file_atomic(path, std::span<const std::uint8_t>(png));
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// --- analyze -------------------------------------------------------------------

struct AnalyzeArgs {
  std::string chart;
  std::string out = "report.json";
  std::string overlays;
  std::string config;
  std::string store;
  std::string user = "local";
  std::string created_at;
  double opacity = kDefaultOverlayOpacity;
};

std::vector<std::string> export_overlays(const pat::Report& report, const pat::RasterImage& chart,
                                         const fs::path& dir, double opacity) {
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& s : report.sections) {
    if (s.status != pat::SectionStatus::kOk) continue;
    if (const auto* hm = std::get_if<pat::Heatmap>(&s.payload)) {
      const std::string name = s.key() + ".png";
      write_png(dir / name, pat::encode_png(pat::composite_overlay(chart, *hm, opacity)));
      written.push_back(name);
    } else if (const auto* set = std::get_if<pat::ImageVariantSet>(&s.payload)) {
      for (const auto& v : set->variants) {
        const std::string name = s.key() + "-" + v.label + ".png";
        write_png(dir / name, pat::encode_png(v.image));
        written.push_back(name);
      }
    }
  }
  return written;
}

int run_analyze(const AnalyzeArgs& args, const Common& common) {
  const auto config = load_config_or_default(args.config);
  const pat::AnalysisEngine engine(config.engine);
  const auto bytes = read_input(args.chart);
  const pat::StagedImage chart = engine.ingest(bytes);
  const pat::Timestamp now =
      args.created_at.empty() ? pat::now_utc() : pat::parse_timestamp(args.created_at);
  pat::Report report = engine.analyze(chart, args.user, now);

  const fs::path out(args.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::string document;
  if (const auto store_path = optional_store(args.store, config)) {
    pat::FileReportStore store(*store_path);
    store.stage_image(chart.image, chart.warnings);
    report.report_id = store.save_report(report);
    document = store.load_report_document(report.report_id);
  } else {
    pat::DirectoryArtifacts artifacts(out.parent_path() / "artifacts");
    document = pat::serialize_report(report, artifacts);
  }
  pat::write_file_atomic(out, document);

  std::vector<std::string> overlays;
  if (!args.overlays.empty()) {
    overlays = export_overlays(report, chart.image, args.overlays, args.opacity);
  }

  if (common.porcelain) {
    for (const auto& s : report.sections) {
      std::cout << json{{"section", s.key()}, {"status", pat::to_string(s.status)}}.dump() << "\n";
    }
    std::cout << json{{"report", out.string()},
                      {"report_id", report.report_id},
                      {"warnings", report.warnings},
                      {"overlays", overlays}}
                     .dump()
              << "\n";
  } else {
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& s : report.sections) {
      std::cout << s.key() << "\t" << pat::to_string(s.status);
      if (!s.message.empty()) std::cout << "\t" << s.message;
      std::cout << "\n";
    }
    if (!report.report_id.empty()) std::cout << "saved as " << report.report_id << "\n";
    std::cout << "wrote " << out.string() << "\n";
    for (const auto& o : overlays) std::cout << "wrote " << (fs::path(args.overlays) / o).string() << "\n";
  }
  return 0;
}

// --- metrics -------------------------------------------------------------------

int run_metrics(const std::string& pred_path, const std::string& gt_path, bool with_kl,
                const Common& common) {
  const pat::Heatmap pred = pat::decode_heatmap(read_input(pred_path));
  const pat::Heatmap gt = pat::decode_heatmap(read_input(gt_path));
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw pat::Error(pat::ErrorCode::kDimensionMismatch,
                     "prediction is " + std::to_string(pred.width()) + "x" +
                         std::to_string(pred.height()) + " but ground truth is " +
                         std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
  }
  const auto c = pat::confusion(pat::binarize(pred), pat::binarize(gt));
  const auto pr = pat::precision_recall(c);
  std::vector<std::pair<std::string, double>> rows = {
      {"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn},
      {"precision", pr.precision}, {"recall", pr.recall}};
  if (with_kl) rows.emplace_back("kl", pat::kl_divergence(gt, pred));

  json line = json::object();
  for (const auto& [k, v] : rows) line[k] = v;
  if (!common.porcelain) {
    for (const auto& [k, v] : rows) std::cout << k << "\t" << format_number(v) << "\n";
  }
  std::cout << line.dump() << "\n";
  return 0;
}

// --- compare -------------------------------------------------------------------

int run_compare(const std::string& a_path, const std::string& b_path, const std::string& store_flag,
                const Common& common) {
  const auto a_bytes = read_input(a_path);
  const auto b_bytes = read_input(b_path);
  const auto a_doc = json::parse(a_bytes.begin(), a_bytes.end());
  const auto b_doc = json::parse(b_bytes.begin(), b_bytes.end());
  pat::DirectoryArtifacts a_dir(fs::path(a_path).parent_path() / "artifacts");
  pat::DirectoryArtifacts b_dir(fs::path(b_path).parent_path() / "artifacts");
  pat::ChainedArtifacts sources;
  sources.add(&a_dir);
  sources.add(&b_dir);
  std::unique_ptr<pat::FileReportStore> store;
  if (const auto path = optional_store(store_flag, pat::ServiceConfig{})) {
    store = std::make_unique<pat::FileReportStore>(*path);
    sources.add(&store->artifact_source());
  }
  const auto diff =
      pat::compare_reports(pat::report_from_json(a_doc, sources), pat::report_from_json(b_doc, sources));
  if (common.porcelain) {
    std::cout << pat::diff_to_json(diff).dump() << "\n";
    return 0;
  }
  std::cout << "a\t" << diff.report_a << "\nb\t" << diff.report_b << "\n";
  for (const auto& d : diff.per_section) {
    std::cout << d.section << "\t" << pat::to_string(d.status_a) << "\t"
              << pat::to_string(d.status_b);
    for (const auto& [k, v] : d.scalar_deltas) std::cout << "\t" << k << "=" << format_number(v);
    std::cout << "\n";
  }
  return 0;
}

// --- archive -------------------------------------------------------------------

int run_archive_list(const std::string& store_flag, const std::string& user, const Common& common) {
  const pat::FileReportStore store(effective_store(store_flag, pat::ServiceConfig{}));
  for (const auto& e : store.list_archive(user)) {
    if (common.porcelain) {
      std::cout << json{{"report_id", e.report_id},
                        {"created_at", pat::format_timestamp(e.created_at)},
                        {"thumbnail_ref", e.thumbnail_ref}}
                       .dump()
                << "\n";
    } else {
      std::cout << e.report_id << "\t" << pat::format_timestamp(e.created_at) << "\t"
                << e.thumbnail_ref << "\n";
    }
  }
  return 0;
}

// --- serve ---------------------------------------------------------------------

int run_serve(std::optional<int> port, const std::string& config_path, const std::string& store_flag,
              const Common& common) {
  auto config = load_config_or_default(config_path);
  pat::apply_env_overrides(config);
  if (port) config.port = *port;
  const fs::path store_path = effective_store(store_flag, config);
  pat::UserDirectory users;
  if (config.users_file.empty()) {
    std::cerr << "warning: no users_file configured; every login will be rejected\n";
  } else {
    users = pat::UserDirectory::load(config.users_file);
  }

  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  pat::Service service(config, std::make_shared<pat::FileReportStore>(store_path), std::move(users));
  const int bound = service.start();
  if (common.porcelain) {
    std::cout << json{{"host", config.host}, {"port", bound}}.dump() << std::endl;
  } else {
    std::cout << "listening on http://" << config.host << ":" << bound << std::endl;
  }
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
  return 0;
}

// --- hash-password ---------------------------------------------------------------

int run_hash_password(const std::string& user, std::string password, int iterations) {
  if (password.empty()) std::getline(std::cin, password);
  const auto r = pat::make_user(user, password, iterations);
  std::cout << json{{"user_id", r.user_id}, {"salt", r.salt}, {"hash", r.hash},
                    {"iterations", r.iterations}}
                   .dump()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceptual analysis of chart images"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--porcelain", common.porcelain, "Machine-readable JSON-lines output");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a chart and write its report");
  analyze_cmd->add_option("chart", analyze.chart, "PNG or JPEG chart image")->required();
  analyze_cmd->add_option("--out", analyze.out, "Report JSON path")->capture_default_str();
  analyze_cmd->add_option("--overlays", analyze.overlays, "Directory for overlay PNGs");
  analyze_cmd->add_option("--opacity", analyze.opacity, "Heatmap overlay opacity")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  analyze_cmd->add_option("--config", analyze.config, "Configuration file");
  analyze_cmd->add_option("--store", analyze.store, "Archive the report in this store");
  analyze_cmd->add_option("--user", analyze.user, "Archive owner")->capture_default_str();
  analyze_cmd->add_option("--created-at", analyze.created_at,
                          "Fixed report timestamp (YYYY-MM-DDTHH:MM:SS.mmmZ)");

  std::string pred, gt;
  bool with_kl = false;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compare a predicted heatmap to ground truth");
  metrics_cmd->add_option("pred", pred, "Predicted heatmap PNG")->required();
  metrics_cmd->add_option("gt", gt, "Ground-truth heatmap PNG")->required();
  metrics_cmd->add_flag("--kl", with_kl, "Also report KL divergence");

  std::string report_a, report_b, store_flag, user = "local";
  auto* compare_cmd = app.add_subcommand("compare", "Diff two report documents");
  compare_cmd->add_option("a", report_a, "Baseline report JSON")->required();
  compare_cmd->add_option("b", report_b, "Candidate report JSON")->required();
  compare_cmd->add_option("--store", store_flag, "Store holding the reports' artifacts");

  auto* archive_cmd = app.add_subcommand("archive", "Inspect the report archive");
  archive_cmd->require_subcommand(1);
  auto* list_cmd = archive_cmd->add_subcommand("list", "List a user's reports chronologically");
  list_cmd->add_option("--store", store_flag, "Store directory");
  list_cmd->add_option("--user", user, "Archive owner")->capture_default_str();

  std::optional<int> port;
  std::string serve_config;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port, "Listen port; 0 picks a free port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--config", serve_config, "Configuration file");
  serve_cmd->add_option("--store", store_flag, "Store directory");

  std::string password;
  int iterations = pat::kDefaultPbkdf2Iterations;
  auto* hash_cmd = app.add_subcommand("hash-password", "Print a users-file record");
  hash_cmd->add_option("--user", user, "User id")->required();
  hash_cmd->add_option("--password", password, "Password; read from stdin when omitted");
  hash_cmd->add_option("--iterations", iterations, "PBKDF2 iterations")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) return run_analyze(analyze, common);
    if (*metrics_cmd) return run_metrics(pred, gt, with_kl, common);
    if (*compare_cmd) return run_compare(report_a, report_b, store_flag, common);
    if (*list_cmd) return run_archive_list(store_flag, user, common);
    if (*serve_cmd) return run_serve(port, serve_config, store_flag, common);
    if (*hash_cmd) return run_hash_password(user, password, iterations);
  } catch (const pat::Error& e) {
    std::cerr << "pat: " << pat::to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << "pat: malformed JSON: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "pat: " << e.what() << "\n";
    return kExitStore;
  }
  return 1;
}
