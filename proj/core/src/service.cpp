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
#include "pat/service.hpp"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "httplib.h"
#include "pat/engine.hpp"
#include "pat/error.hpp"
#include "pat/hash.hpp"

namespace pat {
namespace {

using json = nlohmann::json;

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kDecodeError:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kInvalidAmount:
    case ErrorCode::kUnknownSection:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 500;
  }
}

void send_error(httplib::Response& res, const Error& e) {
  send_error(res, http_status(e.code()), to_string(e.code()), e.what());
}

std::optional<double> parse_opacity(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || !std::isfinite(v) || v < 0.0 || v > 1.0) return std::nullopt;
  return v;
}

std::vector<std::uint8_t> as_bytes(const std::string& s) {
  return {s.begin(), s.end()};
}

std::string as_string(const std::vector<std::uint8_t>& bytes) {
  return {bytes.begin(), bytes.end()};
}

enum class JobState { kQueued, kRunning, kDone, kFailed };

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::kQueued:
      return "queued";
    case JobState::kRunning:
      return "running";
    case JobState::kDone:
      return "done";
    case JobState::kFailed:
      return "failed";
  }
  return "failed";
}

struct Job {
  std::string job_id;
  std::string user_id;
  std::string image_ref;
  JobState state = JobState::kQueued;
  std::string report_id;  // set iff state == kDone
  std::string message;
};

json job_json(const Job& job) {
  json j = {{"job_id", job.job_id}, {"image_ref", job.image_ref}, {"state", to_string(job.state)}};
  if (job.state == JobState::kDone) j["report_id"] = job.report_id;
  if (job.state == JobState::kFailed) j["message"] = job.message;
  return j;
}

}  // namespace

class Service::Impl {
 public:
  Impl(ServiceConfig config, std::shared_ptr<ReportStore> store, UserDirectory users,
       TokenStore::Clock clock)
      : config_(std::move(config)),
        engine_(config_.engine),
        store_(std::move(store)),
        users_(std::move(users)),
        clock_(clock),
        tokens_(clock) {
    // httplib defaults to SO_REUSEPORT, which lets a second server share a
    // port already in use; plain SO_REUSEADDR still allows fast restarts.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    install_routes();
  }

  ~Impl() {
    stop();
    std::map<std::string, std::jthread> workers;
    {
      std::lock_guard<std::mutex> lock(jobs_mutex_);
      workers.swap(workers_);
    }
    // Joined here; pipelines are bounded by plugin timeouts.
    workers.clear();
  }

  int bind() {
    const int port = config_.port == 0 ? server_.bind_to_any_port(config_.host)
                                       : (server_.bind_to_port(config_.host, config_.port)
                                              ? config_.port
                                              : -1);
    if (port < 0) {
      throw Error(ErrorCode::kConfigError,
                  "cannot listen on " + config_.host + ":" + std::to_string(config_.port));
    }
    return port;
  }

  void run() { server_.listen_after_bind(); }

  int start() {
    const int port = bind();
    listener_ = std::jthread([this] { run(); });
    server_.wait_until_ready();
    return port;
  }

  void stop() {
    server_.stop();
    if (listener_.joinable()) listener_.join();
  }

 private:
  std::optional<std::string> user_of(const httplib::Request& req) {
    const std::string header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.rfind(kBearer, 0) != 0) return std::nullopt;
    return tokens_.authenticate(header.substr(kBearer.size()));
  }

  // Wraps a handler with authentication and error mapping.
  template <typename Fn>
  httplib::Server::Handler authed(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      const auto user = user_of(req);
      if (!user) {
        send_error(res, 401, "Unauthorized", "missing or expired token");
        return;
      }
      try {
        fn(*user, req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const json::exception& e) {
        send_error(res, 400, "InvalidArgument", e.what());
      }
    };
  }

  // Report document owned by user; throws kNotFound otherwise.
  std::string owned_document(const std::string& user, const std::string& report_id) {
    std::string doc = store_->load_report_document(report_id);
    if (json::parse(doc).value("user_id", "") != user) {
      throw Error(ErrorCode::kNotFound, "report " + report_id + " not found");
    }
    return doc;
  }

  Report owned_report(const std::string& user, const std::string& report_id) {
    owned_document(user, report_id);
    return store_->load_report(report_id);
  }

  void install_routes() {
    if (!config_.cors_origin.empty()) {
      server_.set_default_headers({
          {"Access-Control-Allow-Origin", config_.cors_origin},
          {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
          {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
          {"Vary", "Origin"},
      });
    }
    server_.set_payload_max_length(64u << 20);
    server_.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (req.method == "OPTIONS") {
        res.status = 204;
        return httplib::Server::HandlerResponse::Handled;
      }
      const bool api = req.path.rfind("/api/", 0) == 0 || req.path == "/api";
      if (api && req.path != "/api/login" && !user_of(req)) {
        send_error(res, 401, "Unauthorized", "missing or expired token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });

    server_.Post("/api/login", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        send_error(res, 400, "InvalidArgument", "body must be JSON");
        return;
      }
      const std::string user = body.value("user_id", "");
      const std::string password = body.value("password", "");
      if (user.empty() || !users_.verify(user, password)) {
        send_error(res, 401, "Unauthorized", "invalid credentials");
        return;
      }
      const auto t = tokens_.issue(user);
      send_json(res, 200,
                {{"token", t.token}, {"user_id", t.user_id},
                 {"expires_at", format_timestamp(t.expires_at)}});
    });

    server_.Post("/api/charts", authed([this](const std::string&, const httplib::Request& req,
                                              httplib::Response& res) {
      const std::string& body = req.is_multipart_form_data()
                                    ? (req.has_file("image") ? req.get_file_value("image").content
                                                             : std::string())
                                    : req.body;
      const StagedImage staged = engine_.ingest(as_bytes(body));
      const std::string ref = store_->stage_image(staged.image, staged.warnings);
      send_json(res, 200,
                {{"image_ref", ref},
                 {"width", staged.image.width()},
                 {"height", staged.image.height()},
                 {"warnings", staged.warnings}});
    }));

    server_.Get("/api/charts/:ref", authed([this](const std::string&, const httplib::Request& req,
                                                  httplib::Response& res) {
      const auto chart = store_->load_image(req.path_params.at("ref"));
      res.set_content(as_string(encode_png(chart.image)), "image/png");
    }));

    server_.Post("/api/charts/:ref/analyze",
                 authed([this](const std::string& user, const httplib::Request& req,
                               httplib::Response& res) { analyze(user, req.path_params.at("ref"), res); }));

    server_.Get("/api/jobs/:id", authed([this](const std::string& user, const httplib::Request& req,
                                               httplib::Response& res) {
      std::lock_guard<std::mutex> lock(jobs_mutex_);
      const auto it = jobs_.find(req.path_params.at("id"));
      if (it == jobs_.end() || it->second.user_id != user) {
        send_error(res, 404, "NotFound", "no such job");
        return;
      }
      send_json(res, 200, job_json(it->second));
    }));

    server_.Get("/api/reports", authed([this](const std::string& user, const httplib::Request&,
                                              httplib::Response& res) {
      json list = json::array();
      for (const auto& e : store_->list_archive(user)) {
        list.push_back({{"report_id", e.report_id},
                        {"created_at", format_timestamp(e.created_at)},
                        {"thumbnail_ref", e.thumbnail_ref}});
      }
      send_json(res, 200, {{"reports", list}});
    }));

    server_.Get("/api/reports/:id", authed([this](const std::string& user, const httplib::Request& req,
                                                  httplib::Response& res) {
      res.set_content(owned_document(user, req.path_params.at("id")), kJson);
    }));

    server_.Get("/api/reports/:id/overlays/:section",
                authed([this](const std::string& user, const httplib::Request& req,
                              httplib::Response& res) { overlay(user, req, res); }));

    server_.Post("/api/reports/:id/notes", authed([this](const std::string& user,
                                                         const httplib::Request& req,
                                                         httplib::Response& res) {
      const std::string id = req.path_params.at("id");
      owned_document(user, id);
      const json body = json::parse(req.body);
      const std::string section = body.at("section").get<std::string>();
      const std::string text = body.at("text").get<std::string>();
      store_->add_note(id, section, text, clock_());
      res.set_content(store_->load_report_document(id), kJson);
    }));

    server_.Get("/api/compare", authed([this](const std::string& user, const httplib::Request& req,
                                              httplib::Response& res) {
      if (!req.has_param("a") || !req.has_param("b")) {
        send_error(res, 400, "InvalidArgument", "parameters a and b are required");
        return;
      }
      const Report a = owned_report(user, req.get_param_value("a"));
      const Report b = owned_report(user, req.get_param_value("b"));
      send_json(res, 200, diff_to_json(compare_reports(a, b)));
    }));

    server_.Get("/api/artifacts/:ref", authed([this](const std::string&, const httplib::Request& req,
                                                     httplib::Response& res) {
      res.set_content(as_string(store_->artifact_source().get_artifact(req.path_params.at("ref"))),
                      "image/png");
    }));
  }

  void analyze(const std::string& user, const std::string& ref, httplib::Response& res) {
    if (!store_->has_image(ref)) {
      send_error(res, 404, "NotFound", "image " + ref + " not found");
      return;
    }
    std::unique_lock<std::mutex> lock(jobs_mutex_);
    if (active_ >= config_.worker_cap) {
      send_error(res, 503, "Saturated", "analysis worker cap reached");
      return;
    }
    ++active_;
    reap_finished_workers();
    const std::string job_id = random_hex(16);
    jobs_[job_id] = Job{job_id, user, ref, JobState::kQueued, {}, {}};
    workers_.emplace(job_id, std::jthread([this, job_id, user, ref] { run_job(job_id, user, ref); }));

    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(config_.sync_timeout_ms);
    job_done_.wait_until(lock, deadline, [&] {
      const auto s = jobs_.at(job_id).state;
      return s == JobState::kDone || s == JobState::kFailed;
    });
    const Job& job = jobs_.at(job_id);
    if (job.state == JobState::kDone) {
      send_json(res, 200, {{"report_id", job.report_id}, {"job_id", job_id}});
    } else if (job.state == JobState::kFailed) {
      send_error(res, 500, "AnalysisFailed", job.message);
    } else {
      send_json(res, 202, job_json(job));
    }
  }

  // Requires jobs_mutex_. Threads of finished jobs are past their last use of
  // shared state, so joining them here only waits for thread exit.
  void reap_finished_workers() {
    for (auto it = workers_.begin(); it != workers_.end();) {
      const auto s = jobs_.at(it->first).state;
      if (s == JobState::kDone || s == JobState::kFailed) {
        it->second.join();
        it = workers_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void run_job(const std::string& job_id, const std::string& user, const std::string& ref) {
    {
      std::lock_guard<std::mutex> lock(jobs_mutex_);
      jobs_.at(job_id).state = JobState::kRunning;
    }
    JobState state = JobState::kDone;
    std::string report_id, message;
    try {
      const StagedImage chart = store_->load_image(ref);
      report_id = store_->save_report(engine_.analyze(chart, user, clock_()));
    } catch (const std::exception& e) {
      state = JobState::kFailed;
      message = e.what();
    }
    std::lock_guard<std::mutex> lock(jobs_mutex_);
    Job& job = jobs_.at(job_id);
    job.state = state;
    job.report_id = report_id;
    job.message = message;
    --active_;
    job_done_.notify_all();
  }

  void overlay(const std::string& user, const httplib::Request& req, httplib::Response& res) {
    const Report report = owned_report(user, req.path_params.at("id"));
    const std::string key = req.path_params.at("section");
    const SectionResult* section = report.find_section(key);
    if (section == nullptr) {
      send_error(res, 404, "NotFound", "report has no section " + key);
      return;
    }
    const bool is_heatmap = std::holds_alternative<Heatmap>(section->payload);
    const bool is_variant = std::holds_alternative<ImageVariantSet>(section->payload);
    if (!is_heatmap && !is_variant) {
      send_error(res, 400, "InvalidArgument", "section " + key + " has no overlay");
      return;
    }
    double opacity = is_heatmap ? 0.6 : 1.0;
    if (req.has_param("opacity")) {
      const auto parsed = parse_opacity(req.get_param_value("opacity"));
      if (!parsed) {
        send_error(res, 400, "InvalidArgument", "opacity must be a number in [0, 1]");
        return;
      }
      opacity = *parsed;
    }
    const RasterImage chart = store_->load_image(report.image_ref).image;
    if (is_heatmap) {
      const auto png = encode_png(composite_overlay(chart, std::get<Heatmap>(section->payload), opacity));
      res.set_content(as_string(png), "image/png");
      return;
    }
    const auto& variants = std::get<ImageVariantSet>(section->payload).variants;
    const ImageVariant* chosen = variants.empty() ? nullptr : &variants.front();
    if (req.has_param("variant")) {
      chosen = nullptr;
      for (const auto& v : variants) {
        if (v.label == req.get_param_value("variant")) chosen = &v;
      }
    }
    if (chosen == nullptr) {
      send_error(res, 404, "NotFound", "no such variant");
      return;
    }
    res.set_content(as_string(encode_png(blend_images(chart, chosen->image, opacity))), "image/png");
  }

  ServiceConfig config_;
  AnalysisEngine engine_;
  std::shared_ptr<ReportStore> store_;
  UserDirectory users_;
  TokenStore::Clock clock_;
  TokenStore tokens_;
  httplib::Server server_;
  std::jthread listener_;

  std::mutex jobs_mutex_;
  std::condition_variable job_done_;
  std::map<std::string, Job> jobs_;
  std::map<std::string, std::jthread> workers_;
  int active_ = 0;
};

Service::Service(ServiceConfig config, std::shared_ptr<ReportStore> store, UserDirectory users,
                 TokenStore::Clock clock)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(store), std::move(users),
                                   std::move(clock))) {}

Service::~Service() = default;

int Service::bind() { return impl_->bind(); }
void Service::run() { impl_->run(); }
int Service::start() { return impl_->start(); }
void Service::stop() { impl_->stop(); }

}  // namespace pat
