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
#ifndef PAT_SERVICE_HPP_
#define PAT_SERVICE_HPP_

#include <memory>

#include "pat/auth.hpp"
#include "pat/config.hpp"
#include "pat/store.hpp"

namespace pat {

// HTTP front end for the analysis workflow. All routes live under /api and
// all except POST /api/login require "Authorization: Bearer <token>".
//
//   POST /api/login                         {user_id, password} -> {token, ...}
//   POST /api/charts                        multipart "image" or raw body
//   GET  /api/charts/{image_ref}            stored chart PNG
//   POST /api/charts/{image_ref}/analyze    200 {report_id} or 202 {job_id}
//   GET  /api/jobs/{job_id}
//   GET  /api/reports                       caller's archive, chronological
//   GET  /api/reports/{id}
//   GET  /api/reports/{id}/overlays/{key}   ?opacity=f&variant=label
//   POST /api/reports/{id}/notes            {section, text}
//   GET  /api/compare?a=&b=
//   GET  /api/artifacts/{ref}               heatmap, variant or thumbnail PNG
//
// Jobs are held in memory and do not survive a restart.
class Service {
 public:
  Service(ServiceConfig config, std::shared_ptr<ReportStore> store, UserDirectory users,
          TokenStore::Clock clock = now_utc);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds config.host:config.port (0 picks a free port) and returns the port.
  // Throws kConfigError.
  int bind();
  // Serves until stop(). Requires bind().
  void run();
  // bind() plus run() on a background thread; returns the port.
  int start();
  void stop();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pat

#endif  // PAT_SERVICE_HPP_
