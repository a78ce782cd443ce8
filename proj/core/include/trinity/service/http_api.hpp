/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

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

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "trinity/service/platform.hpp"

namespace trinity::service {

// JSON-over-HTTP front end of a Platform. Every /api route requires
// "Authorization: Bearer <token>" when a token is set. Errors answer with
// {"error_code", "message"} and the status of the error code.
class HttpServer {
 public:
  HttpServer(Platform& platform, std::string token,
             std::filesystem::path static_dir = {});
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop().
  void Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trinity::service
