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

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace trinity::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitConnectivity = 2,
  kExitServer = 3,
};

struct CliConfig {
  std::string server_url = "http://127.0.0.1:8080";
  std::string token;
  std::string output_dir = ".";
};

// key = value lines; '#' comments, [section] headers and blank lines are
// skipped, values may be double-quoted. Unknown keys throw.
CliConfig ParseConfigText(std::string_view text);

// TRINITY_SERVER and TRINITY_TOKEN override the file; null leaves a field.
void ApplyEnvOverrides(CliConfig& config, const char* server, const char* token);

// http://host[:port][/]; anything else throws CliError(kExitValidation).
void ValidateServerUrl(const std::string& url);

// 4xx -> validation, 5xx -> server failure.
int ExitCodeForStatus(int http_status);

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

struct FormPart {
  std::string name;
  std::string content;
  std::string filename;
  std::string content_type;
};

// Thin JSON client for the service API. Non-2xx answers throw CliError
// carrying the server's error_code and message.
class ApiClient {
 public:
  explicit ApiClient(CliConfig config);

  nlohmann::json Get(const std::string& path) const;
  std::string GetText(const std::string& path) const;
  nlohmann::json Post(const std::string& path, const nlohmann::json& body,
                      const std::map<std::string, std::string>& headers = {}) const;
  nlohmann::json Patch(const std::string& path, const nlohmann::json& body) const;
  nlohmann::json PostForm(const std::string& path, const std::vector<FormPart>& parts) const;

  // Polls the job until it is done or failed.
  nlohmann::json WaitForJob(const std::string& job_id, std::chrono::milliseconds poll) const;

 private:
  CliConfig config_;
};

}  // namespace trinity::cli
