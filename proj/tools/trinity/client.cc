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

#include "client.hpp"

#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

namespace trinity::cli {
using nlohmann::json;

namespace {

std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

httplib::Headers AuthHeaders(const CliConfig& c,
                             const std::map<std::string, std::string>& extra = {}) {
  httplib::Headers h;
  if (!c.token.empty()) h.emplace("Authorization", "Bearer " + c.token);
  for (const auto& [k, v] : extra) h.emplace(k, v);
  return h;
}

httplib::Client MakeClient(const CliConfig& c) {
  httplib::Client client(c.server_url);
  client.set_connection_timeout(std::chrono::seconds(5));
  client.set_read_timeout(std::chrono::minutes(10));
  client.set_write_timeout(std::chrono::minutes(1));
  return client;
}

std::string Describe(const httplib::Result& r, const std::string& what) {
  return what + ": " + httplib::to_string(r.error());
}

// Body text of a 2xx answer; otherwise a CliError with the server's message.
std::string Check(const httplib::Result& r, const CliConfig& c, const std::string& what) {
  if (!r) {
    throw CliError(kExitConnectivity,
                   "cannot reach " + c.server_url + " (" + Describe(r, what) + ")");
  }
  if (r->status >= 200 && r->status < 300) return r->body;
  std::string code = "http_" + std::to_string(r->status);
  std::string message = r->body;
  const json j = json::parse(r->body, nullptr, false);
  if (j.is_object()) {
    code = j.value("error_code", code);
    message = j.value("message", message);
  }
  throw CliError(ExitCodeForStatus(r->status), code + ": " + message);
}

json ParseJson(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw CliError(kExitServer, "server answered with invalid JSON");
  return j;
}

}  // namespace

CliConfig ParseConfigText(std::string_view text) {
  CliConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CliError(kExitValidation, "config line " + std::to_string(n) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key == "server_url") {
      c.server_url = value;
    } else if (key == "token") {
      c.token = value;
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else {
      throw CliError(kExitValidation,
                     "config line " + std::to_string(n) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

void ApplyEnvOverrides(CliConfig& config, const char* server, const char* token) {
  if (server && *server) config.server_url = server;
  if (token) config.token = token;
}

void ValidateServerUrl(const std::string& url) {
  static const std::regex re(R"(http://[A-Za-z0-9.\-]+(:[0-9]{1,5})?/?)");
  if (!std::regex_match(url, re)) {
    throw CliError(kExitValidation,
                   "server_url '" + url + "' must look like http://host[:port]");
  }
}

int ExitCodeForStatus(int http_status) {
  return http_status >= 500 ? kExitServer : kExitValidation;
}

ApiClient::ApiClient(CliConfig config) : config_(std::move(config)) {
  ValidateServerUrl(config_.server_url);
  while (config_.server_url.back() == '/') config_.server_url.pop_back();
}

json ApiClient::Get(const std::string& path) const { return ParseJson(GetText(path)); }

std::string ApiClient::GetText(const std::string& path) const {
  auto client = MakeClient(config_);
  return Check(client.Get(path, AuthHeaders(config_)), config_, "GET " + path);
}

json ApiClient::Post(const std::string& path, const json& body,
                     const std::map<std::string, std::string>& headers) const {
  auto client = MakeClient(config_);
  return ParseJson(Check(client.Post(path, AuthHeaders(config_, headers), body.dump(),
                                     "application/json"),
                         config_, "POST " + path));
}

json ApiClient::Patch(const std::string& path, const json& body) const {
  auto client = MakeClient(config_);
  return ParseJson(Check(client.Patch(path, AuthHeaders(config_), body.dump(), "application/json"),
                         config_, "PATCH " + path));
}

json ApiClient::PostForm(const std::string& path, const std::vector<FormPart>& parts) const {
  httplib::MultipartFormDataItems items;
  for (const auto& p : parts) items.push_back({p.name, p.content, p.filename, p.content_type});
  auto client = MakeClient(config_);
  return ParseJson(Check(client.Post(path, AuthHeaders(config_), items), config_, "POST " + path));
}

json ApiClient::WaitForJob(const std::string& job_id, std::chrono::milliseconds poll) const {
  for (;;) {
    json job = Get("/api/jobs/" + job_id);
    const std::string status = job.value("status", "");
    if (status == "done" || status == "failed") return job;
    std::this_thread::sleep_for(poll);
  }
}

}  // namespace trinity::cli
