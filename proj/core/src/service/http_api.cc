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

#include "trinity/service/http_api.hpp"

#include <functional>

#include <httplib.h>

#include "trinity/error.hpp"
#include "trinity/geo/json.hpp"
#include "trinity/kernel/model.hpp"

namespace trinity::service {
using nlohmann::json;

namespace {

using Req = httplib::Request;
using Res = httplib::Response;

void SendJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message) {
  SendJson(res, status, json{{"error_code", code}, {"message", message}});
}

json Body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw ValidationError("request body is not valid JSON");
  return j;
}

// Run arguments from the body plus an optional Idempotency-Key header.
json RunArgs(const httplib::Request& req) {
  json args = Body(req);
  if (!args.is_object()) throw ValidationError("request body must be a JSON object");
  if (req.has_header("Idempotency-Key")) {
    args["idempotency_key"] = req.get_header_value("Idempotency-Key");
  }
  return args;
}

std::string Field(const httplib::Request& req, const json& body, const std::string& name) {
  if (req.is_multipart_form_data()) {
    return req.has_file(name) ? req.get_file_value(name).content : std::string();
  }
  return body.contains(name) ? body[name].get<std::string>() : std::string();
}

json FieldJson(const httplib::Request& req, const json& body, const std::string& name) {
  if (!req.is_multipart_form_data()) {
    if (!body.contains(name)) throw ValidationError("missing field '" + name + "'");
    return body[name];
  }
  if (!req.has_file(name)) throw ValidationError("missing form field '" + name + "'");
  json j = json::parse(req.get_file_value(name).content, nullptr, false);
  if (j.is_discarded()) throw ValidationError("form field '" + name + "' is not valid JSON");
  return j;
}

json ExperimentView(const Platform& platform, const Experiment& e) {
  json j = e;
  j["lineage"] = platform.Lineage(e.experiment_id);
  return j;
}

}  // namespace

struct HttpServer::Impl {
  Impl(Platform& p, std::string t) : platform(p), token(std::move(t)) {}

  Platform& platform;
  std::string token;
  httplib::Server server;

  using Fn = std::function<void(const httplib::Request&, httplib::Response&)>;

  Fn Wrap(Fn fn) {
    return [this, fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      if (!token.empty() && req.get_header_value("Authorization") != "Bearer " + token) {
        SendError(res, 401, "unauthorized", "missing or invalid bearer token");
        return;
      }
      try {
        fn(req, res);
      } catch (const Error& e) {
        SendError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what());
      } catch (const json::exception& e) {
        SendError(res, 400, ErrorCodeName(ErrorCode::kValidation), e.what());
      } catch (const std::exception& e) {
        SendError(res, 500, ErrorCodeName(ErrorCode::kInternal), e.what());
      }
    };
  }

  void Routes();
};

void HttpServer::Impl::Routes() {
  auto& p = platform;
  auto& s = server;
  const auto param = [](const httplib::Request& req, const char* name) {
    return req.path_params.at(name);
  };

  s.Post("/api/projects", Wrap([&](const Req& req, Res& res) {
    const json b = Body(req);
    SendJson(res, 201, p.CreateProject(b.at("name").get<std::string>(),
                                       b.value("description", "")));
  }));
  s.Get("/api/projects", Wrap([&](const Req&, Res& res) {
    SendJson(res, 200, p.ListProjects());
  }));
  s.Get("/api/projects/:id", Wrap([&](const Req& req, Res& res) {
    json j = p.GetProject(param(req, "id"));
    j["experiments"] = json::array();
    for (const auto& e : p.ListExperiments(param(req, "id"))) {
      j["experiments"].push_back(ExperimentView(p, e));
    }
    SendJson(res, 200, j);
  }));
  s.Post("/api/projects/:id/experiments", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 201, ExperimentView(p, p.CreateExperiment(param(req, "id"), Body(req))));
  }));

  s.Get("/api/experiments/:id", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, ExperimentView(p, p.GetExperiment(param(req, "id"))));
  }));
  s.Patch("/api/experiments/:id", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, ExperimentView(p, p.PatchExperiment(param(req, "id"), Body(req))));
  }));
  s.Post("/api/experiments/:id/clone", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 201, ExperimentView(p, p.CloneExperiment(param(req, "id"), Body(req))));
  }));
  s.Post("/api/experiments/:id/reset", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, ExperimentView(p, p.Transition(param(req, "id"), Event::kReset)));
  }));
  s.Post("/api/experiments/:id/dataprep", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 202, p.RunDataprep(param(req, "id"), RunArgs(req)));
  }));
  s.Post("/api/experiments/:id/train", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 202, p.RunTraining(param(req, "id"), RunArgs(req)));
  }));
  s.Post("/api/experiments/:id/automl", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 202, p.RunAutoml(param(req, "id"), RunArgs(req)));
  }));
  s.Post("/api/experiments/:id/predict", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 202, p.RunPrediction(param(req, "id"), RunArgs(req)));
  }));
  s.Get("/api/experiments/:id/metrics", Wrap([&](const Req& req, Res& res) {
    res.status = 200;
    res.set_content(p.MetricsHistory(param(req, "id")), "application/x-ndjson");
  }));

  s.Get("/api/jobs", Wrap([&](const Req&, Res& res) { SendJson(res, 200, p.ListJobs()); }));
  s.Get("/api/jobs/:id", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, p.GetJob(param(req, "id")));
  }));

  s.Get("/api/catalog/profiles", Wrap([&](const Req&, Res& res) {
    SendJson(res, 200, p.store().ListProfiles());
  }));
  s.Get("/api/catalog/architectures", Wrap([&](const Req&, Res& res) {
    json out = json::array();
    for (const auto& a : kernel::ArchitectureCatalog()) {
      out.push_back({{"architecture_id", a.architecture_id}, {"description", a.description}});
    }
    SendJson(res, 200, out);
  }));

  s.Post("/api/labels/upload", Wrap([&](const Req& req, Res& res) {
    const json body = req.is_multipart_form_data() ? json::object() : Body(req);
    const std::string wkt = req.is_multipart_form_data() ? Field(req, body, "file")
                                                         : Field(req, body, "wkt");
    const auto tasks = FieldJson(req, body, "tasks").get<std::vector<labels::TaskSpec>>();
    const auto region = FieldJson(req, body, "labeled_region").get<geo::BBox>();
    const labels::LabelSet set = p.UploadLabels(wkt, Field(req, body, "label_set_id"), tasks,
                                                region, Field(req, body, "target_task"));
    json summary{{"label_set_id", set.label_set_id}, {"tasks", json::array()}};
    for (const auto& t : set.tasks) {
      summary["tasks"].push_back({{"task_name", t.spec.name},
                                  {"class_count", t.spec.class_count},
                                  {"geometries", t.geometries.size()},
                                  {"labeled_tiles", t.labeled_tiles.size()}});
    }
    SendJson(res, 201, summary);
  }));
  s.Get("/api/labels/sets/:id", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, p.labels().Get(param(req, "id")));
  }));
  s.Get("/api/labels/tasks", Wrap([&](const Req&, Res& res) {
    SendJson(res, 200, p.labels().ListTasks());
  }));
  s.Post("/api/labels/tasks/:id/annotations", Wrap([&](const Req& req, Res& res) {
    const std::string ctype = req.get_header_value("Content-Type");
    const std::string wkt = ctype.rfind("application/json", 0) == 0
                                ? Body(req).at("wkt").get<std::string>()
                                : req.body;
    const labels::LabelSet set = p.labels().AddAnnotations(param(req, "id"), wkt);
    SendJson(res, 200, json{{"task", p.labels().GetTask(param(req, "id"))},
                            {"label_set_id", set.label_set_id}});
  }));

  s.Post("/api/predictions/:id/active-learning", Wrap([&](const Req& req, Res& res) {
    const json b = Body(req);
    std::optional<std::string> target;
    if (b.contains("target_task")) target = b["target_task"].get<std::string>();
    SendJson(res, 201, p.ActiveLearningSelect(param(req, "id"), b.at("k").get<int>(), target));
  }));
  s.Get("/api/active-learning/:round", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, p.GetRound(param(req, "round")));
  }));
  s.Post("/api/active-learning/:round/complete", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, ExperimentView(p, p.ActiveLearningComplete(param(req, "round"))));
  }));
  s.Post("/api/predictions/:id/postprocess", Wrap([&](const Req& req, Res& res) {
    SendJson(res, 200, p.Postprocess(param(req, "id"), Body(req)));
  }));
  s.Post("/api/predictions/:id/evaluate", Wrap([&](const Req& req, Res& res) {
    const json b = Body(req);
    const GoldenReport r = p.EvaluateAgainstGolden(
        param(req, "id"), b.at("golden_wkt").get<std::string>(),
        b.at("task").get<std::string>(), b.value("class_index", 1), b.value("tau", 0.5));
    SendJson(res, 200, r);
  }));
  s.Post("/api/predictions/:id/profile", Wrap([&](const Req& req, Res& res) {
    const json b = Body(req);
    SendJson(res, 201, p.IngestPredictionAsProfile(param(req, "id"),
                                                   b.at("profile_id").get<std::string>(),
                                                   b.value("description", "")));
  }));
  s.Get(R"(/api/predictions/([^/]+)/tiles/([^/]+)/(\d+)/16/(\d+)/(\d+)\.png)",
        Wrap([&](const Req& req, Res& res) {
          const geo::TileKey tile{static_cast<std::uint32_t>(std::stoul(req.matches[4])),
                                  static_cast<std::uint32_t>(std::stoul(req.matches[5]))};
          const auto png = p.PredictionTilePng(req.matches[1], req.matches[2],
                                               std::stoi(req.matches[3]), tile);
          res.status = 200;
          res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
        }));
}

HttpServer::HttpServer(Platform& platform, std::string token,
                       std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(platform, std::move(token))) {
  impl_->Routes();
  if (!static_dir.empty() && !impl_->server.set_mount_point("/", static_dir.string())) {
    throw ValidationError("static directory '" + static_dir.string() + "' does not exist");
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw StateError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace trinity::service
