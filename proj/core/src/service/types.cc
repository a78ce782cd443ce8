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

#include "trinity/service/types.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "trinity/error.hpp"
#include "trinity/geo/json.hpp"

namespace trinity::service {
using nlohmann::json;

namespace {

template <typename T>
void GetIf(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) j[key].get_to(out);
}

}  // namespace

const char* JobTypeName(JobType t) {
  switch (t) {
    case JobType::kDataprep: return "dataprep";
    case JobType::kTrain: return "train";
    case JobType::kAutoml: return "automl";
    case JobType::kPredict: return "predict";
  }
  return "?";
}

const char* JobStatusName(JobStatus s) {
  switch (s) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "?";
}

JobType ParseJobType(const std::string& s) {
  for (auto t : {JobType::kDataprep, JobType::kTrain, JobType::kAutoml, JobType::kPredict}) {
    if (s == JobTypeName(t)) return t;
  }
  throw ValidationError("unknown job type '" + s + "'");
}

JobStatus ParseJobStatus(const std::string& s) {
  for (auto t : {JobStatus::kQueued, JobStatus::kRunning, JobStatus::kDone, JobStatus::kFailed}) {
    if (s == JobStatusName(t)) return t;
  }
  throw ValidationError("unknown job status '" + s + "'");
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "name",         "label_set_id", "profile_ids",  "date_ranges",     "transient_dir",
      "architecture_id", "hyperparams", "val_fraction", "split_seed", "checkpoint_every"};
  return keys;
}

std::string NowIso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", &tm);
  char frac[8];
  std::snprintf(frac, sizeof(frac), ".%03dZ", static_cast<int>(ms));
  return std::string(buf) + frac;
}

void to_json(json& j, const Project& p) {
  j = json{{"project_id", p.project_id},
           {"name", p.name},
           {"description", p.description},
           {"experiment_ids", p.experiment_ids},
           {"created_at", p.created_at}};
}

void from_json(const json& j, Project& p) {
  j.at("project_id").get_to(p.project_id);
  j.at("name").get_to(p.name);
  p.description = j.value("description", "");
  p.experiment_ids = j.value("experiment_ids", std::vector<std::string>{});
  p.created_at = j.value("created_at", "");
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"name", c.name},
           {"label_set_id", c.label_set_id},
           {"profile_ids", c.profile_ids},
           {"date_ranges", c.date_ranges},
           {"transient_dir", c.transient_dir ? json(*c.transient_dir) : json(nullptr)},
           {"architecture_id", c.architecture_id},
           {"hyperparams", c.hyperparams},
           {"val_fraction", c.val_fraction},
           {"split_seed", c.split_seed},
           {"checkpoint_every", c.checkpoint_every}};
}

void ApplyConfigJson(const json& j, ExperimentConfig& c) {
  GetIf(j, "name", c.name);
  GetIf(j, "label_set_id", c.label_set_id);
  GetIf(j, "profile_ids", c.profile_ids);
  GetIf(j, "date_ranges", c.date_ranges);
  if (j.contains("transient_dir")) {
    if (j["transient_dir"].is_null()) c.transient_dir.reset();
    else c.transient_dir = j["transient_dir"].get<std::string>();
  }
  GetIf(j, "architecture_id", c.architecture_id);
  if (j.contains("hyperparams") && !j["hyperparams"].is_null()) {
    // Partial hyperparameter objects override field by field.
    json merged = c.hyperparams;
    merged.update(j["hyperparams"]);
    c.hyperparams = merged.get<kernel::Hyperparams>();
  }
  GetIf(j, "val_fraction", c.val_fraction);
  GetIf(j, "split_seed", c.split_seed);
  GetIf(j, "checkpoint_every", c.checkpoint_every);
}

void to_json(json& j, const Experiment& e) {
  json checkpoints = json::array();
  for (const auto& c : e.checkpoints) {
    checkpoints.push_back(json{{"epoch", c.epoch}, {"path", c.path}});
  }
  j = e.config;
  j["experiment_id"] = e.experiment_id;
  j["project_id"] = e.project_id;
  j["state"] = StateName(e.state);
  j["parent_id"] = e.parent_id ? json(*e.parent_id) : json(nullptr);
  j["tags"] = e.tags;
  j["notes"] = e.notes;
  j["channel_count"] = e.channel_count;
  j["checkpoints"] = checkpoints;
  j["prediction_job_ids"] = e.prediction_job_ids;
  j["created_at"] = e.created_at;
  j["updated_at"] = e.updated_at;
}

void from_json(const json& j, Experiment& e) {
  j.at("experiment_id").get_to(e.experiment_id);
  j.at("project_id").get_to(e.project_id);
  e.config = ExperimentConfig{};
  ApplyConfigJson(j, e.config);
  e.state = ParseState(j.at("state").get<std::string>());
  e.parent_id.reset();
  if (j.contains("parent_id") && !j["parent_id"].is_null()) e.parent_id = j["parent_id"];
  e.tags = j.value("tags", std::vector<std::string>{});
  e.notes = j.value("notes", "");
  e.channel_count = j.value("channel_count", 0);
  e.checkpoints.clear();
  for (const auto& c : j.value("checkpoints", json::array())) {
    e.checkpoints.push_back({c.at("epoch").get<int>(), c.at("path").get<std::string>()});
  }
  e.prediction_job_ids = j.value("prediction_job_ids", std::vector<std::string>{});
  e.created_at = j.value("created_at", "");
  e.updated_at = j.value("updated_at", "");
}

void to_json(json& j, const Job& job) {
  j = json{{"job_id", job.job_id},
           {"experiment_id", job.experiment_id},
           {"type", JobTypeName(job.type)},
           {"status", JobStatusName(job.status)},
           {"args", job.args},
           {"result", job.result},
           {"error", job.error},
           {"idempotency_key", job.idempotency_key ? json(*job.idempotency_key) : json(nullptr)},
           {"created_at", job.created_at},
           {"started_at", job.started_at},
           {"finished_at", job.finished_at}};
}

void from_json(const json& j, Job& job) {
  j.at("job_id").get_to(job.job_id);
  j.at("experiment_id").get_to(job.experiment_id);
  job.type = ParseJobType(j.at("type").get<std::string>());
  job.status = ParseJobStatus(j.at("status").get<std::string>());
  job.args = j.value("args", json::object());
  job.result = j.value("result", json::object());
  job.error = j.value("error", "");
  job.idempotency_key.reset();
  if (j.contains("idempotency_key") && !j["idempotency_key"].is_null()) {
    job.idempotency_key = j["idempotency_key"].get<std::string>();
  }
  job.created_at = j.value("created_at", "");
  job.started_at = j.value("started_at", "");
  job.finished_at = j.value("finished_at", "");
}

void to_json(json& j, const ActiveLearningRound& r) {
  json tiles = json::array();
  for (const auto& t : r.tiles) {
    tiles.push_back(json{{"tile", t.tile}, {"uncertainty", t.uncertainty}});
  }
  j = json{{"round_id", r.round_id},
           {"experiment_id", r.experiment_id},
           {"prediction_job_id", r.prediction_job_id},
           {"requested_k", r.requested_k},
           {"k", r.k},
           {"tiles", tiles},
           {"label_set_id", r.label_set_id},
           {"target_task", r.target_task},
           {"label_task_id", r.label_task_id},
           {"clone_experiment_id",
            r.clone_experiment_id ? json(*r.clone_experiment_id) : json(nullptr)},
           {"warning", r.warning},
           {"created_at", r.created_at}};
}

void from_json(const json& j, ActiveLearningRound& r) {
  j.at("round_id").get_to(r.round_id);
  j.at("experiment_id").get_to(r.experiment_id);
  j.at("prediction_job_id").get_to(r.prediction_job_id);
  j.at("requested_k").get_to(r.requested_k);
  j.at("k").get_to(r.k);
  r.tiles.clear();
  for (const auto& t : j.at("tiles")) {
    r.tiles.push_back({t.at("tile").get<geo::TileKey>(), t.at("uncertainty").get<double>()});
  }
  j.at("label_set_id").get_to(r.label_set_id);
  j.at("target_task").get_to(r.target_task);
  j.at("label_task_id").get_to(r.label_task_id);
  r.clone_experiment_id.reset();
  if (!j.at("clone_experiment_id").is_null()) {
    r.clone_experiment_id = j["clone_experiment_id"].get<std::string>();
  }
  r.warning = j.value("warning", "");
  r.created_at = j.value("created_at", "");
}

}  // namespace trinity::service
