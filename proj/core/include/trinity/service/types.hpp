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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/dataprep/dataset.hpp"
#include "trinity/kernel/adam.hpp"
#include "trinity/kernel/model.hpp"
#include "trinity/service/state_machine.hpp"

namespace trinity::service {

struct Project {
  std::string project_id;
  std::string name;
  std::string description;
  std::vector<std::string> experiment_ids;
  std::string created_at;
};

// What an experiment binds: labels, channels, architecture, hyperparameters.
struct ExperimentConfig {
  std::string name;
  std::string label_set_id;
  std::vector<std::string> profile_ids;
  std::map<std::string, dataprep::DateRange> date_ranges;
  std::optional<std::string> transient_dir;
  std::string architecture_id = kernel::kUnetMini;
  kernel::Hyperparams hyperparams;
  double val_fraction = dataprep::kDefaultValFraction;
  std::uint64_t split_seed = 0;
  int checkpoint_every = 5;
};

struct CheckpointRef {
  int epoch = 0;
  std::string path;  // relative to the data root
};

struct Experiment {
  std::string experiment_id;
  std::string project_id;
  ExperimentConfig config;
  ExperimentState state = ExperimentState::kDraft;
  std::optional<std::string> parent_id;
  std::vector<std::string> tags;
  std::string notes;
  int channel_count = 0;  // known after data preparation
  std::vector<CheckpointRef> checkpoints;
  std::vector<std::string> prediction_job_ids;
  std::string created_at;
  std::string updated_at;
};

enum class JobType { kDataprep, kTrain, kAutoml, kPredict };
enum class JobStatus { kQueued, kRunning, kDone, kFailed };

const char* JobTypeName(JobType t);
const char* JobStatusName(JobStatus s);
JobType ParseJobType(const std::string& s);
JobStatus ParseJobStatus(const std::string& s);

struct Job {
  std::string job_id;
  std::string experiment_id;
  JobType type = JobType::kDataprep;
  JobStatus status = JobStatus::kQueued;
  nlohmann::json args = nlohmann::json::object();
  nlohmann::json result = nlohmann::json::object();
  std::string error;
  std::optional<std::string> idempotency_key;
  std::string created_at;
  std::string started_at;
  std::string finished_at;

  bool active() const { return status == JobStatus::kQueued || status == JobStatus::kRunning; }
};

struct RankedTile {
  geo::TileKey tile;
  double uncertainty = 0.0;
};

struct ActiveLearningRound {
  std::string round_id;
  std::string experiment_id;
  std::string prediction_job_id;
  int requested_k = 0;
  int k = 0;
  std::vector<RankedTile> tiles;
  std::string label_set_id;  // copy that receives the new annotations
  std::string target_task;
  std::string label_task_id;
  std::optional<std::string> clone_experiment_id;
  std::string warning;
  std::string created_at;
};

void to_json(nlohmann::json& j, const Project& p);
void from_json(const nlohmann::json& j, Project& p);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
// Reads the config fields present in `j` on top of `c`; unknown keys are the
// caller's concern.
void ApplyConfigJson(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const Experiment& e);
void from_json(const nlohmann::json& j, Experiment& e);
void to_json(nlohmann::json& j, const Job& job);
void from_json(const nlohmann::json& j, Job& job);
void to_json(nlohmann::json& j, const ActiveLearningRound& r);
void from_json(const nlohmann::json& j, ActiveLearningRound& r);

// Config keys accepted at creation and as clone overrides.
const std::vector<std::string>& ConfigKeys();

std::string NowIso8601();

}  // namespace trinity::service
