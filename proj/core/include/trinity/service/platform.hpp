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

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/inference/heatmap.hpp"
#include "trinity/labels/label_set.hpp"
#include "trinity/service/analysis.hpp"
#include "trinity/service/metadata.hpp"
#include "trinity/service/types.hpp"
#include "trinity/store/channel_store.hpp"
#include "trinity/util/parallel.hpp"

namespace trinity::service {

struct PlatformOptions {
  std::filesystem::path data_root;
  std::size_t job_workers = 2;
  std::size_t predict_workers = 2;
  std::size_t train_threads = 1;
};

// Everything the HTTP API exposes. Data root layout:
//   store/                 channel store
//   labels/                label sets and labeling tasks
//   meta/                  projects, experiments, jobs, rounds, audit.log
//   datasets/<exp>/        prepared dataset
//   models/<exp>/          epoch_NNNN.trnk, metrics.jsonl, automl.json
//   jobs/<job>/            prediction heatmaps, viz/ PNGs, post/ outputs
//
// Metadata mutations are serialized by one mutex. Jobs run on a bounded
// pool; at most one data-prep and one training or AutoML job per experiment
// may be active. Construction fails every job left unfinished by a previous
// process and moves experiments caught mid-job to FAILED.
class Platform {
 public:
  explicit Platform(PlatformOptions options);
  // Running trainings stop at their next epoch boundary and fail.
  ~Platform();

  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  const std::filesystem::path& data_root() const { return options_.data_root; }
  store::ChannelStore& store() { return store_; }
  labels::LabelManager& labels() { return labels_; }

  Project CreateProject(const std::string& name, const std::string& description);
  Project GetProject(const std::string& project_id) const;
  std::vector<Project> ListProjects() const;

  // `config` holds the keys of ConfigKeys(); unknown keys and dangling
  // references throw ValidationError.
  Experiment CreateExperiment(const std::string& project_id, const nlohmann::json& config);
  Experiment GetExperiment(const std::string& experiment_id) const;
  std::vector<Experiment> ListExperiments(const std::string& project_id) const;
  Experiment CloneExperiment(const std::string& experiment_id, const nlohmann::json& overrides);
  // Ancestor ids, nearest first.
  std::vector<std::string> Lineage(const std::string& experiment_id) const;
  // Only "tags" and "notes" may change.
  Experiment PatchExperiment(const std::string& experiment_id, const nlohmann::json& patch);
  // Persisted, audited state change; illegal events throw StateError.
  Experiment Transition(const std::string& experiment_id, Event event);
  // JSON lines, one MetricsRecord per split and epoch.
  std::string MetricsHistory(const std::string& experiment_id) const;

  // Every run accepts an optional "idempotency_key"; a known key returns the
  // job it created.
  Job RunDataprep(const std::string& experiment_id, const nlohmann::json& args);
  // args: warm_start (true for the latest own checkpoint, or
  // {experiment_id, epoch}), epochs.
  Job RunTraining(const std::string& experiment_id, const nlohmann::json& args);
  // args: search_space, n_trials (4), parallelism (1), seed (0), epochs.
  Job RunAutoml(const std::string& experiment_id, const nlohmann::json& args);
  // args: bbox (required), epoch (latest checkpoint), date_overrides,
  // render_png (true). The checkpoint is bound when the job is created.
  Job RunPrediction(const std::string& experiment_id, const nlohmann::json& args);

  Job GetJob(const std::string& job_id) const;
  std::vector<Job> ListJobs() const;
  void WaitForJobs();

  // Heatmaps of a finished prediction job, in its row-major tile order.
  std::vector<inference::Heatmap> PredictionHeatmaps(const std::string& job_id) const;
  store::ProfileMeta IngestPredictionAsProfile(const std::string& job_id,
                                               const std::string& profile_id,
                                               const std::string& description);
  std::vector<std::uint8_t> PredictionTilePng(const std::string& job_id, const std::string& task,
                                              int class_index, const geo::TileKey& tile) const;
  GoldenReport EvaluateAgainstGolden(const std::string& job_id, const std::string& golden_wkt,
                                     const std::string& task, int class_index, double tau) const;
  // request.op is "vectorize", "mapmatch" or "filter"; outputs are also
  // written under jobs/<job>/post/.
  nlohmann::json Postprocess(const std::string& job_id, const nlohmann::json& request);

  ActiveLearningRound ActiveLearningSelect(const std::string& job_id, int k,
                                           const std::optional<std::string>& target_task);
  ActiveLearningRound GetRound(const std::string& round_id) const;
  // Idempotent: a completed round returns its clone.
  Experiment ActiveLearningComplete(const std::string& round_id);

  labels::LabelSet UploadLabels(const std::string& wkt_text, const std::string& label_set_id,
                                const std::vector<labels::TaskSpec>& tasks,
                                const geo::BBox& labeled_region,
                                const std::string& target_task);

 private:
  struct JobSpec;

  void Recover();
  void ValidateConfig(const ExperimentConfig& config) const;
  Experiment LoadExperiment(const std::string& id) const;
  void SaveExperiment(Experiment& e);
  Experiment TransitionLocked(const std::string& experiment_id, Event event);
  Job LoadJob(const std::string& id) const;
  void SaveJob(const Job& job);
  std::optional<Job> FindIdempotent(const nlohmann::json& args, const std::string& experiment_id,
                                    JobType type) const;
  void CheckNoActive(const std::string& experiment_id, std::initializer_list<JobType> types) const;
  Job Launch(JobSpec spec);
  Job RequireFinishedPrediction(const std::string& job_id) const;
  Experiment CloneLocked(const Experiment& source, const nlohmann::json& overrides);

  std::filesystem::path DatasetDir(const std::string& exp) const;
  std::filesystem::path ModelDir(const std::string& exp) const;
  std::filesystem::path JobDir(const std::string& job) const;

  PlatformOptions options_;
  store::ChannelStore store_;
  labels::LabelManager labels_;
  MetadataStore meta_;

  mutable std::mutex mu_;
  std::map<std::string, std::string> idempotency_;           // key -> job id
  std::map<std::string, std::map<std::string, JobType>> active_;  // exp -> job -> type
  std::atomic<bool> stopping_{false};
  std::unique_ptr<util::ThreadPool> pool_;
};

}  // namespace trinity::service
