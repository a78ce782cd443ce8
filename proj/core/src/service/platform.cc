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

#include "trinity/service/platform.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "trinity/dataprep/dataset.hpp"
#include "trinity/error.hpp"
#include "trinity/geo/json.hpp"
#include "trinity/inference/predict.hpp"
#include "trinity/kernel/automl.hpp"
#include "trinity/kernel/checkpoint.hpp"
#include "trinity/kernel/trainer.hpp"
#include "trinity/postprocess/export.hpp"
#include "trinity/postprocess/map_match.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kProjects = "projects";
constexpr const char* kExperiments = "experiments";
constexpr const char* kJobs = "jobs";
constexpr const char* kRounds = "rounds";

void RejectUnknownKeys(const json& j, const std::vector<std::string>& allowed, const char* what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(std::string("unknown ") + what + " key '" + key + "'");
    }
  }
}

// Runs `fn`, reporting malformed JSON arguments as validation errors.
template <typename Fn>
auto ParsingArgs(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid ") + what + ": " + e.what());
  }
}

std::string RelModelPath(const std::string& exp, int epoch) {
  return "models/" + exp + "/" + kernel::CheckpointFileName(epoch);
}

kernel::ModelSpec SpecFor(const Experiment& e, const dataprep::DatasetManifest& m) {
  return kernel::ModelSpec{e.config.architecture_id, m.channel_count, m.tasks};
}

// Keeps the metric lines whose epoch is at most `max_epoch`.
void TruncateMetrics(const fs::path& path, int max_epoch) {
  if (!fs::exists(path)) return;
  std::istringstream in(util::ReadTextFile(path));
  std::string kept, line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.value("epoch", 0) <= max_epoch) kept += line + "\n";
  }
  util::AtomicWriteFile(path, kept);
}

std::size_t TaskIndexIn(const json& tasks, const std::string& name, int* class_count) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].at("task_name").get<std::string>() == name) {
      *class_count = tasks[i].at("class_count").get<int>();
      return i;
    }
  }
  throw ValidationError("prediction has no task '" + name + "'");
}

}  // namespace

struct Platform::JobSpec {
  Job job;
  std::function<json(const std::string& job_id)> work;
  std::optional<Event> on_success;
  std::optional<Event> on_failure;
};

Platform::Platform(PlatformOptions options)
    : options_(std::move(options)),
      store_(options_.data_root / "store"),
      labels_(options_.data_root / "labels"),
      meta_(options_.data_root / "meta") {
  if (options_.job_workers == 0) throw ValidationError("job_workers must be positive");
  Recover();
  pool_ = std::make_unique<util::ThreadPool>(options_.job_workers);
}

Platform::~Platform() {
  stopping_ = true;
  pool_.reset();
}

fs::path Platform::DatasetDir(const std::string& exp) const {
  return options_.data_root / "datasets" / exp;
}
fs::path Platform::ModelDir(const std::string& exp) const {
  return options_.data_root / "models" / exp;
}
fs::path Platform::JobDir(const std::string& job) const { return options_.data_root / "jobs" / job; }

void Platform::Recover() {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& doc : meta_.List(kJobs)) {
    Job job = doc.get<Job>();
    if (job.idempotency_key) idempotency_[*job.idempotency_key] = job.job_id;
    if (job.active()) {
      job.status = JobStatus::kFailed;
      job.error = "interrupted: the service stopped before the job finished";
      job.finished_at = NowIso8601();
      SaveJob(job);
      meta_.Audit({{"entity", "job"}, {"id", job.job_id}, {"event", "recovered_failed"}});
    }
  }
  for (const auto& doc : meta_.List(kExperiments)) {
    const Experiment e = doc.get<Experiment>();
    if (e.state == ExperimentState::kDataPrepRunning) {
      TransitionLocked(e.experiment_id, Event::kDataprepFailed);
    } else if (e.state == ExperimentState::kTraining) {
      TransitionLocked(e.experiment_id, Event::kTrainingFailed);
    }
  }
}

// ---- projects and experiments ----

Project Platform::CreateProject(const std::string& name, const std::string& description) {
  if (name.empty()) throw ValidationError("project name must not be empty");
  std::lock_guard<std::mutex> lock(mu_);
  Project p{meta_.NextId("prj"), name, description, {}, NowIso8601()};
  meta_.Put(kProjects, p.project_id, p);
  meta_.Audit({{"entity", "project"}, {"id", p.project_id}, {"event", "create"}});
  return p;
}

Project Platform::GetProject(const std::string& project_id) const {
  return meta_.Get(kProjects, project_id).get<Project>();
}

std::vector<Project> Platform::ListProjects() const {
  std::vector<Project> out;
  for (const auto& doc : meta_.List(kProjects)) out.push_back(doc.get<Project>());
  return out;
}

void Platform::ValidateConfig(const ExperimentConfig& c) const {
  if (!labels_.Has(c.label_set_id)) {
    throw ValidationError("unknown label set '" + c.label_set_id + "'");
  }
  const labels::LabelSet set = labels_.Get(c.label_set_id);
  if (c.profile_ids.empty()) throw ValidationError("at least one profile is required");
  std::set<std::string> seen;
  int channels = 0;
  std::map<std::string, store::ProfileMeta> metas;
  for (const auto& id : c.profile_ids) {
    if (!seen.insert(id).second) throw ValidationError("profile '" + id + "' listed twice");
    if (!store_.HasProfile(id)) throw ValidationError("unknown profile '" + id + "'");
    metas[id] = store_.GetProfile(id);
    channels += metas[id].channel_count;
  }
  for (const auto& [id, range] : c.date_ranges) {
    const auto it = metas.find(id);
    if (it == metas.end()) {
      throw ValidationError("date range given for unselected profile '" + id + "'");
    }
    if (!it->second.temporal) {
      throw ValidationError("date range given for non-temporal profile '" + id + "'");
    }
    if (!store::IsIsoDate(range.from) || !store::IsIsoDate(range.to) || range.from > range.to) {
      throw ValidationError("invalid date range for profile '" + id + "'");
    }
  }
  kernel::ValidateModelSpec(kernel::ModelSpec{c.architecture_id, channels, set.task_specs()});
  kernel::ValidateHyperparams(c.hyperparams);
  if (!(c.val_fraction > 0.0 && c.val_fraction < 1.0)) {
    throw ValidationError("val_fraction must be in (0, 1)");
  }
  if (c.checkpoint_every < 1) throw ValidationError("checkpoint_every must be >= 1");
}

Experiment Platform::LoadExperiment(const std::string& id) const {
  return meta_.Get(kExperiments, id).get<Experiment>();
}

void Platform::SaveExperiment(Experiment& e) {
  e.updated_at = NowIso8601();
  meta_.Put(kExperiments, e.experiment_id, e);
}

Experiment Platform::CreateExperiment(const std::string& project_id, const json& config) {
  RejectUnknownKeys(config, ConfigKeys(), "config");
  ExperimentConfig c;
  ParsingArgs("config", [&] { ApplyConfigJson(config, c); });
  ValidateConfig(c);

  std::lock_guard<std::mutex> lock(mu_);
  Project p = GetProject(project_id);
  Experiment e;
  e.experiment_id = meta_.NextId("exp");
  e.project_id = project_id;
  e.config = std::move(c);
  e.created_at = NowIso8601();
  SaveExperiment(e);
  p.experiment_ids.push_back(e.experiment_id);
  meta_.Put(kProjects, p.project_id, p);
  meta_.Audit({{"entity", "experiment"},
               {"id", e.experiment_id},
               {"event", "create"},
               {"to", StateName(e.state)}});
  return e;
}

Experiment Platform::GetExperiment(const std::string& experiment_id) const {
  return LoadExperiment(experiment_id);
}

std::vector<Experiment> Platform::ListExperiments(const std::string& project_id) const {
  const Project p = GetProject(project_id);
  std::vector<Experiment> out;
  for (const auto& id : p.experiment_ids) out.push_back(LoadExperiment(id));
  return out;
}

Experiment Platform::CloneLocked(const Experiment& source, const json& overrides) {
  RejectUnknownKeys(overrides, ConfigKeys(), "override");
  ExperimentConfig c = source.config;
  ParsingArgs("overrides", [&] { ApplyConfigJson(overrides, c); });
  ValidateConfig(c);

  Project p = GetProject(source.project_id);
  Experiment e;
  e.experiment_id = meta_.NextId("exp");
  e.project_id = source.project_id;
  e.config = std::move(c);
  e.parent_id = source.experiment_id;
  e.created_at = NowIso8601();
  SaveExperiment(e);
  p.experiment_ids.push_back(e.experiment_id);
  meta_.Put(kProjects, p.project_id, p);
  meta_.Audit({{"entity", "experiment"},
               {"id", e.experiment_id},
               {"event", "clone"},
               {"parent_id", source.experiment_id},
               {"to", StateName(e.state)}});
  return e;
}

Experiment Platform::CloneExperiment(const std::string& experiment_id, const json& overrides) {
  std::lock_guard<std::mutex> lock(mu_);
  return CloneLocked(LoadExperiment(experiment_id), overrides.is_null() ? json::object() : overrides);
}

std::vector<std::string> Platform::Lineage(const std::string& experiment_id) const {
  std::vector<std::string> out;
  Experiment e = LoadExperiment(experiment_id);
  while (e.parent_id) {
    out.push_back(*e.parent_id);
    e = LoadExperiment(*e.parent_id);
  }
  return out;
}

Experiment Platform::PatchExperiment(const std::string& experiment_id, const json& patch) {
  RejectUnknownKeys(patch, {"tags", "notes"}, "patch");
  std::lock_guard<std::mutex> lock(mu_);
  Experiment e = LoadExperiment(experiment_id);
  ParsingArgs("patch", [&] {
    if (patch.contains("tags")) e.tags = patch["tags"].get<std::vector<std::string>>();
    if (patch.contains("notes")) e.notes = patch["notes"].get<std::string>();
  });
  SaveExperiment(e);
  return e;
}

Experiment Platform::TransitionLocked(const std::string& experiment_id, Event event) {
  Experiment e = LoadExperiment(experiment_id);
  const ExperimentState from = e.state;
  e.state = ApplyEvent(from, event);
  SaveExperiment(e);
  meta_.Audit({{"entity", "experiment"},
               {"id", experiment_id},
               {"event", EventName(event)},
               {"from", StateName(from)},
               {"to", StateName(e.state)}});
  return e;
}

Experiment Platform::Transition(const std::string& experiment_id, Event event) {
  std::lock_guard<std::mutex> lock(mu_);
  return TransitionLocked(experiment_id, event);
}

std::string Platform::MetricsHistory(const std::string& experiment_id) const {
  LoadExperiment(experiment_id);
  const fs::path path = ModelDir(experiment_id) / "metrics.jsonl";
  return fs::exists(path) ? util::ReadTextFile(path) : std::string();
}

// ---- jobs ----

Job Platform::LoadJob(const std::string& id) const { return meta_.Get(kJobs, id).get<Job>(); }

void Platform::SaveJob(const Job& job) { meta_.Put(kJobs, job.job_id, job); }

Job Platform::GetJob(const std::string& job_id) const { return LoadJob(job_id); }

std::vector<Job> Platform::ListJobs() const {
  std::vector<Job> out;
  for (const auto& doc : meta_.List(kJobs)) out.push_back(doc.get<Job>());
  return out;
}

std::optional<Job> Platform::FindIdempotent(const json& args, const std::string& experiment_id,
                                            JobType type) const {
  if (!args.contains("idempotency_key") || args["idempotency_key"].is_null()) return std::nullopt;
  const auto key = ParsingArgs("idempotency_key",
                               [&] { return args["idempotency_key"].get<std::string>(); });
  const auto it = idempotency_.find(key);
  if (it == idempotency_.end()) return std::nullopt;
  Job job = LoadJob(it->second);
  if (job.experiment_id != experiment_id || job.type != type) {
    throw ConflictError("idempotency key '" + key + "' belongs to a different request");
  }
  return job;
}

void Platform::CheckNoActive(const std::string& experiment_id,
                             std::initializer_list<JobType> types) const {
  const auto it = active_.find(experiment_id);
  if (it == active_.end()) return;
  for (const auto& [job_id, type] : it->second) {
    if (std::find(types.begin(), types.end(), type) != types.end()) {
      throw ConflictError("experiment '" + experiment_id + "' already has an active " +
                          JobTypeName(type) + " job (" + job_id + ")");
    }
  }
}

Job Platform::Launch(JobSpec spec) {
  Job& job = spec.job;
  job.job_id = meta_.NextId("job");
  job.status = JobStatus::kQueued;
  job.created_at = NowIso8601();
  if (job.args.contains("idempotency_key") && !job.args["idempotency_key"].is_null()) {
    job.idempotency_key = job.args["idempotency_key"].get<std::string>();
    idempotency_[*job.idempotency_key] = job.job_id;
  }
  SaveJob(job);
  active_[job.experiment_id][job.job_id] = job.type;
  meta_.Audit({{"entity", "job"},
               {"id", job.job_id},
               {"event", "submit"},
               {"experiment_id", job.experiment_id},
               {"type", JobTypeName(job.type)}});

  pool_->Submit([this, id = job.job_id, exp = job.experiment_id, work = std::move(spec.work),
                 on_success = spec.on_success, on_failure = spec.on_failure] {
    {
      std::lock_guard<std::mutex> lock(mu_);
      Job j = LoadJob(id);
      j.status = JobStatus::kRunning;
      j.started_at = NowIso8601();
      SaveJob(j);
    }
    json result;
    std::string error;
    bool ok = false;
    try {
      if (stopping_) throw StateError("the service is shutting down");
      result = work(id);
      ok = true;
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard<std::mutex> lock(mu_);
    const std::optional<Event> event = ok ? on_success : on_failure;
    if (event) {
      try {
        TransitionLocked(exp, *event);
      } catch (const std::exception& e) {
        ok = false;
        error = e.what();
      }
    }
    Job j = LoadJob(id);
    j.status = ok ? JobStatus::kDone : JobStatus::kFailed;
    if (ok) j.result = std::move(result);
    j.error = error;
    j.finished_at = NowIso8601();
    SaveJob(j);
    active_[exp].erase(id);
    if (active_[exp].empty()) active_.erase(exp);
    meta_.Audit({{"entity", "job"}, {"id", id}, {"event", ok ? "done" : "failed"}});
  });
  return job;
}

void Platform::WaitForJobs() { pool_->WaitIdle(); }

Job Platform::RunDataprep(const std::string& experiment_id, const json& args) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto prior = FindIdempotent(args, experiment_id, JobType::kDataprep)) return *prior;
  const Experiment e = LoadExperiment(experiment_id);
  CheckNoActive(experiment_id, {JobType::kDataprep});
  ApplyEvent(e.state, Event::kStartDataprep);
  ValidateConfig(e.config);

  const ExperimentConfig& c = e.config;
  dataprep::DatasetSpec spec;
  spec.profile_ids = c.profile_ids;
  spec.date_ranges = c.date_ranges;
  spec.label_set_id = c.label_set_id;
  if (c.transient_dir) spec.transient_dir = fs::path(*c.transient_dir);
  spec.val_fraction = c.val_fraction;
  spec.split_seed = c.split_seed;

  TransitionLocked(experiment_id, Event::kStartDataprep);
  JobSpec job;
  job.job.experiment_id = experiment_id;
  job.job.type = JobType::kDataprep;
  job.job.args = args;
  job.on_success = Event::kDataprepSucceeded;
  job.on_failure = Event::kDataprepFailed;
  job.work = [this, experiment_id, spec](const std::string&) {
    const dataprep::Dataset ds = dataprep::BuildDataset(store_, labels_, spec,
                                                        options_.train_threads);
    const fs::path dir = DatasetDir(experiment_id);
    fs::remove_all(dir);
    dataprep::SaveDataset(dir, ds);
    {
      std::lock_guard<std::mutex> lock(mu_);
      Experiment e = LoadExperiment(experiment_id);
      e.channel_count = ds.manifest.channel_count;
      SaveExperiment(e);
    }
    return json{{"channel_count", ds.manifest.channel_count},
                {"channel_names", ds.manifest.channel_names},
                {"train_tiles", ds.manifest.train_tiles.size()},
                {"val_tiles", ds.manifest.val_tiles.size()}};
  };
  return Launch(std::move(job));
}

Job Platform::RunTraining(const std::string& experiment_id, const json& args) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto prior = FindIdempotent(args, experiment_id, JobType::kTrain)) return *prior;
  Experiment e = LoadExperiment(experiment_id);
  CheckNoActive(experiment_id, {JobType::kTrain, JobType::kAutoml});
  ApplyEvent(e.state, Event::kStartTraining);

  const dataprep::DatasetManifest manifest = dataprep::LoadManifest(DatasetDir(experiment_id));
  const kernel::ModelSpec spec = SpecFor(e, manifest);
  kernel::Hyperparams hp = e.config.hyperparams;
  std::optional<kernel::Checkpoint> warm;
  int keep_upto = -1;  // own checkpoints and metric lines kept, by epoch
  ParsingArgs("training arguments", [&] {
    RejectUnknownKeys(args, {"warm_start", "epochs", "idempotency_key"}, "training argument");
    if (args.contains("epochs")) hp.epochs = args["epochs"].get<int>();
    const json ws = args.value("warm_start", json(false));
    if (ws.is_boolean() && !ws.get<bool>()) return;
    std::string source = experiment_id;
    std::optional<int> epoch;
    if (ws.is_object()) {
      source = ws.value("experiment_id", experiment_id);
      if (ws.contains("epoch")) epoch = ws["epoch"].get<int>();
    } else if (!ws.is_boolean()) {
      throw ValidationError("warm_start must be a boolean or {experiment_id, epoch}");
    }
    const Experiment src = source == experiment_id ? e : LoadExperiment(source);
    if (src.checkpoints.empty()) {
      throw ValidationError("experiment '" + source + "' has no checkpoint to warm start from");
    }
    const CheckpointRef* ref = &src.checkpoints.back();
    if (epoch) {
      const auto it = std::find_if(src.checkpoints.begin(), src.checkpoints.end(),
                                   [&](const auto& c) { return c.epoch == *epoch; });
      if (it == src.checkpoints.end()) {
        throw ValidationError("experiment '" + source + "' has no checkpoint at epoch " +
                              std::to_string(*epoch));
      }
      ref = &*it;
    }
    warm = kernel::LoadCheckpoint(options_.data_root / ref->path);
    if (warm->spec != spec) {
      throw ValidationError("warm start checkpoint of '" + source +
                            "' does not match this experiment's architecture, channels and tasks");
    }
    if (source == experiment_id) keep_upto = ref->epoch;
  });
  if (warm) {
    if (hp.epochs < 0) throw ValidationError("epochs must be >= 0");
  } else {
    kernel::ValidateHyperparams(hp);
  }

  const fs::path model_dir = ModelDir(experiment_id);
  std::vector<CheckpointRef> kept;
  for (const auto& ref : e.checkpoints) {
    if (ref.epoch <= keep_upto) {
      kept.push_back(ref);
    } else {
      fs::remove(options_.data_root / ref.path);
    }
  }
  e.checkpoints = kept;
  SaveExperiment(e);
  fs::create_directories(model_dir);
  TruncateMetrics(model_dir / "metrics.jsonl", keep_upto);
  fs::remove(model_dir / "automl.json");

  TransitionLocked(experiment_id, Event::kStartTraining);
  JobSpec job;
  job.job.experiment_id = experiment_id;
  job.job.type = JobType::kTrain;
  job.job.args = args;
  job.on_success = Event::kTrainingSucceeded;
  job.on_failure = Event::kTrainingFailed;
  const int checkpoint_every = e.config.checkpoint_every;
  job.work = [this, experiment_id, spec, hp, warm, checkpoint_every,
              model_dir](const std::string&) {
    const dataprep::Dataset ds = dataprep::LoadDataset(DatasetDir(experiment_id));
    kernel::TrainOptions opt;
    opt.hp = hp;
    opt.checkpoint_every = checkpoint_every;
    opt.warm_start = warm;
    opt.checkpoint_dir = model_dir;
    opt.threads = options_.train_threads;
    const auto observer = [&](const kernel::EpochReport& r) {
      util::AppendLine(model_dir / "metrics.jsonl", json(r.train).dump());
      util::AppendLine(model_dir / "metrics.jsonl", json(r.val).dump());
      if (!r.checkpoint_path.empty()) {
        std::lock_guard<std::mutex> lock(mu_);
        Experiment cur = LoadExperiment(experiment_id);
        cur.checkpoints.push_back({r.epoch, RelModelPath(experiment_id, r.epoch)});
        SaveExperiment(cur);
      }
      if (stopping_) throw StateError("training interrupted by service shutdown");
    };
    const kernel::TrainResult r = kernel::Train(ds.train, ds.val, spec, opt, observer);
    return json{{"final_epoch", r.final_checkpoint.epoch},
                {"final_val", r.final_val},
                {"checkpoint_epochs", r.checkpoint_epochs}};
  };
  return Launch(std::move(job));
}

Job Platform::RunAutoml(const std::string& experiment_id, const json& args) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto prior = FindIdempotent(args, experiment_id, JobType::kAutoml)) return *prior;
  Experiment e = LoadExperiment(experiment_id);
  CheckNoActive(experiment_id, {JobType::kTrain, JobType::kAutoml});
  ApplyEvent(e.state, Event::kStartTraining);

  const dataprep::DatasetManifest manifest = dataprep::LoadManifest(DatasetDir(experiment_id));
  const kernel::ModelSpec spec = SpecFor(e, manifest);
  kernel::Hyperparams base = e.config.hyperparams;
  kernel::SearchSpace space;
  int n_trials = 4;
  std::size_t parallelism = 1;
  std::uint64_t seed = 0;
  ParsingArgs("AutoML arguments", [&] {
    RejectUnknownKeys(args,
                      {"search_space", "n_trials", "parallelism", "seed", "epochs",
                       "idempotency_key"},
                      "AutoML argument");
    if (args.contains("search_space")) space = args["search_space"].get<kernel::SearchSpace>();
    n_trials = args.value("n_trials", n_trials);
    const int par = args.value("parallelism", 1);
    if (par < 1) throw ValidationError("parallelism must be >= 1");
    parallelism = static_cast<std::size_t>(par);
    seed = args.value("seed", seed);
    if (args.contains("epochs")) base.epochs = args["epochs"].get<int>();
  });
  if (n_trials < 1) throw ValidationError("n_trials must be >= 1");
  if (space.batch_sizes.empty() || !(space.lr_lo > 0.0) || space.lr_lo > space.lr_hi) {
    throw ValidationError("invalid search space");
  }
  kernel::ValidateHyperparams(base);

  const fs::path model_dir = ModelDir(experiment_id);
  fs::remove_all(model_dir);
  fs::create_directories(model_dir);
  e.checkpoints.clear();
  SaveExperiment(e);

  TransitionLocked(experiment_id, Event::kStartTraining);
  JobSpec job;
  job.job.experiment_id = experiment_id;
  job.job.type = JobType::kAutoml;
  job.job.args = args;
  job.on_success = Event::kTrainingSucceeded;
  job.on_failure = Event::kTrainingFailed;
  job.work = [=, this](const std::string&) {
    const dataprep::Dataset ds = dataprep::LoadDataset(DatasetDir(experiment_id));
    const kernel::AutoMlResult r = kernel::AutoMlSearch(ds.train, ds.val, spec, space, base,
                                                        n_trials, parallelism, seed);
    const kernel::TrialRecord& best = r.trials[r.best_trial];
    const int epoch = r.best_checkpoint.epoch;
    kernel::SaveCheckpoint(model_dir / kernel::CheckpointFileName(epoch), r.best_checkpoint);
    const json table{{"search_space", space}, {"n_trials", n_trials},
                     {"parallelism", parallelism}, {"seed", seed},
                     {"trials", r.trials},         {"best_trial", r.best_trial}};
    util::AtomicWriteFile(model_dir / "automl.json", table.dump(2) + "\n");
    util::AtomicWriteFile(model_dir / "metrics.jsonl", json(best.final_val).dump() + "\n");
    {
      std::lock_guard<std::mutex> lock(mu_);
      Experiment cur = LoadExperiment(experiment_id);
      cur.config.hyperparams = best.hp;
      cur.checkpoints = {{epoch, RelModelPath(experiment_id, epoch)}};
      SaveExperiment(cur);
    }
    return json{{"best_trial", r.best_trial},
                {"best_hyperparams", best.hp},
                {"best_final_val_loss", best.final_val_loss},
                {"trials", r.trials}};
  };
  return Launch(std::move(job));
}

Job Platform::RunPrediction(const std::string& experiment_id, const json& args) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto prior = FindIdempotent(args, experiment_id, JobType::kPredict)) return *prior;
  Experiment e = LoadExperiment(experiment_id);
  const bool allowed = e.state == ExperimentState::kTrained ||
                       (e.state == ExperimentState::kTraining && !e.checkpoints.empty());
  if (!allowed) {
    throw StateError(std::string("prediction needs a TRAINED experiment or one TRAINING with a "
                                 "checkpoint; experiment is ") +
                     StateName(e.state));
  }
  if (e.checkpoints.empty()) throw StateError("experiment has no checkpoint");

  geo::BBox bbox;
  CheckpointRef ref = e.checkpoints.back();
  inference::PredictOptions popt;
  popt.workers = options_.predict_workers;
  ParsingArgs("prediction arguments", [&] {
    RejectUnknownKeys(args,
                      {"bbox", "epoch", "date_overrides", "render_png", "idempotency_key"},
                      "prediction argument");
    if (!args.contains("bbox")) throw ValidationError("bbox is required");
    bbox = args["bbox"].get<geo::BBox>();
    if (args.contains("epoch")) {
      const int epoch = args["epoch"].get<int>();
      const auto it = std::find_if(e.checkpoints.begin(), e.checkpoints.end(),
                                   [&](const auto& c) { return c.epoch == epoch; });
      if (it == e.checkpoints.end()) {
        throw ValidationError("no checkpoint at epoch " + std::to_string(epoch));
      }
      ref = *it;
    }
    if (args.contains("date_overrides")) {
      popt.date_overrides = args["date_overrides"].get<dataprep::DateOverrides>();
    }
    popt.render_png = args.value("render_png", true);
  });
  if (!(bbox.min.lon < bbox.max.lon && bbox.min.lat < bbox.max.lat)) {
    throw ValidationError("bbox must have min < max");
  }
  geo::ValidateLatLon(bbox.min);
  geo::ValidateLatLon(bbox.max);

  auto ckpt = std::make_shared<const kernel::Checkpoint>(
      kernel::LoadCheckpoint(options_.data_root / ref.path));
  auto manifest = std::make_shared<const dataprep::DatasetManifest>(
      dataprep::LoadManifest(DatasetDir(experiment_id)));

  JobSpec job;
  job.job.experiment_id = experiment_id;
  job.job.type = JobType::kPredict;
  job.job.args = args;
  job.job.args["epoch"] = ref.epoch;
  job.job.args["checkpoint"] = ref.path;
  job.work = [this, ckpt, manifest, bbox, popt, epoch = ref.epoch](const std::string& id) {
    const kernel::SegmentationModel<float> model(ckpt->spec, ckpt->parameters);
    const auto summary = inference::PredictRegion(model, store_, *manifest, bbox, JobDir(id), popt);
    return json{{"epoch", epoch},
                {"tiles", summary.tiles},
                {"tile_count", summary.tiles.size()},
                {"tasks", manifest->tasks}};
  };
  const Job launched = Launch(std::move(job));
  e = LoadExperiment(experiment_id);
  e.prediction_job_ids.push_back(launched.job_id);
  SaveExperiment(e);
  return launched;
}

// ---- prediction consumers ----

Job Platform::RequireFinishedPrediction(const std::string& job_id) const {
  const Job job = LoadJob(job_id);
  if (job.type != JobType::kPredict) {
    throw ValidationError("job '" + job_id + "' is not a prediction job");
  }
  if (job.status != JobStatus::kDone) {
    throw StateError("prediction job '" + job_id + "' is " + JobStatusName(job.status) +
                     ", not done");
  }
  return job;
}

std::vector<inference::Heatmap> Platform::PredictionHeatmaps(const std::string& job_id) const {
  const Job job = RequireFinishedPrediction(job_id);
  std::vector<inference::Heatmap> out;
  for (const auto& t : job.result.at("tiles")) {
    out.push_back(inference::LoadHeatmap(inference::HeatmapPath(JobDir(job_id), t.get<geo::TileKey>())));
  }
  return out;
}

store::ProfileMeta Platform::IngestPredictionAsProfile(const std::string& job_id,
                                                       const std::string& profile_id,
                                                       const std::string& description) {
  const Job job = RequireFinishedPrediction(job_id);
  const auto tiles = job.result.at("tiles").get<std::vector<geo::TileKey>>();
  const auto tasks = job.result.at("tasks").get<std::vector<labels::TaskSpec>>();
  return inference::IngestHeatmapsAsProfile(store_, JobDir(job_id), tiles, tasks, profile_id,
                                            description);
}

std::vector<std::uint8_t> Platform::PredictionTilePng(const std::string& job_id,
                                                      const std::string& task, int class_index,
                                                      const geo::TileKey& tile) const {
  RequireFinishedPrediction(job_id);
  const fs::path path = inference::VizPath(JobDir(job_id), task, class_index, tile);
  if (!fs::exists(path)) throw NotFoundError("no heatmap tile at " + path.string());
  return util::ReadBinaryFile(path);
}

GoldenReport Platform::EvaluateAgainstGolden(const std::string& job_id,
                                             const std::string& golden_wkt,
                                             const std::string& task, int class_index,
                                             double tau) const {
  const Job job = RequireFinishedPrediction(job_id);
  int class_count = 0;
  const std::size_t t = TaskIndexIn(job.result.at("tasks"), task, &class_count);
  const auto golden = geo::ParseWkt(golden_wkt);
  return EvaluateGolden(PredictionHeatmaps(job_id), t, class_count, class_index, tau, golden);
}

json Platform::Postprocess(const std::string& job_id, const json& request) {
  const Job job = RequireFinishedPrediction(job_id);
  const json& tasks = job.result.at("tasks");
  return ParsingArgs("postprocess request", [&] {
    const std::string op = request.at("op").get<std::string>();
    if (op != "vectorize" && op != "mapmatch" && op != "filter") {
      throw ValidationError("unknown postprocess op '" + op + "'");
    }
    const std::string task =
        request.value("task", tasks.at(0).at("task_name").get<std::string>());
    int class_count = 0;
    const std::size_t t = TaskIndexIn(tasks, task, &class_count);
    const int class_index = request.value("class_index", 1);
    if (class_index < 0 || class_index >= class_count) {
      throw ValidationError("class_index out of range");
    }
    const double tau = request.value("tau", 0.5);
    const auto points = postprocess::ThresholdFilter(PredictionHeatmaps(job_id), t, class_index, tau);
    const std::string source = op == "filter" ? request.value("source", "vectorize") : op;
    const auto atoms = postprocess::ParsePredicate(
        op == "filter" ? request.at("predicate").get<std::string>() : std::string());

    json out{{"op", op}, {"task", task}, {"class_index", class_index}, {"tau", tau},
             {"points", points.size()}};
    std::string wkt;
    json geojson;
    if (source == "vectorize") {
      const double eps = request.value("eps", 1.5);
      const double min_weight = request.value("min_weight", 4.0);
      auto polygons = postprocess::ClustersToPolygons(
          postprocess::WeightedDbscan(points, eps, min_weight), points);
      std::vector<postprocess::FilterItem> items;
      for (const auto& p : polygons) items.push_back(postprocess::ToFilterItem(p));
      std::vector<postprocess::ClusterPolygon> kept;
      for (std::size_t i : postprocess::PredicateFilter(items, atoms)) kept.push_back(polygons[i]);
      wkt = postprocess::PolygonsToWkt(kept);
      geojson = postprocess::PolygonsToGeoJson(kept);
      out["count"] = kept.size();
    } else if (source == "mapmatch") {
      const auto network = postprocess::ParseRoadNetwork(request.at("network").get<std::string>());
      const auto scores = postprocess::MapMatch(points, network, request.value("radius_m", 5.0),
                                                request.value("score_tau", 0.0));
      std::vector<postprocess::FilterItem> items;
      for (const auto& s : scores) items.push_back(postprocess::ToFilterItem(s));
      std::vector<postprocess::SegmentScore> kept;
      for (std::size_t i : postprocess::PredicateFilter(items, atoms)) kept.push_back(scores[i]);
      wkt = postprocess::SegmentsToWkt(kept, network);
      geojson = postprocess::SegmentsToGeoJson(kept, network);
      out["count"] = kept.size();
    } else {
      throw ValidationError("filter source must be vectorize or mapmatch");
    }
    const fs::path post = JobDir(job_id) / "post";
    util::AtomicWriteFile(post / (op + ".wkt"), wkt);
    util::AtomicWriteFile(post / (op + ".geojson"), geojson.dump() + "\n");
    out["wkt"] = wkt;
    out["geojson"] = geojson;
    return out;
  });
}

// ---- active learning ----

ActiveLearningRound Platform::ActiveLearningSelect(const std::string& job_id, int k,
                                                   const std::optional<std::string>& target_task) {
  if (k < 1) throw ValidationError("k must be >= 1");
  const Job job = RequireFinishedPrediction(job_id);
  const Experiment e = LoadExperiment(job.experiment_id);
  const labels::LabelSet set = labels_.Get(e.config.label_set_id);
  const std::string task = target_task.value_or(set.tasks.at(0).spec.name);
  set.TaskIndex(task);

  std::vector<RankedTile> candidates;
  for (const auto& hm : PredictionHeatmaps(job_id)) {
    candidates.push_back({hm.tile, TileUncertainty(hm)});
  }
  auto ranked = RankByUncertainty(std::move(candidates), set.AllLabeledTiles());
  if (ranked.empty()) {
    throw ValidationError("every predicted tile is already labeled; nothing to select");
  }

  std::lock_guard<std::mutex> lock(mu_);
  ActiveLearningRound round;
  round.round_id = meta_.NextId("al");
  round.experiment_id = e.experiment_id;
  round.prediction_job_id = job_id;
  round.requested_k = k;
  round.k = std::min<int>(k, static_cast<int>(ranked.size()));
  if (round.k < k) {
    round.warning = "requested " + std::to_string(k) + " tiles but only " +
                    std::to_string(ranked.size()) + " unlabeled predicted tiles exist";
  }
  ranked.resize(round.k);
  round.tiles = ranked;
  round.label_set_id = set.label_set_id + "_" + round.round_id;
  round.target_task = task;
  labels_.Copy(set.label_set_id, round.label_set_id);
  std::vector<geo::TileKey> tiles;
  for (const auto& r : ranked) tiles.push_back(r.tile);
  round.label_task_id = labels_.CreateTask(round.label_set_id, task, tiles,
                                           labels::TaskOrigin::kActiveLearning)
                            .task_id;
  round.created_at = NowIso8601();
  meta_.Put(kRounds, round.round_id, round);
  meta_.Audit({{"entity", "round"}, {"id", round.round_id}, {"event", "select"}});
  return round;
}

ActiveLearningRound Platform::GetRound(const std::string& round_id) const {
  return meta_.Get(kRounds, round_id).get<ActiveLearningRound>();
}

Experiment Platform::ActiveLearningComplete(const std::string& round_id) {
  std::lock_guard<std::mutex> lock(mu_);
  ActiveLearningRound round = GetRound(round_id);
  if (round.clone_experiment_id) return LoadExperiment(*round.clone_experiment_id);
  const labels::LabelTask task = labels_.GetTask(round.label_task_id);
  if (task.status != labels::TaskStatus::kCompleted) {
    throw StateError("labeling task '" + task.task_id + "' of round '" + round_id +
                     "' is still open");
  }
  const Experiment clone =
      CloneLocked(LoadExperiment(round.experiment_id), json{{"label_set_id", round.label_set_id}});
  round.clone_experiment_id = clone.experiment_id;
  meta_.Put(kRounds, round.round_id, round);
  meta_.Audit({{"entity", "round"}, {"id", round.round_id}, {"event", "complete"}});
  return clone;
}

labels::LabelSet Platform::UploadLabels(const std::string& wkt_text,
                                        const std::string& label_set_id,
                                        const std::vector<labels::TaskSpec>& tasks,
                                        const geo::BBox& labeled_region,
                                        const std::string& target_task) {
  std::size_t target = 0;
  if (!target_task.empty()) {
    const auto it = std::find_if(tasks.begin(), tasks.end(),
                                 [&](const auto& t) { return t.name == target_task; });
    if (it == tasks.end()) throw ValidationError("unknown target task '" + target_task + "'");
    target = static_cast<std::size_t>(it - tasks.begin());
  }
  return labels_.IngestWktText(wkt_text, label_set_id, tasks, labeled_region, target);
}

}  // namespace trinity::service
