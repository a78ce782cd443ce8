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

#include "trinity/labels/label_set.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>

#include "trinity/error.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::labels {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ValidateId(const std::string& id, const char* what) {
  static const std::regex re("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, re) || id.front() == '.') {
    throw ValidationError(std::string(what) + " '" + id + "' must match [A-Za-z0-9_.-]+");
  }
}

void ValidateTags(const std::vector<geo::Geometry>& geoms, const TaskSpec& spec) {
  for (const auto& g : geoms) {
    const int tag = g.class_tag.value_or(kDefaultClassTag);
    if (tag < 1 || tag >= spec.class_count) {
      throw ValidationError("class tag " + std::to_string(tag) + " invalid for task '" +
                            spec.name + "' with " + std::to_string(spec.class_count) +
                            " classes");
    }
  }
}

}  // namespace

std::vector<TaskSpec> LabelSet::task_specs() const {
  std::vector<TaskSpec> out;
  for (const auto& t : tasks) out.push_back(t.spec);
  return out;
}

std::set<geo::TileKey> LabelSet::AllLabeledTiles() const {
  std::set<geo::TileKey> out;
  for (const auto& t : tasks) out.insert(t.labeled_tiles.begin(), t.labeled_tiles.end());
  return out;
}

std::size_t LabelSet::TaskIndex(const std::string& task_name) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].spec.name == task_name) return i;
  }
  throw NotFoundError("label set '" + label_set_id + "' has no task '" + task_name + "'");
}

void ValidateTaskSpecs(const std::vector<TaskSpec>& specs) {
  if (specs.empty()) throw ValidationError("at least one task is required");
  std::set<std::string> names;
  for (const auto& s : specs) {
    static const std::regex name_re("[A-Za-z0-9_-]+");
    if (!std::regex_match(s.name, name_re)) {
      throw ValidationError("task name '" + s.name + "' must match [A-Za-z0-9_-]+");
    }
    if (!names.insert(s.name).second) {
      throw ValidationError("duplicate task name '" + s.name + "'");
    }
    if (s.class_count < 2 || s.class_count > kMaxClassCount) {
      throw ValidationError("task '" + s.name + "': class_count must be in [2, 255]");
    }
  }
}

void ValidateLabelSet(const LabelSet& set) {
  ValidateId(set.label_set_id, "label_set_id");
  ValidateTaskSpecs(set.task_specs());
  for (const auto& t : set.tasks) ValidateTags(t.geometries, t.spec);
}

LabelRaster RasterizeLabelSet(const LabelSet& set, const geo::TileKey& tile) {
  LabelRaster raster;
  raster.tile = tile;
  for (const auto& task : set.tasks) {
    bool labeled = task.labeled_tiles.count(tile) > 0;
    if (!labeled) {
      labeled = std::any_of(task.geometries.begin(), task.geometries.end(),
                            [&tile](const auto& g) { return TouchesTile(g, tile); });
    }
    if (labeled) {
      raster.planes.push_back(Rasterize(task.geometries, tile, task.spec.class_count));
    } else {
      raster.planes.emplace_back(geo::kTilePixels, kIgnore);
    }
  }
  return raster;
}

void to_json(json& j, const TaskSpec& s) {
  j = json{{"task_name", s.name}, {"class_count", s.class_count}};
}

void from_json(const json& j, TaskSpec& s) {
  j.at("task_name").get_to(s.name);
  j.at("class_count").get_to(s.class_count);
}

void to_json(json& j, const LabelSet& s) {
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    json geoms = json::array();
    for (const auto& g : t.geometries) geoms.push_back(geo::SerializeWktLine(g));
    tasks.push_back(json{{"task_name", t.spec.name},
                         {"class_count", t.spec.class_count},
                         {"geometries", geoms},
                         {"labeled_tiles", t.labeled_tiles}});
  }
  j = json{{"label_set_id", s.label_set_id}, {"tasks", tasks}};
}

void from_json(const json& j, LabelSet& s) {
  j.at("label_set_id").get_to(s.label_set_id);
  s.tasks.clear();
  for (const auto& jt : j.at("tasks")) {
    TaskLabels t;
    jt.get_to(t.spec);
    std::string text;
    for (const auto& line : jt.at("geometries")) text += line.get<std::string>() + "\n";
    t.geometries = geo::ParseWkt(text);
    for (const auto& k : jt.at("labeled_tiles")) t.labeled_tiles.insert(k.get<geo::TileKey>());
    s.tasks.push_back(std::move(t));
  }
}

const char* TaskStatusName(TaskStatus s) {
  return s == TaskStatus::kOpen ? "open" : "completed";
}

const char* TaskOriginName(TaskOrigin o) {
  return o == TaskOrigin::kManual ? "manual" : "active_learning";
}

TaskOrigin ParseTaskOrigin(const std::string& s) {
  if (s == "manual") return TaskOrigin::kManual;
  if (s == "active_learning") return TaskOrigin::kActiveLearning;
  throw ValidationError("unknown task origin '" + s + "'");
}

void to_json(json& j, const LabelTask& t) {
  j = json{{"task_id", t.task_id},
           {"label_set_id", t.label_set_id},
           {"target_task", t.target_task},
           {"tile_list", t.tiles},
           {"status", TaskStatusName(t.status)},
           {"origin", TaskOriginName(t.origin)}};
}

void from_json(const json& j, LabelTask& t) {
  j.at("task_id").get_to(t.task_id);
  j.at("label_set_id").get_to(t.label_set_id);
  j.at("target_task").get_to(t.target_task);
  j.at("tile_list").get_to(t.tiles);
  t.status = j.at("status").get<std::string>() == "open" ? TaskStatus::kOpen
                                                          : TaskStatus::kCompleted;
  t.origin = ParseTaskOrigin(j.at("origin").get<std::string>());
}

LabelManager::LabelManager(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_ / "tasks");
}

fs::path LabelManager::SetPath(const std::string& id) const { return root_ / (id + ".json"); }

fs::path LabelManager::TaskPath(const std::string& id) const {
  return root_ / "tasks" / (id + ".json");
}

void LabelManager::Save(const LabelSet& set) {
  util::AtomicWriteFile(SetPath(set.label_set_id), json(set).dump(2) + "\n");
}

void LabelManager::SaveTask(const LabelTask& task) {
  util::AtomicWriteFile(TaskPath(task.task_id), json(task).dump(2) + "\n");
}

LabelSet LabelManager::IngestWktText(const std::string& text, const std::string& label_set_id,
                                     const std::vector<TaskSpec>& task_specs,
                                     const geo::BBox& labeled_region,
                                     std::size_t target_task) {
  ValidateId(label_set_id, "label_set_id");
  ValidateTaskSpecs(task_specs);
  if (target_task >= task_specs.size()) throw ValidationError("target task out of range");
  LabelSet set;
  set.label_set_id = label_set_id;
  const auto tiles = geo::TilesCovering(labeled_region);
  for (const auto& spec : task_specs) set.tasks.push_back(TaskLabels{spec, {}, {}});
  set.tasks[target_task].geometries = geo::ParseWkt(text);
  set.tasks[target_task].labeled_tiles.insert(tiles.begin(), tiles.end());
  ValidateLabelSet(set);

  std::lock_guard<std::mutex> lock(mu_);
  if (fs::exists(SetPath(label_set_id))) {
    throw ConflictError("label set '" + label_set_id + "' already exists");
  }
  Save(set);
  return set;
}

LabelSet LabelManager::IngestWktFile(const fs::path& path, const std::string& label_set_id,
                                     const std::vector<TaskSpec>& task_specs,
                                     const geo::BBox& labeled_region,
                                     std::size_t target_task) {
  return IngestWktText(util::ReadTextFile(path), label_set_id, task_specs, labeled_region,
                       target_task);
}

LabelSet LabelManager::Get(const std::string& label_set_id) const {
  ValidateId(label_set_id, "label_set_id");
  const fs::path path = SetPath(label_set_id);
  if (!fs::exists(path)) throw NotFoundError("unknown label set '" + label_set_id + "'");
  return json::parse(util::ReadTextFile(path)).get<LabelSet>();
}

bool LabelManager::Has(const std::string& label_set_id) const {
  return fs::exists(SetPath(label_set_id));
}

std::vector<std::string> LabelManager::List() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LabelSet LabelManager::Copy(const std::string& source_id, const std::string& new_id) {
  ValidateId(new_id, "label_set_id");
  LabelSet set = Get(source_id);
  set.label_set_id = new_id;
  std::lock_guard<std::mutex> lock(mu_);
  if (fs::exists(SetPath(new_id))) {
    throw ConflictError("label set '" + new_id + "' already exists");
  }
  Save(set);
  return set;
}

LabelTask LabelManager::CreateTask(const std::string& label_set_id,
                                   const std::string& target_task,
                                   std::vector<geo::TileKey> tiles, TaskOrigin origin) {
  if (tiles.empty()) throw ValidationError("a labeling task needs at least one tile");
  const LabelSet set = Get(label_set_id);
  set.TaskIndex(target_task);
  std::vector<geo::TileKey> unique;
  std::set<geo::TileKey> seen;
  for (const auto& t : tiles) {
    if (seen.insert(t).second) unique.push_back(t);
  }

  std::lock_guard<std::mutex> lock(mu_);
  std::size_t next = 1;
  for (const auto& entry : fs::directory_iterator(root_ / "tasks")) {
    const std::string stem = entry.path().stem().string();
    if (stem.rfind("lt-", 0) == 0) {
      next = std::max<std::size_t>(next, std::stoul(stem.substr(3)) + 1);
    }
  }
  char id[32];
  std::snprintf(id, sizeof(id), "lt-%06zu", next);
  LabelTask task{id, label_set_id, target_task, std::move(unique), TaskStatus::kOpen, origin};
  SaveTask(task);
  return task;
}

LabelTask LabelManager::GetTask(const std::string& task_id) const {
  ValidateId(task_id, "task_id");
  const fs::path path = TaskPath(task_id);
  if (!fs::exists(path)) throw NotFoundError("unknown labeling task '" + task_id + "'");
  return json::parse(util::ReadTextFile(path)).get<LabelTask>();
}

std::vector<LabelTask> LabelManager::ListTasks() const {
  std::vector<LabelTask> out;
  for (const auto& entry : fs::directory_iterator(root_ / "tasks")) {
    if (entry.path().extension() == ".json") {
      out.push_back(json::parse(util::ReadTextFile(entry.path())).get<LabelTask>());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.task_id < b.task_id; });
  return out;
}

LabelSet LabelManager::AddAnnotations(const std::string& task_id, const std::string& wkt_text) {
  LabelTask task = GetTask(task_id);
  if (task.status != TaskStatus::kOpen) {
    throw StateError("labeling task '" + task_id + "' is already completed");
  }
  LabelSet set = Get(task.label_set_id);
  auto& target = set.tasks[set.TaskIndex(task.target_task)];
  auto added = geo::ParseWkt(wkt_text);
  ValidateTags(added, target.spec);
  target.geometries.insert(target.geometries.end(), added.begin(), added.end());
  target.labeled_tiles.insert(task.tiles.begin(), task.tiles.end());
  task.status = TaskStatus::kCompleted;

  std::lock_guard<std::mutex> lock(mu_);
  Save(set);
  SaveTask(task);
  return set;
}

}  // namespace trinity::labels
