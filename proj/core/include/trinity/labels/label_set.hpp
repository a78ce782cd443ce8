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
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/geo/json.hpp"
#include "trinity/geo/wkt.hpp"
#include "trinity/labels/rasterize.hpp"

namespace trinity::labels {

struct TaskSpec {
  std::string name;
  int class_count = 2;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// Geometries for one task plus the tiles where absence of geometry means
// background. Outside those tiles a task is unlabeled (IGNORE).
struct TaskLabels {
  TaskSpec spec;
  std::vector<geo::Geometry> geometries;
  std::set<geo::TileKey> labeled_tiles;

  friend bool operator==(const TaskLabels&, const TaskLabels&) = default;
};

struct LabelSet {
  std::string label_set_id;
  std::vector<TaskLabels> tasks;

  std::vector<TaskSpec> task_specs() const;
  std::set<geo::TileKey> AllLabeledTiles() const;
  std::size_t TaskIndex(const std::string& task_name) const;  // NotFoundError

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

struct LabelRaster {
  geo::TileKey tile;
  std::vector<LabelPlane> planes;  // one per task, in task order
};

// Unique task names matching [A-Za-z0-9_-]+ (they appear in file paths and
// URLs), class counts in [2, 255], tags in [1, class_count - 1].
void ValidateTaskSpecs(const std::vector<TaskSpec>& specs);
void ValidateLabelSet(const LabelSet& set);

// Per task: rasterized when the tile is in the task's labeled region or any
// of the task's geometries touches the tile; otherwise all IGNORE.
LabelRaster RasterizeLabelSet(const LabelSet& set, const geo::TileKey& tile);

enum class TaskStatus { kOpen, kCompleted };
enum class TaskOrigin { kManual, kActiveLearning };

struct LabelTask {
  std::string task_id;
  std::string label_set_id;  // set that receives the annotations
  std::string target_task;   // task name within that set
  std::vector<geo::TileKey> tiles;
  TaskStatus status = TaskStatus::kOpen;
  TaskOrigin origin = TaskOrigin::kManual;
};

void to_json(nlohmann::json& j, const TaskSpec& s);
void from_json(const nlohmann::json& j, TaskSpec& s);
void to_json(nlohmann::json& j, const LabelSet& s);
void from_json(const nlohmann::json& j, LabelSet& s);
void to_json(nlohmann::json& j, const LabelTask& t);
void from_json(const nlohmann::json& j, LabelTask& t);

const char* TaskStatusName(TaskStatus s);
const char* TaskOriginName(TaskOrigin o);
TaskOrigin ParseTaskOrigin(const std::string& s);

// Persists label sets as <root>/<label_set_id>.json and labeling tasks as
// <root>/tasks/<task_id>.json.
class LabelManager {
 public:
  explicit LabelManager(std::filesystem::path root);

  // Parses the WKT and assigns every geometry to `target_task`, whose labeled
  // region becomes the tiles covering `labeled_region`. Other tasks start
  // unlabeled.
  LabelSet IngestWktText(const std::string& text, const std::string& label_set_id,
                         const std::vector<TaskSpec>& task_specs,
                         const geo::BBox& labeled_region, std::size_t target_task = 0);
  LabelSet IngestWktFile(const std::filesystem::path& path, const std::string& label_set_id,
                         const std::vector<TaskSpec>& task_specs,
                         const geo::BBox& labeled_region, std::size_t target_task = 0);

  LabelSet Get(const std::string& label_set_id) const;
  bool Has(const std::string& label_set_id) const;
  std::vector<std::string> List() const;

  // Copies an existing set under a new id (ConflictError if taken).
  LabelSet Copy(const std::string& source_id, const std::string& new_id);

  LabelTask CreateTask(const std::string& label_set_id, const std::string& target_task,
                       std::vector<geo::TileKey> tiles, TaskOrigin origin);
  LabelTask GetTask(const std::string& task_id) const;
  std::vector<LabelTask> ListTasks() const;

  // Appends the parsed geometries to the task's label set, extends the
  // labeled region by the task's tiles and completes the task.
  LabelSet AddAnnotations(const std::string& task_id, const std::string& wkt_text);

 private:
  void Save(const LabelSet& set);
  void SaveTask(const LabelTask& task);
  std::filesystem::path SetPath(const std::string& id) const;
  std::filesystem::path TaskPath(const std::string& id) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace trinity::labels
