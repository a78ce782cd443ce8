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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/kernel/example.hpp"
#include "trinity/kernel/model.hpp"

namespace trinity::kernel {

// Row = true class, column = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int class_count = 2);

  int class_count() const { return k_; }
  void Add(int truth, int predicted, std::uint64_t n = 1);
  std::uint64_t at(int truth, int predicted) const;
  std::uint64_t total() const;
  void Merge(const ConfusionMatrix& other);

 private:
  int k_;
  std::vector<std::uint64_t> counts_;
};

struct TaskMetrics {
  std::string task_name;
  double accuracy = 1.0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::vector<double> iou;  // per class
  double fiou = 1.0;
  double loss = 0.0;
  std::uint64_t pixels = 0;

  friend bool operator==(const TaskMetrics&, const TaskMetrics&) = default;
};

struct MetricsRecord {
  std::string split;  // "train" or "val"
  int epoch = 0;
  double loss = 0.0;  // sum of task losses
  std::vector<TaskMetrics> tasks;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

void to_json(nlohmann::json& j, const TaskMetrics& m);
void from_json(const nlohmann::json& j, TaskMetrics& m);
void to_json(nlohmann::json& j, const MetricsRecord& m);
void from_json(const nlohmann::json& j, MetricsRecord& m);

// IoU, precision and recall are 1 when their denominator is 0; F1 is 0 when
// precision + recall is 0. Binary tasks report precision/recall/F1 for class
// 1, multi-class tasks the macro average over classes >= 1.
TaskMetrics MetricsFromConfusion(const std::string& task_name, const ConfusionMatrix& cm,
                                 double loss);

// Adds argmax(probs) against labels at every non-IGNORE pixel.
void AccumulateConfusion(const Tensor<float>& probs, std::span<const std::uint8_t> labels,
                         ConfusionMatrix& cm);

// Forward + softmax over every example. Task loss is the mean cross-entropy
// over all valid pixels of all examples.
MetricsRecord Evaluate(const SegmentationModel<float>& model, const std::vector<Example>& examples,
                       const std::string& split, int epoch);

}  // namespace trinity::kernel
