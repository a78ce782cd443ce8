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

#include "trinity/kernel/metrics.hpp"

#include "trinity/error.hpp"
#include "trinity/kernel/loss.hpp"

namespace trinity::kernel {
using nlohmann::json;

namespace {

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int class_count)
    : k_(class_count), counts_(static_cast<std::size_t>(class_count) * class_count, 0) {}

void ConfusionMatrix::Add(int truth, int predicted, std::uint64_t n) {
  counts_[static_cast<std::size_t>(truth) * k_ + predicted] += n;
}

std::uint64_t ConfusionMatrix::at(int truth, int predicted) const {
  return counts_[static_cast<std::size_t>(truth) * k_ + predicted];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

void ConfusionMatrix::Merge(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw ValidationError("confusion matrices have different class counts");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

TaskMetrics MetricsFromConfusion(const std::string& task_name, const ConfusionMatrix& cm,
                                 double loss) {
  const int k = cm.class_count();
  TaskMetrics m;
  m.task_name = task_name;
  m.loss = loss;
  m.pixels = cm.total();
  std::uint64_t correct = 0;
  std::vector<std::uint64_t> truth(k, 0), pred(k, 0);
  for (int t = 0; t < k; ++t) {
    for (int p = 0; p < k; ++p) {
      truth[t] += cm.at(t, p);
      pred[p] += cm.at(t, p);
    }
    correct += cm.at(t, t);
  }
  m.accuracy = Ratio(correct, m.pixels);
  m.fiou = 0.0;
  double psum = 0.0, rsum = 0.0, fsum = 0.0;
  for (int c = 0; c < k; ++c) {
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t fp = pred[c] - tp;
    const std::uint64_t fn = truth[c] - tp;
    const double iou = Ratio(tp, tp + fp + fn);
    m.iou.push_back(iou);
    if (m.pixels) m.fiou += static_cast<double>(truth[c]) / static_cast<double>(m.pixels) * iou;
    if (c >= 1) {
      const double p = Ratio(tp, tp + fp);
      const double r = Ratio(tp, tp + fn);
      psum += p;
      rsum += r;
      fsum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
  }
  if (!m.pixels) m.fiou = 1.0;
  m.precision = psum / (k - 1);
  m.recall = rsum / (k - 1);
  m.f1 = fsum / (k - 1);
  return m;
}

void AccumulateConfusion(const Tensor<float>& probs, std::span<const std::uint8_t> labels,
                         ConfusionMatrix& cm) {
  if (labels.size() != probs.plane_size()) {
    throw ValidationError("label plane size does not match predictions");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == labels::kIgnore) continue;
    if (labels[i] >= cm.class_count()) {
      throw ValidationError("label " + std::to_string(labels[i]) + " out of range");
    }
    cm.Add(labels[i], ArgmaxAt(probs, i));
  }
}

MetricsRecord Evaluate(const SegmentationModel<float>& model, const std::vector<Example>& examples,
                       const std::string& split, int epoch) {
  const auto& tasks = model.spec().tasks;
  std::vector<ConfusionMatrix> cms;
  for (const auto& t : tasks) cms.emplace_back(t.class_count);
  std::vector<CrossEntropySum> ce(tasks.size());
  for (const auto& ex : examples) {
    if (ex.labels.size() != tasks.size()) {
      throw ValidationError("example has " + std::to_string(ex.labels.size()) +
                            " label planes; model has " + std::to_string(tasks.size()) +
                            " tasks");
    }
    const auto logits = model.Forward(ex.image);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const auto s = TaskCrossEntropy(logits[t], ex.labels[t]);
      ce[t].sum += s.sum;
      ce[t].valid += s.valid;
      AccumulateConfusion(Softmax(logits[t]), ex.labels[t], cms[t]);
    }
  }
  MetricsRecord rec;
  rec.split = split;
  rec.epoch = epoch;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const double loss = ce[t].valid ? ce[t].sum / static_cast<double>(ce[t].valid) : 0.0;
    rec.tasks.push_back(MetricsFromConfusion(tasks[t].name, cms[t], loss));
    rec.loss += loss;
  }
  return rec;
}

void to_json(json& j, const TaskMetrics& m) {
  j = json{{"task_name", m.task_name}, {"accuracy", m.accuracy}, {"precision", m.precision},
           {"recall", m.recall},       {"f1", m.f1},             {"iou", m.iou},
           {"fiou", m.fiou},           {"loss", m.loss},         {"pixels", m.pixels}};
}

void from_json(const json& j, TaskMetrics& m) {
  j.at("task_name").get_to(m.task_name);
  j.at("accuracy").get_to(m.accuracy);
  j.at("precision").get_to(m.precision);
  j.at("recall").get_to(m.recall);
  j.at("f1").get_to(m.f1);
  j.at("iou").get_to(m.iou);
  j.at("fiou").get_to(m.fiou);
  j.at("loss").get_to(m.loss);
  m.pixels = j.value("pixels", std::uint64_t{0});
}

void to_json(json& j, const MetricsRecord& m) {
  j = json{{"split", m.split}, {"epoch", m.epoch}, {"loss", m.loss}, {"tasks", m.tasks}};
}

void from_json(const json& j, MetricsRecord& m) {
  j.at("split").get_to(m.split);
  j.at("epoch").get_to(m.epoch);
  j.at("loss").get_to(m.loss);
  j.at("tasks").get_to(m.tasks);
}

}  // namespace trinity::kernel
