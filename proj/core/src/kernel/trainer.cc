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

#include "trinity/kernel/trainer.hpp"

#include <cstdio>
#include <numeric>

#include "trinity/error.hpp"
#include "trinity/kernel/loss.hpp"
#include "trinity/util/parallel.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::kernel {
namespace {

void CheckExamples(const std::vector<Example>& examples, const ModelSpec& spec,
                   const char* what) {
  for (const auto& ex : examples) {
    if (ex.image.channels != spec.in_channels) {
      throw ValidationError(std::string(what) + " example " + ex.tile.ToString() + " has " +
                            std::to_string(ex.image.channels) + " channels; model expects " +
                            std::to_string(spec.in_channels));
    }
    if (ex.labels.size() != spec.tasks.size()) {
      throw ValidationError(std::string(what) + " example " + ex.tile.ToString() +
                            " has the wrong number of label planes");
    }
    for (const auto& plane : ex.labels) {
      if (plane.size() != ex.image.plane_size()) {
        throw ValidationError(std::string(what) + " example " + ex.tile.ToString() +
                              " has a label plane of the wrong size");
      }
    }
  }
}

struct ExampleStep {
  Parameters<float> grads;
  std::vector<CrossEntropySum> ce;
  std::vector<ConfusionMatrix> cms;
};

ExampleStep RunExample(const SegmentationModel<float>& model, const Example& ex,
                       const std::vector<double>& normalizers) {
  const auto& tasks = model.spec().tasks;
  ForwardCache<float> cache;
  const auto logits = model.Forward(ex.image, &cache);
  ExampleStep out;
  std::vector<Tensor<float>> upstream;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    out.ce.push_back(TaskCrossEntropy(logits[t], ex.labels[t]));
    const auto probs = Softmax(logits[t]);
    out.cms.emplace_back(tasks[t].class_count);
    AccumulateConfusion(probs, ex.labels[t], out.cms.back());
    upstream.push_back(TaskCrossEntropyGrad(probs, ex.labels[t], normalizers[t]));
  }
  out.grads = model.Backward(cache, upstream);
  return out;
}

void AddInto(Parameters<float>& acc, const Parameters<float>& g) {
  for (std::size_t k = 0; k < acc.tensors.size(); ++k) {
    auto& a = acc.tensors[k].values;
    const auto& b = g.tensors[k].values;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
}

nlohmann::json Snapshot(const MetricsRecord* train, const MetricsRecord& val) {
  nlohmann::json j = nlohmann::json::object();
  if (train) j["train"] = *train;
  j["val"] = val;
  return j;
}

}  // namespace

std::string CheckpointFileName(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%04d.trnk", epoch);
  return buf;
}

TrainResult Train(const std::vector<Example>& train, const std::vector<Example>& val,
                  const ModelSpec& spec, const TrainOptions& options,
                  const EpochObserver& observer) {
  const Hyperparams& hp = options.hp;
  ValidateModelSpec(spec);
  ValidateHyperparams(hp);
  if (options.checkpoint_every < 1) throw ValidationError("checkpoint_every must be >= 1");
  if (!options.warm_start && hp.epochs < 1) throw ValidationError("epochs must be >= 1");
  if (train.empty() && hp.epochs > 0) throw ValidationError("training set is empty");
  CheckExamples(train, spec, "training");
  CheckExamples(val, spec, "validation");

  Parameters<float> init;
  AdamState adam;
  int epoch = 0;
  nlohmann::json warm_train_metrics;
  if (options.warm_start) {
    const Checkpoint& w = *options.warm_start;
    if (!(w.spec == spec)) {
      throw ValidationError(
          "warm start checkpoint is incompatible: architecture, input channels and tasks must "
          "match the experiment");
    }
    init = w.parameters;
    adam = w.optimizer ? *w.optimizer : ZeroAdamState(init);
    epoch = w.epoch;
    if (w.metrics.contains("train")) warm_train_metrics = w.metrics["train"];
  } else {
    init = InitParameters(spec, hp.init_seed);
    adam = ZeroAdamState(init);
  }
  SegmentationModel<float> model(spec, std::move(init));

  TrainResult result;
  const auto checkpoint_now = [&](const MetricsRecord* tr, const MetricsRecord& va) {
    Checkpoint c{spec, epoch, Snapshot(tr, va), model.parameters(), adam};
    if (!tr && !warm_train_metrics.is_null()) c.metrics["train"] = warm_train_metrics;
    return c;
  };

  if (hp.epochs == 0) {
    result.final_val = Evaluate(model, val, "val", epoch);
    result.final_checkpoint = checkpoint_now(nullptr, result.final_val);
    return result;
  }

  const std::size_t n_tasks = spec.tasks.size();
  const std::size_t bs = static_cast<std::size_t>(hp.batch_size);
  std::vector<std::size_t> order(train.size());
  for (int e = 0; e < hp.epochs; ++e) {
    ++epoch;
    std::iota(order.begin(), order.end(), std::size_t{0});
    util::Lcg64 rng(util::DeriveSeed(hp.init_seed, static_cast<std::uint64_t>(epoch)));
    util::Shuffle(std::span<std::size_t>(order), rng);

    std::vector<CrossEntropySum> ce(n_tasks);
    std::vector<ConfusionMatrix> cms;
    for (const auto& t : spec.tasks) cms.emplace_back(t.class_count);

    for (std::size_t start = 0; start < order.size(); start += bs) {
      const std::size_t end = std::min(order.size(), start + bs);
      std::vector<double> normalizers(n_tasks, 0.0);
      for (std::size_t b = start; b < end; ++b) {
        for (std::size_t t = 0; t < n_tasks; ++t) {
          for (auto l : train[order[b]].labels[t]) normalizers[t] += l != labels::kIgnore;
        }
      }
      std::vector<ExampleStep> steps(end - start);
      util::ParallelFor(steps.size(), options.threads, [&](std::size_t i) {
        steps[i] = RunExample(model, train[order[start + i]], normalizers);
      });
      Parameters<float> grads = std::move(steps[0].grads);
      for (std::size_t i = 1; i < steps.size(); ++i) AddInto(grads, steps[i].grads);
      for (const auto& s : steps) {
        for (std::size_t t = 0; t < n_tasks; ++t) {
          ce[t].sum += s.ce[t].sum;
          ce[t].valid += s.ce[t].valid;
          cms[t].Merge(s.cms[t]);
        }
      }
      AdamStep(model.mutable_parameters(), grads, adam, hp);
    }

    MetricsRecord tr;
    tr.split = "train";
    tr.epoch = epoch;
    for (std::size_t t = 0; t < n_tasks; ++t) {
      const double loss = ce[t].valid ? ce[t].sum / static_cast<double>(ce[t].valid) : 0.0;
      tr.tasks.push_back(MetricsFromConfusion(spec.tasks[t].name, cms[t], loss));
      tr.loss += loss;
    }
    MetricsRecord va = Evaluate(model, val, "val", epoch);
    result.history.push_back(tr);
    result.history.push_back(va);

    EpochReport report{epoch, tr, va, nullptr, {}};
    const bool last = e + 1 == hp.epochs;
    if (last || epoch % options.checkpoint_every == 0) {
      result.final_checkpoint = checkpoint_now(&tr, va);
      result.checkpoint_epochs.push_back(epoch);
      report.checkpoint = &result.final_checkpoint;
      if (!options.checkpoint_dir.empty()) {
        report.checkpoint_path = options.checkpoint_dir / CheckpointFileName(epoch);
        SaveCheckpoint(report.checkpoint_path, result.final_checkpoint);
      }
    }
    result.final_val = va;
    if (observer) observer(report);
  }
  return result;
}

}  // namespace trinity::kernel
