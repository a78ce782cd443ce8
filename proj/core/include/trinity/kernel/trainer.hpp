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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trinity/kernel/adam.hpp"
#include "trinity/kernel/checkpoint.hpp"
#include "trinity/kernel/example.hpp"
#include "trinity/kernel/metrics.hpp"
#include "trinity/kernel/model.hpp"

namespace trinity::kernel {

inline constexpr int kDefaultCheckpointEvery = 5;

struct TrainOptions {
  Hyperparams hp;
  int checkpoint_every = kDefaultCheckpointEvery;
  std::optional<Checkpoint> warm_start;
  // Checkpoints are written here as epoch_NNNN.trnk; empty keeps them in
  // memory only.
  std::filesystem::path checkpoint_dir;
  std::size_t threads = 1;
};

struct EpochReport {
  int epoch = 0;
  MetricsRecord train;
  MetricsRecord val;
  const Checkpoint* checkpoint = nullptr;  // set when one was taken this epoch
  std::filesystem::path checkpoint_path;   // empty unless written to disk
};

using EpochObserver = std::function<void(const EpochReport&)>;

struct TrainResult {
  Checkpoint final_checkpoint;
  MetricsRecord final_val;
  std::vector<MetricsRecord> history;  // train then val, per epoch
  std::vector<int> checkpoint_epochs;
};

std::string CheckpointFileName(int epoch);

// Mini-batch Adam over a per-epoch seeded shuffle. Per-example gradients may
// be computed on several threads but are summed in batch order, so results
// do not depend on `threads`. A warm start must match `spec` exactly and
// continues from its epoch and optimizer state; with zero epochs the
// validation metrics are re-evaluated on the warm-started model.
TrainResult Train(const std::vector<Example>& train, const std::vector<Example>& val,
                  const ModelSpec& spec, const TrainOptions& options,
                  const EpochObserver& observer = {});

}  // namespace trinity::kernel
