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
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/kernel/trainer.hpp"

namespace trinity::kernel {

struct SearchSpace {
  double lr_lo = 1e-4;
  double lr_hi = 1e-2;
  std::vector<int> batch_sizes = {2, 4, 8};
};

void to_json(nlohmann::json& j, const SearchSpace& s);
void from_json(const nlohmann::json& j, SearchSpace& s);

struct TrialRecord {
  int trial = 0;
  Hyperparams hp;
  double final_val_loss = 0.0;
  MetricsRecord final_val;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

void to_json(nlohmann::json& j, const TrialRecord& t);

struct AutoMlResult {
  std::vector<TrialRecord> trials;
  int best_trial = 0;
  Checkpoint best_checkpoint;
};

// Hyperparameters of trial t, drawn from Lcg64(DeriveSeed(seed, t)): a
// log-uniform learning rate, then a batch size, then a 64-bit init seed.
// Other fields come from `base`.
Hyperparams DrawTrial(const SearchSpace& space, const Hyperparams& base, std::uint64_t seed,
                      int trial);

// Index of the minimal final validation loss; ties go to the lower index.
int SelectBestTrial(const std::vector<TrialRecord>& trials);

// Runs n_trials independent trainings, up to `parallelism` at a time. Each
// trial trains single-threaded from its own seed stream, so the table does
// not depend on `parallelism`.
AutoMlResult AutoMlSearch(const std::vector<Example>& train, const std::vector<Example>& val,
                          const ModelSpec& spec, const SearchSpace& space,
                          const Hyperparams& base, int n_trials, std::size_t parallelism,
                          std::uint64_t seed);

}  // namespace trinity::kernel
