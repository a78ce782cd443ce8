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

#include <nlohmann/json.hpp>

#include "trinity/kernel/model.hpp"

namespace trinity::kernel {

struct Hyperparams {
  double learning_rate = 1e-3;
  int batch_size = 4;
  int epochs = 10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t init_seed = 0;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// learning_rate > 0, batch_size >= 1, epochs >= 0, betas in [0, 1), epsilon > 0.
void ValidateHyperparams(const Hyperparams& hp);

void to_json(nlohmann::json& j, const Hyperparams& hp);
void from_json(const nlohmann::json& j, Hyperparams& hp);

struct AdamState {
  std::uint64_t step = 0;
  Parameters<float> m;
  Parameters<float> v;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

AdamState ZeroAdamState(const Parameters<float>& params);

// One bias-corrected Adam update. Arithmetic runs in double; moments are
// stored as float.
void AdamStep(Parameters<float>& params, const Parameters<float>& grads, AdamState& state,
              const Hyperparams& hp);

}  // namespace trinity::kernel
