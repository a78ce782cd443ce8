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

#include "trinity/kernel/adam.hpp"

#include <cmath>

#include "trinity/error.hpp"

namespace trinity::kernel {

void ValidateHyperparams(const Hyperparams& hp) {
  if (!(hp.learning_rate > 0.0) || !std::isfinite(hp.learning_rate)) {
    throw ValidationError("learning_rate must be positive");
  }
  if (hp.batch_size < 1) throw ValidationError("batch_size must be at least 1");
  if (hp.epochs < 0) throw ValidationError("epochs must be non-negative");
  if (!(hp.adam_beta1 >= 0.0 && hp.adam_beta1 < 1.0) ||
      !(hp.adam_beta2 >= 0.0 && hp.adam_beta2 < 1.0)) {
    throw ValidationError("adam betas must be in [0, 1)");
  }
  if (!(hp.adam_epsilon > 0.0)) throw ValidationError("adam_epsilon must be positive");
}

void to_json(nlohmann::json& j, const Hyperparams& hp) {
  j = nlohmann::json{{"learning_rate", hp.learning_rate}, {"batch_size", hp.batch_size},
                     {"epochs", hp.epochs},               {"adam_beta1", hp.adam_beta1},
                     {"adam_beta2", hp.adam_beta2},       {"adam_epsilon", hp.adam_epsilon},
                     {"init_seed", hp.init_seed}};
}

void from_json(const nlohmann::json& j, Hyperparams& hp) {
  hp = Hyperparams{};
  hp.learning_rate = j.value("learning_rate", hp.learning_rate);
  hp.batch_size = j.value("batch_size", hp.batch_size);
  hp.epochs = j.value("epochs", hp.epochs);
  hp.adam_beta1 = j.value("adam_beta1", hp.adam_beta1);
  hp.adam_beta2 = j.value("adam_beta2", hp.adam_beta2);
  hp.adam_epsilon = j.value("adam_epsilon", hp.adam_epsilon);
  hp.init_seed = j.value("init_seed", hp.init_seed);
}

AdamState ZeroAdamState(const Parameters<float>& params) {
  return AdamState{0, params.ZerosLike(), params.ZerosLike()};
}

void AdamStep(Parameters<float>& params, const Parameters<float>& grads, AdamState& state,
              const Hyperparams& hp) {
  if (grads.tensors.size() != params.tensors.size() ||
      state.m.tensors.size() != params.tensors.size() ||
      state.v.tensors.size() != params.tensors.size()) {
    throw ValidationError("adam: parameter, gradient and state sets differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double b1 = hp.adam_beta1, b2 = hp.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  for (std::size_t k = 0; k < params.tensors.size(); ++k) {
    auto& p = params.tensors[k].values;
    const auto& g = grads.tensors[k].values;
    auto& m = state.m.tensors[k].values;
    auto& v = state.v.tensors[k].values;
    if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
      throw ValidationError("adam: shape mismatch in '" + params.tensors[k].name + "'");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[i];
      const double mi = b1 * m[i] + (1.0 - b1) * gi;
      const double vi = b2 * v[i] + (1.0 - b2) * gi * gi;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      const double mhat = mi / c1;
      const double vhat = vi / c2;
      p[i] = static_cast<float>(p[i] - hp.learning_rate * mhat / (std::sqrt(vhat) + hp.adam_epsilon));
    }
  }
}

}  // namespace trinity::kernel
