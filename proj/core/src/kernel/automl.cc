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

#include "trinity/kernel/automl.hpp"

#include <cmath>

#include "trinity/error.hpp"
#include "trinity/util/parallel.hpp"
#include "trinity/util/rng.hpp"

namespace trinity::kernel {
using nlohmann::json;

namespace {

void ValidateSpace(const SearchSpace& s) {
  if (!(s.lr_lo > 0.0) || !(s.lr_hi >= s.lr_lo) || !std::isfinite(s.lr_hi)) {
    throw ValidationError("learning-rate range must satisfy 0 < lo <= hi");
  }
  if (s.batch_sizes.empty()) throw ValidationError("batch_size choices must be non-empty");
  for (int b : s.batch_sizes) {
    if (b < 1) throw ValidationError("batch_size choices must be positive");
  }
}

}  // namespace

void to_json(json& j, const SearchSpace& s) {
  j = json{{"learning_rate", {s.lr_lo, s.lr_hi}}, {"batch_size", s.batch_sizes}};
}

void from_json(const json& j, SearchSpace& s) {
  const auto& lr = j.at("learning_rate");
  if (!lr.is_array() || lr.size() != 2) {
    throw ValidationError("learning_rate range must be [lo, hi]");
  }
  s.lr_lo = lr[0].get<double>();
  s.lr_hi = lr[1].get<double>();
  j.at("batch_size").get_to(s.batch_sizes);
}

void to_json(json& j, const TrialRecord& t) {
  j = json{{"trial", t.trial},
           {"hyperparams", t.hp},
           {"final_val_loss", t.final_val_loss},
           {"final_val", t.final_val}};
}

Hyperparams DrawTrial(const SearchSpace& space, const Hyperparams& base, std::uint64_t seed,
                      int trial) {
  util::Lcg64 rng(util::DeriveSeed(seed, static_cast<std::uint64_t>(trial)));
  Hyperparams hp = base;
  const double lo = std::log(space.lr_lo), hi = std::log(space.lr_hi);
  hp.learning_rate = std::exp(lo + rng.NextUnit() * (hi - lo));
  hp.batch_size = space.batch_sizes[rng.NextBelow(static_cast<std::uint32_t>(space.batch_sizes.size()))];
  const std::uint64_t high = rng.NextU32();
  hp.init_seed = (high << 32) | rng.NextU32();
  return hp;
}

int SelectBestTrial(const std::vector<TrialRecord>& trials) {
  if (trials.empty()) throw ValidationError("no trials to select from");
  int best = 0;
  for (int i = 1; i < static_cast<int>(trials.size()); ++i) {
    if (trials[i].final_val_loss < trials[best].final_val_loss) best = i;
  }
  return best;
}

AutoMlResult AutoMlSearch(const std::vector<Example>& train, const std::vector<Example>& val,
                          const ModelSpec& spec, const SearchSpace& space,
                          const Hyperparams& base, int n_trials, std::size_t parallelism,
                          std::uint64_t seed) {
  ValidateSpace(space);
  if (n_trials < 1) throw ValidationError("n_trials must be >= 1");
  if (parallelism < 1) throw ValidationError("parallelism must be >= 1");
  std::vector<TrialRecord> trials(n_trials);
  std::vector<Checkpoint> checkpoints(n_trials);
  util::ParallelFor(static_cast<std::size_t>(n_trials), parallelism, [&](std::size_t t) {
    TrainOptions opts;
    opts.hp = DrawTrial(space, base, seed, static_cast<int>(t));
    auto r = Train(train, val, spec, opts);
    trials[t] = TrialRecord{static_cast<int>(t), opts.hp, r.final_val.loss, r.final_val};
    checkpoints[t] = std::move(r.final_checkpoint);
  });
  AutoMlResult out;
  out.best_trial = SelectBestTrial(trials);
  out.best_checkpoint = std::move(checkpoints[out.best_trial]);
  out.trials = std::move(trials);
  return out;
}

}  // namespace trinity::kernel
