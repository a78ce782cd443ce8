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

#include <cstddef>
#include <span>
#include <vector>

#include "trinity/kernel/tensor.hpp"
#include "trinity/labels/rasterize.hpp"

namespace trinity::kernel {

// Per-pixel softmax over the class axis. Exponentials and the normalizer are
// evaluated in double; inference and evaluation share this routine so their
// confidences agree bit for bit.
template <typename T>
Tensor<T> Softmax(const Tensor<T>& logits);

// Lowest class index wins ties.
template <typename T>
int ArgmaxAt(const Tensor<T>& probs, std::size_t pixel);

struct CrossEntropySum {
  double sum = 0.0;        // sum of -ln p_true over valid pixels
  std::size_t valid = 0;   // pixels whose label is not IGNORE
};

// Labels outside [0, class_count) other than IGNORE throw ValidationError.
template <typename T>
CrossEntropySum TaskCrossEntropy(const Tensor<T>& logits, std::span<const std::uint8_t> labels);

// (softmax - onehot) / normalizer at valid pixels, 0 at IGNORE.
template <typename T>
Tensor<T> TaskCrossEntropyGrad(const Tensor<T>& probs, std::span<const std::uint8_t> labels,
                               double normalizer);

template <typename T>
struct LossOutput {
  double loss = 0.0;               // sum of task losses
  std::vector<double> task_loss;   // mean over valid pixels, 0 if none
  std::vector<Tensor<T>> grad;     // d loss / d logits per task
};

// Masked multi-task cross-entropy for a single example.
template <typename T>
LossOutput<T> MaskedCrossEntropy(const std::vector<Tensor<T>>& logits,
                                 const std::vector<labels::LabelPlane>& labels);

}  // namespace trinity::kernel
