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

#include "trinity/kernel/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trinity/error.hpp"

namespace trinity::kernel {
namespace {

template <typename T>
void CheckLabels(const Tensor<T>& logits, std::span<const std::uint8_t> labels) {
  if (labels.size() != logits.plane_size()) {
    throw ValidationError("label plane has " + std::to_string(labels.size()) +
                          " pixels; logits have " + std::to_string(logits.plane_size()));
  }
}

}  // namespace

template <typename T>
Tensor<T> Softmax(const Tensor<T>& logits) {
  Tensor<T> out(logits.channels, logits.height, logits.width);
  const std::size_t n = logits.plane_size();
  const int k = logits.channels;
  std::vector<double> e(k);
  for (std::size_t i = 0; i < n; ++i) {
    double m = logits.data[i];
    for (int c = 1; c < k; ++c) m = std::max<double>(m, logits.data[c * n + i]);
    double s = 0.0;
    for (int c = 0; c < k; ++c) {
      e[c] = std::exp(static_cast<double>(logits.data[c * n + i]) - m);
      s += e[c];
    }
    for (int c = 0; c < k; ++c) out.data[c * n + i] = static_cast<T>(e[c] / s);
  }
  return out;
}

template <typename T>
int ArgmaxAt(const Tensor<T>& probs, std::size_t pixel) {
  const std::size_t n = probs.plane_size();
  int best = 0;
  for (int c = 1; c < probs.channels; ++c) {
    if (probs.data[c * n + pixel] > probs.data[best * n + pixel]) best = c;
  }
  return best;
}

template <typename T>
CrossEntropySum TaskCrossEntropy(const Tensor<T>& logits, std::span<const std::uint8_t> labels) {
  CheckLabels(logits, labels);
  const std::size_t n = logits.plane_size();
  const int k = logits.channels;
  CrossEntropySum out;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y == labels::kIgnore) continue;
    if (y >= k) {
      throw ValidationError("label " + std::to_string(y) + " out of range for " +
                            std::to_string(k) + " classes");
    }
    double m = logits.data[i];
    for (int c = 1; c < k; ++c) m = std::max<double>(m, logits.data[c * n + i]);
    double s = 0.0;
    for (int c = 0; c < k; ++c) s += std::exp(static_cast<double>(logits.data[c * n + i]) - m);
    out.sum += m + std::log(s) - static_cast<double>(logits.data[y * n + i]);
    ++out.valid;
  }
  return out;
}

template <typename T>
Tensor<T> TaskCrossEntropyGrad(const Tensor<T>& probs, std::span<const std::uint8_t> labels,
                               double normalizer) {
  CheckLabels(probs, labels);
  Tensor<T> g(probs.channels, probs.height, probs.width);
  if (normalizer <= 0.0) return g;
  const std::size_t n = probs.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y == labels::kIgnore) continue;
    for (int c = 0; c < probs.channels; ++c) {
      const double onehot = c == y ? 1.0 : 0.0;
      g.data[c * n + i] = static_cast<T>((probs.data[c * n + i] - onehot) / normalizer);
    }
  }
  return g;
}

template <typename T>
LossOutput<T> MaskedCrossEntropy(const std::vector<Tensor<T>>& logits,
                                 const std::vector<labels::LabelPlane>& labels) {
  if (logits.size() != labels.size()) {
    throw ValidationError("logit and label task counts differ");
  }
  LossOutput<T> out;
  for (std::size_t t = 0; t < logits.size(); ++t) {
    const auto ce = TaskCrossEntropy(logits[t], labels[t]);
    const double mean = ce.valid ? ce.sum / static_cast<double>(ce.valid) : 0.0;
    out.task_loss.push_back(mean);
    out.loss += mean;
    out.grad.push_back(
        TaskCrossEntropyGrad(Softmax(logits[t]), labels[t], static_cast<double>(ce.valid)));
  }
  return out;
}

#define TRINITY_INSTANTIATE(T)                                                             \
  template Tensor<T> Softmax(const Tensor<T>&);                                            \
  template int ArgmaxAt(const Tensor<T>&, std::size_t);                                    \
  template CrossEntropySum TaskCrossEntropy(const Tensor<T>&, std::span<const std::uint8_t>); \
  template Tensor<T> TaskCrossEntropyGrad(const Tensor<T>&, std::span<const std::uint8_t>, \
                                          double);                                         \
  template LossOutput<T> MaskedCrossEntropy(const std::vector<Tensor<T>>&,                 \
                                            const std::vector<labels::LabelPlane>&);
TRINITY_INSTANTIATE(float)
TRINITY_INSTANTIATE(double)
#undef TRINITY_INSTANTIATE

}  // namespace trinity::kernel
