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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trinity/kernel/tensor.hpp"
#include "trinity/labels/label_set.hpp"

namespace trinity::kernel {

using labels::TaskSpec;

inline constexpr const char* kFcnMini = "fcn_mini";
inline constexpr const char* kUnetMini = "unet_mini";

struct ArchitectureInfo {
  std::string architecture_id;
  std::string description;
};

const std::vector<ArchitectureInfo>& ArchitectureCatalog();

struct ModelSpec {
  std::string architecture_id = kUnetMini;
  int in_channels = 1;
  std::vector<TaskSpec> tasks;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Unknown architecture, non-positive channel count or invalid tasks throw
// ValidationError.
void ValidateModelSpec(const ModelSpec& spec);

void to_json(nlohmann::json& j, const ModelSpec& s);
void from_json(const nlohmann::json& j, ModelSpec& s);

template <typename T>
struct ParamTensor {
  std::string name;
  std::vector<int> dims;
  std::vector<T> values;

  friend bool operator==(const ParamTensor&, const ParamTensor&) = default;
};

// Named parameter tensors in a fixed order determined by the spec.
template <typename T>
struct Parameters {
  std::vector<ParamTensor<T>> tensors;

  std::size_t Count() const;
  const ParamTensor<T>& Find(const std::string& name) const;  // NotFoundError
  ParamTensor<T>& Find(const std::string& name);

  // Same names and shapes, all values zero.
  Parameters ZerosLike() const;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

template <typename To, typename From>
Parameters<To> ParametersCast(const Parameters<From>& in) {
  Parameters<To> out;
  for (const auto& t : in.tensors) {
    out.tensors.push_back({t.name, t.dims, std::vector<To>(t.values.begin(), t.values.end())});
  }
  return out;
}

// Name and dims of every parameter, in canonical order:
//   enc1, enc2, enc3 (3x3 encoder convs 16/32/64 wide), dec1 (64->32),
//   dec2 (32->16), then head.<i> (1x1, 16->class_count) per task. Each layer
//   has "<layer>.weight" [out, in, k, k] and "<layer>.bias" [out].
std::vector<std::pair<std::string, std::vector<int>>> ParameterLayout(const ModelSpec& spec);

// He-uniform weights (bound sqrt(6 / fan_in)) drawn from Lcg64(init_seed) in
// canonical order; zero biases.
Parameters<float> InitParameters(const ModelSpec& spec, std::uint64_t init_seed);

// Intermediate values kept by Forward for Backward.
template <typename T>
struct ForwardCache {
  Tensor<T> input;
  Tensor<T> z1, a1, p1, z2, a2, p2, z3, a3, u3, z4, a4, u4, z5, a5;
  std::vector<std::uint8_t> pool1_arg, pool2_arg;
};

// Encoder-decoder segmentation network. Input height and width must be
// positive multiples of 4.
template <typename T>
class SegmentationModel {
 public:
  SegmentationModel(ModelSpec spec, Parameters<T> params);

  const ModelSpec& spec() const { return spec_; }
  const Parameters<T>& parameters() const { return params_; }
  Parameters<T>& mutable_parameters() { return params_; }

  // Per-task logits [class_count, H, W]. Fills `cache` when given.
  std::vector<Tensor<T>> Forward(const Tensor<T>& image, ForwardCache<T>* cache = nullptr) const;

  // Gradients of sum(upstream[t] * logits[t]) with respect to every parameter.
  Parameters<T> Backward(const ForwardCache<T>& cache,
                         const std::vector<Tensor<T>>& upstream) const;

  // Signature of every ReLU sign and max-pool choice of the last Forward that
  // filled `cache`; equal signatures mean the same linear region.
  static std::vector<std::uint8_t> ActivationPattern(const ForwardCache<T>& cache);

 private:
  bool unet() const { return spec_.architecture_id == kUnetMini; }

  ModelSpec spec_;
  Parameters<T> params_;
};

extern template struct Parameters<float>;
extern template struct Parameters<double>;
extern template class SegmentationModel<float>;
extern template class SegmentationModel<double>;

}  // namespace trinity::kernel
