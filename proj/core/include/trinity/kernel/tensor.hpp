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

namespace trinity::kernel {

// Dense channels x height x width tensor, each channel plane row-major.
template <typename T>
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<T> data;

  Tensor() = default;
  Tensor(int c, int h, int w, T fill = T(0))
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t plane_size() const { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const { return data.size(); }

  T& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  T at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  std::span<T> plane(int c) {
    return {data.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }
  std::span<const T> plane(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }

  bool same_shape(const Tensor& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

template <typename To, typename From>
Tensor<To> TensorCast(const Tensor<From>& in) {
  Tensor<To> out;
  out.channels = in.channels;
  out.height = in.height;
  out.width = in.width;
  out.data.assign(in.data.begin(), in.data.end());
  return out;
}

}  // namespace trinity::kernel
