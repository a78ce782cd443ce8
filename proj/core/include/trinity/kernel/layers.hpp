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

#include "trinity/kernel/model.hpp"
#include "trinity/kernel/tensor.hpp"

namespace trinity::kernel {

// 3x3, stride 1, zero-padded convolution. w is [out, in, 3, 3], b is [out].
template <typename T>
Tensor<T> Conv3x3(const Tensor<T>& in, const ParamTensor<T>& w, const ParamTensor<T>& b);

// Accumulates weight and bias gradients into dw and db and, when din is
// given, writes the input gradient.
template <typename T>
void Conv3x3Backward(const Tensor<T>& in, const ParamTensor<T>& w, const Tensor<T>& dout,
                     ParamTensor<T>& dw, ParamTensor<T>& db, Tensor<T>* din);

}  // namespace trinity::kernel
