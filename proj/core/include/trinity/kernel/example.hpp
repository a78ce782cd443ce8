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

#include <vector>

#include "trinity/geo/projection.hpp"
#include "trinity/kernel/tensor.hpp"
#include "trinity/labels/rasterize.hpp"

namespace trinity::kernel {

// One training or evaluation sample: normalized image plus one label plane
// per task.
struct Example {
  geo::TileKey tile;
  Tensor<float> image;
  std::vector<labels::LabelPlane> labels;
};

}  // namespace trinity::kernel
