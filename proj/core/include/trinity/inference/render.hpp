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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "trinity/inference/heatmap.hpp"

namespace trinity::inference {

using Rgb = std::array<std::uint8_t, 3>;

// floor(255 * c + 0.5) per pixel, c clamped to [0, 1].
std::vector<std::uint8_t> ConfidenceToGray(std::span<const float> confidences);

// Palette colour of the per-pixel argmax class (ties to the lowest index),
// packed RGB. Palette size must equal the task's class count.
std::vector<std::uint8_t> DominantClassRgb(const Heatmap& heatmap, std::size_t task,
                                           const std::vector<Rgb>& palette);

// 8-bit grayscale PNG of one class plane.
std::vector<std::uint8_t> RenderHeatmapPng(const Heatmap& heatmap, std::size_t task,
                                           int class_index);

// RGB PNG of the dominant class.
std::vector<std::uint8_t> RenderDominantClassPng(const Heatmap& heatmap, std::size_t task,
                                                 const std::vector<Rgb>& palette);

// channels is 1 (gray) or 3 (RGB); pixels are row-major interleaved.
std::vector<std::uint8_t> EncodePng(int width, int height, int channels,
                                    std::span<const std::uint8_t> pixels);

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
};

DecodedPng DecodePng(std::span<const std::uint8_t> bytes);

}  // namespace trinity::inference
