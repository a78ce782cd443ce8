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

#include "trinity/inference/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "trinity/error.hpp"

namespace trinity::inference {
namespace {

const kernel::Tensor<float>& TaskPlanes(const Heatmap& heatmap, std::size_t task) {
  if (task >= heatmap.tasks.size()) {
    throw ValidationError("task index " + std::to_string(task) + " out of range");
  }
  return heatmap.tasks[task];
}

}  // namespace

std::vector<std::uint8_t> ConfidenceToGray(std::span<const float> confidences) {
  std::vector<std::uint8_t> out(confidences.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double c = std::clamp(static_cast<double>(confidences[i]), 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::floor(255.0 * c + 0.5));
  }
  return out;
}

std::vector<std::uint8_t> DominantClassRgb(const Heatmap& heatmap, std::size_t task,
                                           const std::vector<Rgb>& palette) {
  const auto& t = TaskPlanes(heatmap, task);
  if (palette.size() != static_cast<std::size_t>(t.channels)) {
    throw ValidationError("palette has " + std::to_string(palette.size()) + " colours; task has " +
                          std::to_string(t.channels) + " classes");
  }
  const std::size_t n = t.plane_size();
  std::vector<std::uint8_t> out(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < t.channels; ++c) {
      if (t.data[c * n + i] > t.data[best * n + i]) best = c;
    }
    std::memcpy(&out[i * 3], palette[best].data(), 3);
  }
  return out;
}

std::vector<std::uint8_t> RenderHeatmapPng(const Heatmap& heatmap, std::size_t task,
                                           int class_index) {
  const auto& t = TaskPlanes(heatmap, task);
  if (class_index < 0 || class_index >= t.channels) {
    throw ValidationError("class index " + std::to_string(class_index) + " out of range");
  }
  return EncodePng(t.width, t.height, 1, ConfidenceToGray(t.plane(class_index)));
}

std::vector<std::uint8_t> RenderDominantClassPng(const Heatmap& heatmap, std::size_t task,
                                                 const std::vector<Rgb>& palette) {
  const auto& t = TaskPlanes(heatmap, task);
  return EncodePng(t.width, t.height, 3, DominantClassRgb(heatmap, task, palette));
}

std::vector<std::uint8_t> EncodePng(int width, int height, int channels,
                                    std::span<const std::uint8_t> pixels) {
  if (channels != 1 && channels != 3) throw ValidationError("png: channels must be 1 or 3");
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels) {
    throw ValidationError("png: pixel buffer size mismatch");
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kInternal, std::string("png: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kInternal, std::string("png: ") + image.message);
  }
  out.resize(size);
  return out;
}

DecodedPng DecodePng(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw ValidationError(std::string("png: ") + image.message);
  }
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  DecodedPng out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.channels = gray ? 1 : 3;
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw ValidationError(std::string("png: ") + image.message);
  }
  return out;
}

}  // namespace trinity::inference
