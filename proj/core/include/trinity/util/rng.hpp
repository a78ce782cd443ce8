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
#include <span>
#include <utility>

namespace trinity::util {

// 64-bit linear congruential generator shared by every seeded procedure
// (dataset splits, weight init, epoch shuffles, AutoML draws).
//
// state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64),
// starting from the seed. Each draw advances once and returns the upper 32
// bits of the new state; the low bits of a power-of-two LCG have short
// periods and are never used directly.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t state() const { return state_; }

  std::uint32_t NextU32() {
    state_ = state_ * kMultiplier + kIncrement;
    return static_cast<std::uint32_t>(state_ >> 32);
  }

  // Uniform in [0, bound). The modulo bias is below 2^-32 * bound and is part
  // of the reproducible contract, so no rejection loop.
  std::uint32_t NextBelow(std::uint32_t bound) { return NextU32() % bound; }

  // Uniform in [0, 1) with 32 bits of resolution.
  double NextUnit() { return NextU32() * (1.0 / 4294967296.0); }

 private:
  std::uint64_t state_;
};

// Fisher-Yates, iterating i = n-1 .. 1 and swapping with NextBelow(i + 1).
template <typename T>
void Shuffle(std::span<T> items, Lcg64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = rng.NextBelow(static_cast<std::uint32_t>(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

// Derives an independent seed for sub-stream `index` of `seed` (splitmix64
// finalizer), so sub-streams do not depend on execution order.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace trinity::util
