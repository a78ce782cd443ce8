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

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trinity/error.hpp"

namespace trinity::util {

// Appends little-endian scalars to a byte buffer independent of host order.
class ByteWriter {
 public:
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U16(std::uint16_t v) { PutLe(v); }
  void U32(std::uint32_t v) { PutLe(v); }
  void U64(std::uint64_t v) { PutLe(v); }
  void F32(float v) { PutLe(std::bit_cast<std::uint32_t>(v)); }
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void Bytes(std::span<const std::uint8_t> s) {
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  std::size_t size() const { return buf_.size(); }
  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  std::vector<std::uint8_t> Take() { return std::move(buf_); }

 private:
  template <typename T>
  void PutLe(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
  }

  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian reader; truncation raises ValidationError.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::uint8_t U8() { return GetLe<std::uint8_t>(); }
  std::uint16_t U16() { return GetLe<std::uint16_t>(); }
  std::uint32_t U32() { return GetLe<std::uint32_t>(); }
  std::uint64_t U64() { return GetLe<std::uint64_t>(); }
  float F32() { return std::bit_cast<float>(GetLe<std::uint32_t>()); }

  std::string_view Bytes(std::size_t n) {
    Need(n);
    std::string_view out(reinterpret_cast<const char*>(data_.data()) + pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool AtEnd() const { return pos_ == data_.size(); }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw ValidationError(what_ + ": truncated at byte " + std::to_string(pos_));
    }
  }

  template <typename T>
  T GetLe() {
    Need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(data_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace trinity::util
