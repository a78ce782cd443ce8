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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trinity::util {

std::vector<std::uint8_t> ReadBinaryFile(const std::filesystem::path& path);
std::string ReadTextFile(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over the target, so readers see
// either the old or the new content. Parent directories are created.
void AtomicWriteFile(const std::filesystem::path& path,
                     std::span<const std::uint8_t> bytes);
void AtomicWriteFile(const std::filesystem::path& path, std::string_view text);

// Appends one line and flushes it to disk.
void AppendLine(const std::filesystem::path& path, std::string_view line);

// Exclusive advisory lock on a lock file, held for the object's lifetime.
class FileLock {
 public:
  explicit FileLock(const std::filesystem::path& lock_path);
  ~FileLock();
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace trinity::util
