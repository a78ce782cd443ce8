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

#include "trinity/util/fs.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "trinity/error.hpp"

namespace trinity::util {
namespace fs = std::filesystem;

namespace {

std::atomic<std::uint64_t> g_temp_counter{0};

fs::path TempSibling(const fs::path& path) {
  std::ostringstream name;
  name << "." << path.filename().string() << ".tmp." << ::getpid() << "."
       << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
       << g_temp_counter.fetch_add(1);
  return path.parent_path() / name.str();
}

void WriteAll(int fd, const char* data, std::size_t size, const fs::path& path) {
  while (size > 0) {
    ssize_t n = ::write(fd, data, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kInternal,
                  "write failed for " + path.string() + ": " + std::strerror(errno));
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void AtomicWriteRaw(const fs::path& path, const char* data, std::size_t size) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = TempSibling(path);
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kInternal,
                "cannot create " + tmp.string() + ": " + std::strerror(errno));
  }
  try {
    WriteAll(fd, data, size, tmp);
    ::fsync(fd);
  } catch (...) {
    ::close(fd);
    fs::remove(tmp);
    throw;
  }
  ::close(fd);
  fs::rename(tmp, path);
}

}  // namespace

std::vector<std::uint8_t> ReadBinaryFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void AtomicWriteFile(const fs::path& path, std::span<const std::uint8_t> bytes) {
  AtomicWriteRaw(path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

void AtomicWriteFile(const fs::path& path, std::string_view text) {
  AtomicWriteRaw(path, text.data(), text.size());
}

void AppendLine(const fs::path& path, std::string_view line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kInternal,
                "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  std::string data(line);
  data.push_back('\n');
  try {
    WriteAll(fd, data.data(), data.size(), path);
    ::fsync(fd);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

FileLock::FileLock(const fs::path& lock_path) {
  if (lock_path.has_parent_path()) fs::create_directories(lock_path.parent_path());
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::kInternal, "cannot open lock " + lock_path.string());
  }
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno != EINTR) {
      ::close(fd_);
      throw Error(ErrorCode::kInternal, "cannot lock " + lock_path.string());
    }
  }
}

FileLock::~FileLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace trinity::util
