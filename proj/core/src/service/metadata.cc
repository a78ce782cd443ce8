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

#include "trinity/service/metadata.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <sstream>

#include "trinity/error.hpp"
#include "trinity/service/types.hpp"
#include "trinity/util/fs.hpp"

namespace trinity::service {
namespace fs = std::filesystem;
using nlohmann::json;

MetadataStore::MetadataStore(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

fs::path MetadataStore::Path(const std::string& collection, const std::string& id) const {
  static const std::regex re("[A-Za-z0-9_.-]+");
  if (!std::regex_match(id, re) || id.front() == '.') {
    throw ValidationError("invalid id '" + id + "'");
  }
  return root_ / collection / (id + ".json");
}

void MetadataStore::Put(const std::string& collection, const std::string& id, const json& doc) {
  util::AtomicWriteFile(Path(collection, id), doc.dump(2) + "\n");
}

json MetadataStore::Get(const std::string& collection, const std::string& id) const {
  const fs::path p = Path(collection, id);
  if (!fs::exists(p)) throw NotFoundError("no " + collection + " entry '" + id + "'");
  return json::parse(util::ReadTextFile(p));
}

bool MetadataStore::Has(const std::string& collection, const std::string& id) const {
  try {
    return fs::exists(Path(collection, id));
  } catch (const ValidationError&) {
    return false;
  }
}

std::vector<json> MetadataStore::List(const std::string& collection) const {
  std::vector<fs::path> files;
  const fs::path dir = root_ / collection;
  if (fs::exists(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<json> out;
  for (const auto& f : files) out.push_back(json::parse(util::ReadTextFile(f)));
  return out;
}

std::string MetadataStore::NextId(const std::string& prefix) {
  const fs::path p = root_ / "counters.json";
  json counters = fs::exists(p) ? json::parse(util::ReadTextFile(p)) : json::object();
  const std::uint64_t next = counters.value(prefix, std::uint64_t{0}) + 1;
  counters[prefix] = next;
  util::AtomicWriteFile(p, counters.dump(2) + "\n");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%06llu", prefix.c_str(),
                static_cast<unsigned long long>(next));
  return buf;
}

void MetadataStore::Audit(json entry) {
  entry["ts"] = NowIso8601();
  std::lock_guard<std::mutex> lock(audit_mu_);
  util::AppendLine(root_ / "audit.log", entry.dump());
}

std::vector<json> MetadataStore::ReadAudit() const {
  std::lock_guard<std::mutex> lock(audit_mu_);
  std::vector<json> out;
  const fs::path p = root_ / "audit.log";
  if (!fs::exists(p)) return out;
  std::istringstream in(util::ReadTextFile(p));
  std::string line;
  while (std::getline(in, line)) {
    // A torn final line from a crash is skipped.
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception&) {
    }
  }
  return out;
}

}  // namespace trinity::service
