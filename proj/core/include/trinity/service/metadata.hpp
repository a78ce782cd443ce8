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

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace trinity::service {

// File-backed document store: one JSON file per document at
// <root>/<collection>/<id>.json, each write a temp-file rename, plus an
// append-only <root>/audit.log of JSON lines. Callers serialize mutations.
class MetadataStore {
 public:
  explicit MetadataStore(std::filesystem::path root);

  void Put(const std::string& collection, const std::string& id, const nlohmann::json& doc);
  nlohmann::json Get(const std::string& collection, const std::string& id) const;  // NotFound
  bool Has(const std::string& collection, const std::string& id) const;
  std::vector<nlohmann::json> List(const std::string& collection) const;  // sorted by id

  // "<prefix>-NNNNNN" from a persisted per-prefix counter.
  std::string NextId(const std::string& prefix);

  // Adds a "ts" field and appends the entry to the audit log.
  void Audit(nlohmann::json entry);
  std::vector<nlohmann::json> ReadAudit() const;

 private:
  std::filesystem::path Path(const std::string& collection, const std::string& id) const;

  std::filesystem::path root_;
  mutable std::mutex audit_mu_;
};

}  // namespace trinity::service
