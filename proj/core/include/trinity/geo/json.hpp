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

#include <nlohmann/json.hpp>

#include "trinity/geo/projection.hpp"

namespace trinity::geo {

// TileKey <-> [x, y]; BBox <-> [min_lon, min_lat, max_lon, max_lat].
void to_json(nlohmann::json& j, const TileKey& t);
void from_json(const nlohmann::json& j, TileKey& t);
void to_json(nlohmann::json& j, const BBox& b);
void from_json(const nlohmann::json& j, BBox& b);

}  // namespace trinity::geo
