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

#include "trinity/geo/json.hpp"

#include "trinity/error.hpp"

namespace trinity::geo {
using nlohmann::json;

void to_json(json& j, const TileKey& t) { j = json::array({t.x, t.y}); }

void from_json(const json& j, TileKey& t) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("tile key must be [x, y]");
  j.at(0).get_to(t.x);
  j.at(1).get_to(t.y);
}

void to_json(json& j, const BBox& b) {
  j = json::array({b.min.lon, b.min.lat, b.max.lon, b.max.lat});
}

void from_json(const json& j, BBox& b) {
  if (!j.is_array() || j.size() != 4) {
    throw ValidationError("bbox must be [min_lon, min_lat, max_lon, max_lat]");
  }
  b.min.lon = j.at(0).get<double>();
  b.min.lat = j.at(1).get<double>();
  b.max.lon = j.at(2).get<double>();
  b.max.lat = j.at(3).get<double>();
}

}  // namespace trinity::geo
