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

#include "support/oracles.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <numbers>

namespace trinity::testing {

using kernel::Tensor;

GridPos MercatorGrid(double lon, double lat, int zoom) {
  const double n = std::ldexp(1.0, zoom);
  const double phi = lat * std::numbers::pi / 180.0;
  return {(lon + 180.0) / 360.0 * n,
          (1.0 - std::asinh(std::tan(phi)) / std::numbers::pi) / 2.0 * n};
}

namespace {

constexpr int kSide = 256;

GridPos Local(const geo::LatLon& p, const geo::TileKey& tile) {
  const GridPos g = MercatorGrid(p.lon, p.lat, 24);
  return {g.x - tile.x * 256.0, g.y - tile.y * 256.0};
}

bool InsideEvenOdd(const geo::Polygon& poly, const geo::TileKey& tile, double cx, double cy) {
  bool inside = false;
  auto ring_test = [&](const geo::Ring& ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const GridPos a = Local(ring[i], tile);
      const GridPos b = Local(ring[i + 1], tile);
      if ((a.y > cy) == (b.y > cy)) continue;
      const double x_cross = a.x + (cy - a.y) / (b.y - a.y) * (b.x - a.x);
      if (cx < x_cross) inside = !inside;
    }
  };
  ring_test(poly.outer);
  for (const auto& h : poly.holes) ring_test(h);
  return inside;
}

// Pixel (x, y) lies on the trace from a to b when, walking the major axis
// from the endpoint with the smaller major coordinate, its minor coordinate
// is the ideal position rounded half up: m - 1/2 <= ideal < m + 1/2.
bool OnTrace(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t x,
             std::int64_t y) {
  const bool x_major = std::llabs(bx - ax) >= std::llabs(by - ay);
  std::int64_t ma = x_major ? ax : ay, na = x_major ? ay : ax;
  std::int64_t mb = x_major ? bx : by, nb = x_major ? by : bx;
  const std::int64_t m = x_major ? x : y, n = x_major ? y : x;
  if (ma > mb) {
    std::swap(ma, mb);
    std::swap(na, nb);
  }
  if (m < ma || m > mb) return false;
  const std::int64_t span = mb - ma;
  if (span == 0) return n == na;
  // ideal = na + (m - ma) * (nb - na) / span; scale the inequality by 2 * span.
  const std::int64_t ideal2 = 2 * (na * span + (m - ma) * (nb - na));
  return (2 * n - 1) * span <= ideal2 && ideal2 < (2 * n + 1) * span;
}

double Dist2(const postprocess::WeightedPixel& a, const postprocess::WeightedPixel& b) {
  const double dx = static_cast<double>(a.x) - static_cast<double>(b.x);
  const double dy = static_cast<double>(a.y) - static_cast<double>(b.y);
  return dx * dx + dy * dy;
}

}  // namespace

labels::LabelPlane RasterizeOracle(const std::vector<geo::Geometry>& geometries,
                                   const geo::TileKey& tile) {
  labels::LabelPlane plane(kSide * kSide, 0);
  for (const auto& g : geometries) {
    const auto tag = static_cast<std::uint8_t>(g.class_tag.value_or(1));
    std::vector<std::pair<std::int64_t, std::int64_t>> px;
    for (const auto& v : g.vertices) {
      const GridPos p = MercatorGrid(v.lon, v.lat, 24);
      px.push_back({static_cast<std::int64_t>(std::floor(p.x)),
                    static_cast<std::int64_t>(std::floor(p.y))});
    }
    for (int row = 0; row < kSide; ++row) {
      for (int col = 0; col < kSide; ++col) {
        const std::int64_t gx = std::int64_t{tile.x} * kSide + col;
        const std::int64_t gy = std::int64_t{tile.y} * kSide + row;
        bool hit = false;
        switch (g.kind) {
          case geo::GeometryKind::kPoint:
            hit = px[0].first == gx && px[0].second == gy;
            break;
          case geo::GeometryKind::kLineString:
            for (std::size_t i = 0; i + 1 < px.size() && !hit; ++i) {
              hit = OnTrace(px[i].first, px[i].second, px[i + 1].first, px[i + 1].second, gx, gy);
            }
            break;
          default:
            for (const auto& poly : g.polygons) {
              if (InsideEvenOdd(poly, tile, col + 0.5, row + 0.5)) hit = true;
            }
        }
        if (hit) plane[row * kSide + col] = tag;
      }
    }
  }
  return plane;
}

postprocess::ClusterResult NaiveWeightedDbscan(const std::vector<postprocess::WeightedPixel>& pts,
                                               double eps, double min_weight) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (Dist2(pts[i], pts[j]) <= eps * eps) {
        nbr[i].push_back(j);
        w += pts[j].weight;
      }
    }
    core[i] = w >= min_weight;
  }
  std::vector<int> label(n, -2);  // -2 unvisited, -1 noise
  int clusters = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != -2) continue;
    if (!core[i]) {
      label[i] = -1;
      continue;
    }
    const int c = clusters++;
    label[i] = c;
    std::deque<std::size_t> frontier(nbr[i].begin(), nbr[i].end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (label[q] == -1) label[q] = c;
      if (label[q] != -2) continue;
      label[q] = c;
      if (core[q]) frontier.insert(frontier.end(), nbr[q].begin(), nbr[q].end());
    }
  }
  postprocess::ClusterResult r;
  r.clusters.resize(clusters);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] < 0) r.noise.push_back(i);
    else r.clusters[label[i]].push_back(i);
  }
  return r;
}

postprocess::ClusterResult ClassicDbscan(const std::vector<std::pair<double, double>>& pts,
                                         double eps, int min_pts) {
  const std::size_t n = pts.size();
  auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) <= eps) {
        out.push_back(j);
      }
    }
    return out;
  };
  constexpr int kUndefined = -2, kNoise = -1;
  std::vector<int> label(n, kUndefined);
  int c = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (label[p] != kUndefined) continue;
    const auto nb = region(p);
    if (static_cast<int>(nb.size()) < min_pts) {
      label[p] = kNoise;
      continue;
    }
    label[p] = c;
    std::deque<std::size_t> seeds(nb.begin(), nb.end());
    while (!seeds.empty()) {
      const std::size_t q = seeds.front();
      seeds.pop_front();
      if (label[q] == kNoise) label[q] = c;
      if (label[q] != kUndefined) continue;
      label[q] = c;
      const auto nq = region(q);
      if (static_cast<int>(nq.size()) >= min_pts) seeds.insert(seeds.end(), nq.begin(), nq.end());
    }
    ++c;
  }
  postprocess::ClusterResult r;
  r.clusters.resize(c);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] < 0) r.noise.push_back(i);
    else r.clusters[label[i]].push_back(i);
  }
  return r;
}

std::map<std::string, NaiveSegmentScore> NaiveMapMatch(
    const std::vector<postprocess::WeightedPixel>& pts,
    const std::vector<postprocess::RoadSegment>& network, double radius_m) {
  std::map<std::string, NaiveSegmentScore> out;
  std::vector<std::vector<GridPos>> lines;
  for (const auto& seg : network) {
    std::vector<GridPos> line;
    double len = 0.0;
    for (const auto& v : seg.polyline) {
      line.push_back(MercatorGrid(v.lon, v.lat, 24));
      if (line.size() > 1) {
        len += std::hypot(line.back().x - line[line.size() - 2].x,
                          line.back().y - line[line.size() - 2].y);
      }
    }
    out[seg.segment_id].length_px = len;
    lines.push_back(line);
  }
  for (const auto& p : pts) {
    const double cx = p.x + 0.5, cy = p.y + 0.5;
    // Latitude of the pixel centre from the inverse projection.
    const double lat =
        std::atan(std::sinh(std::numbers::pi * (1.0 - 2.0 * cy / std::ldexp(1.0, 24)))) * 180.0 /
        std::numbers::pi;
    const double meters_per_px =
        40075016.686 * std::cos(lat * std::numbers::pi / 180.0) / std::ldexp(1.0, 24);
    std::string best;
    double best_d = 0.0;
    for (std::size_t s = 0; s < network.size(); ++s) {
      double d = INFINITY;
      for (std::size_t i = 0; i + 1 < lines[s].size(); ++i) {
        const GridPos a = lines[s][i], b = lines[s][i + 1];
        const double vx = b.x - a.x, vy = b.y - a.y;
        double t = ((cx - a.x) * vx + (cy - a.y) * vy) / (vx * vx + vy * vy);
        t = std::max(0.0, std::min(1.0, t));
        d = std::min(d, std::hypot(cx - a.x - t * vx, cy - a.y - t * vy));
      }
      if (d * meters_per_px > radius_m) continue;
      const std::string& id = network[s].segment_id;
      if (best.empty() || d < best_d || (d == best_d && id < best)) {
        best = id;
        best_d = d;
      }
    }
    if (!best.empty()) out[best].weight_sum += p.weight;
  }
  for (auto& [id, s] : out) s.score = s.weight_sum / s.length_px;
  return out;
}

double NaiveTileUncertainty(const inference::Heatmap& heatmap) {
  double total = 0.0;
  for (const auto& t : heatmap.tasks) {
    const int k = t.channels;
    double task_sum = 0.0;
    for (int y = 0; y < t.height; ++y) {
      for (int x = 0; x < t.width; ++x) {
        double h = 0.0;
        for (int c = 0; c < k; ++c) {
          const double p = t.at(c, y, x);
          if (p > 0.0) h -= p * std::log(p);
        }
        task_sum += h / std::log(static_cast<double>(k));
      }
    }
    total += task_sum / (static_cast<double>(t.height) * t.width);
  }
  return total / static_cast<double>(heatmap.tasks.size());
}

OracleMetrics BruteForceMetrics(const std::vector<std::uint8_t>& truth,
                                const std::vector<std::uint8_t>& predicted, int class_count) {
  OracleMetrics m;
  std::vector<std::uint64_t> tp(class_count), fp(class_count), fn(class_count), count(class_count);
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == labels::kIgnore) continue;
    ++m.n;
    ++count[truth[i]];
    if (truth[i] == predicted[i]) {
      ++correct;
      ++tp[truth[i]];
    } else {
      ++fn[truth[i]];
      ++fp[predicted[i]];
    }
  }
  auto ratio = [](double a, double b) { return b == 0.0 ? 1.0 : a / b; };
  m.accuracy = ratio(static_cast<double>(correct), static_cast<double>(m.n));
  for (int c = 0; c < class_count; ++c) {
    m.iou.push_back(ratio(static_cast<double>(tp[c]), static_cast<double>(tp[c] + fp[c] + fn[c])));
    m.fiou += m.n == 0 ? 0.0 : static_cast<double>(count[c]) / m.n * m.iou.back();
  }
  if (m.n == 0) m.fiou = 1.0;
  std::vector<double> p, r, f;
  for (int c = 1; c < class_count; ++c) {
    const double pc = ratio(static_cast<double>(tp[c]), static_cast<double>(tp[c] + fp[c]));
    const double rc = ratio(static_cast<double>(tp[c]), static_cast<double>(tp[c] + fn[c]));
    p.push_back(pc);
    r.push_back(rc);
    f.push_back(pc + rc == 0.0 ? 0.0 : 2.0 * pc * rc / (pc + rc));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    m.precision += p[i] / p.size();
    m.recall += r[i] / r.size();
    m.f1 += f[i] / f.size();
  }
  return m;
}

Tensor<double> NaiveConv3x3(const Tensor<double>& in, const kernel::ParamTensor<double>& w,
                            const kernel::ParamTensor<double>& b) {
  const int cout = w.dims[0], cin = w.dims[1], k = w.dims[2], r = k / 2;
  Tensor<double> out(cout, in.height, in.width);
  for (int o = 0; o < cout; ++o) {
    for (int y = 0; y < in.height; ++y) {
      for (int x = 0; x < in.width; ++x) {
        double s = b.values[o];
        for (int i = 0; i < cin; ++i) {
          for (int dy = 0; dy < k; ++dy) {
            for (int dx = 0; dx < k; ++dx) {
              const int yy = y + dy - r, xx = x + dx - r;
              if (yy < 0 || yy >= in.height || xx < 0 || xx >= in.width) continue;
              s += w.values[((o * cin + i) * k + dy) * k + dx] * in.at(i, yy, xx);
            }
          }
        }
        out.at(o, y, x) = s;
      }
    }
  }
  return out;
}

namespace {

Tensor<double> Relu(Tensor<double> t) {
  for (auto& v : t.data) v = std::max(v, 0.0);
  return t;
}

Tensor<double> Pool(const Tensor<double>& in) {
  Tensor<double> out(in.channels, in.height / 2, in.width / 2);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        out.at(c, y, x) = std::max({in.at(c, 2 * y, 2 * x), in.at(c, 2 * y, 2 * x + 1),
                                    in.at(c, 2 * y + 1, 2 * x), in.at(c, 2 * y + 1, 2 * x + 1)});
      }
    }
  }
  return out;
}

Tensor<double> Up(const Tensor<double>& in) {
  Tensor<double> out(in.channels, in.height * 2, in.width * 2);
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) out.at(c, y, x) = in.at(c, y / 2, x / 2);
    }
  }
  return out;
}

Tensor<double> Plus(Tensor<double> a, const Tensor<double>& b) {
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
  return a;
}

}  // namespace

std::vector<Tensor<double>> NaiveForward(const kernel::ModelSpec& spec,
                                         const kernel::Parameters<double>& params,
                                         const Tensor<double>& image) {
  auto conv = [&](const Tensor<double>& x, const std::string& layer) {
    return NaiveConv3x3(x, params.Find(layer + ".weight"), params.Find(layer + ".bias"));
  };
  const bool skips = spec.architecture_id == kernel::kUnetMini;
  const Tensor<double> a1 = Relu(conv(image, "enc1"));
  const Tensor<double> a2 = Relu(conv(Pool(a1), "enc2"));
  const Tensor<double> a3 = Relu(conv(Pool(a2), "enc3"));
  Tensor<double> z4 = conv(Up(a3), "dec1");
  if (skips) z4 = Plus(z4, a2);
  Tensor<double> z5 = conv(Up(Relu(z4)), "dec2");
  if (skips) z5 = Plus(z5, a1);
  const Tensor<double> a5 = Relu(z5);
  std::vector<Tensor<double>> out;
  for (std::size_t t = 0; t < spec.tasks.size(); ++t) {
    out.push_back(conv(a5, "head." + std::to_string(t)));
  }
  return out;
}

}  // namespace trinity::testing
