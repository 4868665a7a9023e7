// Copyright 2026 The surfannot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "surfannot/mesh.hpp"

namespace surfannot {

enum class DistanceMetric { GeodesicEdgeGraph, Euclidean };

inline std::string_view to_string(DistanceMetric m) {
  return m == DistanceMetric::Euclidean ? "euclidean" : "geodesic";
}

inline DistanceMetric parse_metric(std::string_view s) {
  if (s == "geodesic") return DistanceMetric::GeodesicEdgeGraph;
  if (s == "euclidean") return DistanceMetric::Euclidean;
  throw DomainError("unknown distance metric '" + std::string(s) + "'");
}

struct VertexDistance {
  VertexIndex vertex;
  double distance;
  friend bool operator==(const VertexDistance&, const VertexDistance&) = default;
};

// Vertices within a radius of a seed, sorted by vertex index.
class DistanceField {
 public:
  DistanceField() = default;
  explicit DistanceField(std::vector<VertexDistance> entries)
      : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  const std::vector<VertexDistance>& entries() const noexcept { return entries_; }

  const VertexDistance* find(VertexIndex v) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), v,
        [](const VertexDistance& e, VertexIndex x) { return e.vertex < x; });
    return it != entries_.end() && it->vertex == v ? &*it : nullptr;
  }
  bool contains(VertexIndex v) const { return find(v) != nullptr; }

  std::vector<VertexIndex> vertices() const {
    std::vector<VertexIndex> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.vertex);
    return out;
  }

 private:
  std::vector<VertexDistance> entries_;
};

inline void check_distance_query(const TriangleMesh& mesh, VertexIndex seed,
                                 double radius) {
  if (seed >= mesh.vertex_count())
    throw DomainError("seed vertex " + std::to_string(seed) + " out of range");
  if (!std::isfinite(radius) || radius < 0)
    throw DomainError("radius must be finite and non-negative");
}

// Dijkstra over the edge graph, pruned at radius. Edge weights are
// Euclidean edge lengths.
inline DistanceField geodesic_distances(const TriangleMesh& mesh,
                                        const AdjacencyMap& adjacency,
                                        VertexIndex seed, double radius) {
  check_distance_query(mesh, seed, radius);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::unordered_map<VertexIndex, double> best;
  std::vector<VertexDistance> settled;

  best.emplace(seed, 0.0);
  queue.emplace(0.0, seed);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > best[v]) continue;
    settled.push_back({v, d});
    const Vec3 pv = mesh.position(v);
    for (VertexIndex w : adjacency.neighbors(v)) {
      const double nd = d + distance(pv, mesh.position(w));
      if (nd > radius) continue;
      auto [it, inserted] = best.try_emplace(w, nd);
      if (!inserted) {
        if (nd >= it->second) continue;
        it->second = nd;
      }
      queue.emplace(nd, w);
    }
  }
  return DistanceField(std::move(settled));
}

inline DistanceField euclidean_distances(const TriangleMesh& mesh,
                                         VertexIndex seed, double radius) {
  check_distance_query(mesh, seed, radius);
  const Vec3 centre = mesh.position(seed);
  std::vector<VertexDistance> out;
  for (VertexIndex v = 0; v < mesh.vertex_count(); ++v) {
    const double d = v == seed ? 0.0 : distance(centre, mesh.position(v));
    if (d <= radius) out.push_back({v, d});
  }
  return DistanceField(std::move(out));
}

inline DistanceField surface_distances(const TriangleMesh& mesh,
                                       const AdjacencyMap& adjacency,
                                       VertexIndex seed, double radius,
                                       DistanceMetric metric) {
  if (metric == DistanceMetric::Euclidean)
    return euclidean_distances(mesh, seed, radius);
  return geodesic_distances(mesh, adjacency, seed, radius);
}

inline DistanceField surface_distances(const TriangleMesh& mesh, VertexIndex seed,
                                       double radius, DistanceMetric metric) {
  if (metric == DistanceMetric::Euclidean) {
    require_valid(mesh);
    return euclidean_distances(mesh, seed, radius);
  }
  return geodesic_distances(mesh, build_adjacency(mesh), seed, radius);
}

// Lazily built adjacency per frame, safe to share between threads.
class AdjacencyCache {
 public:
  explicit AdjacencyCache(std::size_t frame_count = 0)
      : slots_(frame_count) {}

  const AdjacencyMap& get(std::size_t frame, const TriangleMesh& mesh) const {
    std::lock_guard lock(mutex_);
    auto& slot = slots_.at(frame);
    if (!slot) slot = std::make_shared<const AdjacencyMap>(build_adjacency(mesh));
    return *slot;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::vector<std::shared_ptr<const AdjacencyMap>> slots_;
};

}  // namespace surfannot
