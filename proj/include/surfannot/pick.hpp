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

#include <cmath>
#include <limits>
#include <optional>

#include "surfannot/mesh.hpp"

namespace surfannot {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

inline constexpr double kPickEpsilon = 1e-9;

inline void require_valid(const Ray& ray) {
  const double len = norm(ray.direction);
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-9)
    throw DomainError("ray direction must be unit length");
  if (!std::isfinite(ray.origin.x) || !std::isfinite(ray.origin.y) ||
      !std::isfinite(ray.origin.z))
    throw DomainError("ray origin must be finite");
}

struct PickHit {
  TriangleIndex triangle_index = 0;
  Vec3 barycentric;  // weights of the triangle's vertices 0, 1, 2
  Vec3 point;
  VertexIndex nearest_vertex = 0;
  double distance = 0;  // ray parameter
};

// Intersection of one ray with one triangle (Moller-Trumbore). Barycentric
// bounds and the ray parameter are accepted within kPickEpsilon.
inline std::optional<PickHit> intersect_triangle(const TriangleMesh& mesh,
                                                 TriangleIndex t,
                                                 const Ray& ray) {
  const auto& tri = mesh.triangles[t];
  const Vec3 a = mesh.position(tri[0]);
  const Vec3 e1 = mesh.position(tri[1]) - a;
  const Vec3 e2 = mesh.position(tri[2]) - a;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  // Parallel ray or zero-area triangle.
  if (std::abs(det) <= 1e-14 * norm(e1) * norm(e2)) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = dot(s, p) * inv;
  if (u < -kPickEpsilon || u > 1 + kPickEpsilon) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv;
  if (v < -kPickEpsilon || u + v > 1 + kPickEpsilon) return std::nullopt;
  const double dist = dot(e2, q) * inv;
  if (!(dist >= -kPickEpsilon)) return std::nullopt;

  double w0 = std::max(0.0, 1 - u - v), w1 = std::max(0.0, u),
         w2 = std::max(0.0, v);
  const double sum = w0 + w1 + w2;
  w0 /= sum, w1 /= sum, w2 /= sum;

  PickHit hit;
  hit.triangle_index = t;
  hit.barycentric = {w0, w1, w2};
  hit.point = w0 * a + w1 * mesh.position(tri[1]) + w2 * mesh.position(tri[2]);
  hit.distance = std::max(0.0, dist);

  // Greatest weight wins, ties go to the lowest vertex index.
  const double w[3] = {w0, w1, w2};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (w[k] > w[best] || (w[k] == w[best] && tri[k] < tri[best])) best = k;
  hit.nearest_vertex = tri[best];
  return hit;
}

// Closest intersection along the ray; equal parameters resolve to the lower
// triangle index.
inline std::optional<PickHit> ray_pick(const TriangleMesh& mesh, const Ray& ray) {
  require_valid(mesh);
  require_valid(ray);
  std::optional<PickHit> best;
  for (TriangleIndex t = 0; t < mesh.triangle_count(); ++t) {
    auto hit = intersect_triangle(mesh, t, ray);
    if (hit && (!best || hit->distance < best->distance)) best = hit;
  }
  return best;
}

// True when hit could have been produced by ray_pick against this mesh.
// Catches picks made against a different frame or an older mesh.
inline bool hit_matches_mesh(const TriangleMesh& mesh, const PickHit& hit) {
  if (hit.triangle_index >= mesh.triangle_count()) return false;
  const auto& tri = mesh.triangles[hit.triangle_index];
  if (hit.nearest_vertex != tri[0] && hit.nearest_vertex != tri[1] &&
      hit.nearest_vertex != tri[2])
    return false;
  const Vec3& b = hit.barycentric;
  if (b.x < 0 || b.y < 0 || b.z < 0 || std::abs(b.x + b.y + b.z - 1) > 1e-6)
    return false;
  const Vec3 expected = b.x * mesh.position(tri[0]) + b.y * mesh.position(tri[1]) +
                        b.z * mesh.position(tri[2]);
  return distance(expected, hit.point) <= 1e-6;
}

}  // namespace surfannot
