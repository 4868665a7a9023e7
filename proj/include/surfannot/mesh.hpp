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
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "surfannot/error.hpp"

namespace surfannot {

using VertexIndex = std::uint32_t;
using TriangleIndex = std::uint32_t;

// Vertex positions are stored exactly as they appear in .ply files.
using Position = std::array<float, 3>;
using Triangle = std::array<VertexIndex, 3>;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 to_vec3(const Position& p) { return {p[0], p[1], p[2]}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }

struct TriangleMesh {
  std::vector<Position> vertices;
  std::vector<Triangle> triangles;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t triangle_count() const noexcept { return triangles.size(); }
  Vec3 position(VertexIndex v) const { return to_vec3(vertices[v]); }
};

// Two fluorescence channels, one byte per vertex each. channel0 is stored
// as PLY red and channel1 as PLY green.
struct ChannelData {
  std::vector<std::uint8_t> channel0;
  std::vector<std::uint8_t> channel1;

  const std::vector<std::uint8_t>& channel(int c) const {
    return c == 0 ? channel0 : channel1;
  }
  friend bool operator==(const ChannelData&, const ChannelData&) = default;
};

enum class IssueKind {
  EmptyMesh,
  NonFinitePosition,
  IndexOutOfRange,
  DegenerateTriangle,
  ChannelLengthMismatch,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  bool has(IssueKind kind) const {
    for (const auto& i : issues)
      if (i.kind == kind) return true;
    return false;
  }
  std::string to_string() const {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += "; ";
      out += i.message;
    }
    return out;
  }
};

class ValidationError : public DomainError {
 public:
  explicit ValidationError(ValidationReport report)
      : DomainError("invalid mesh: " + report.to_string()),
        report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Lists every violated mesh or channel invariant. Never throws on bad data.
// Issues of one kind are capped so a badly broken file yields a short report.
inline ValidationReport validate_mesh(const TriangleMesh& mesh,
                                      const ChannelData& colours) {
  constexpr std::size_t kMaxPerKind = 8;
  ValidationReport report;
  std::array<std::size_t, 5> counts{};
  auto add = [&](IssueKind kind, std::string msg) {
    if (counts[static_cast<int>(kind)]++ < kMaxPerKind)
      report.issues.push_back({kind, std::move(msg)});
  };

  const std::size_t n = mesh.vertex_count();
  if (n == 0) add(IssueKind::EmptyMesh, "mesh has no vertices");
  for (std::size_t v = 0; v < n; ++v) {
    const auto& p = mesh.vertices[v];
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2]))
      add(IssueKind::NonFinitePosition,
          "vertex " + std::to_string(v) + " has a non-finite coordinate");
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    bool in_range = true;
    for (VertexIndex idx : tri) {
      if (idx >= n) {
        in_range = false;
        add(IssueKind::IndexOutOfRange,
            "triangle " + std::to_string(t) + ": index out of range (" +
                std::to_string(idx) + " >= " + std::to_string(n) + ")");
      }
    }
    if (in_range && (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]))
      add(IssueKind::DegenerateTriangle,
          "triangle " + std::to_string(t) + " repeats a vertex index");
  }
  if (colours.channel0.size() != n)
    add(IssueKind::ChannelLengthMismatch,
        "channel length mismatch: channel0 has " +
            std::to_string(colours.channel0.size()) + " values for " +
            std::to_string(n) + " vertices");
  if (colours.channel1.size() != n)
    add(IssueKind::ChannelLengthMismatch,
        "channel length mismatch: channel1 has " +
            std::to_string(colours.channel1.size()) + " values for " +
            std::to_string(n) + " vertices");
  return report;
}

// Geometry-only check, used where no colour data is involved.
inline ValidationReport validate_geometry(const TriangleMesh& mesh) {
  ChannelData dummy{std::vector<std::uint8_t>(mesh.vertex_count()),
                    std::vector<std::uint8_t>(mesh.vertex_count())};
  return validate_mesh(mesh, dummy);
}

inline void require_valid(const TriangleMesh& mesh) {
  auto report = validate_geometry(mesh);
  if (!report.ok()) throw ValidationError(std::move(report));
}

inline double triangle_area(const TriangleMesh& mesh, TriangleIndex t) {
  if (t >= mesh.triangle_count())
    throw DomainError("triangle index " + std::to_string(t) + " out of range");
  const auto& tri = mesh.triangles[t];
  const Vec3 a = mesh.position(tri[0]);
  return 0.5 * norm(cross(mesh.position(tri[1]) - a, mesh.position(tri[2]) - a));
}

inline double total_area(const TriangleMesh& mesh) {
  double sum = 0;
  for (TriangleIndex t = 0; t < mesh.triangle_count(); ++t)
    sum += triangle_area(mesh, t);
  return sum;
}

// Vertex adjacency in compressed row form. Neighbour lists are sorted and
// free of duplicates and self loops.
class AdjacencyMap {
 public:
  AdjacencyMap() = default;

  std::size_t vertex_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::span<const VertexIndex> neighbors(VertexIndex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  friend AdjacencyMap build_adjacency(const TriangleMesh& mesh);

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<VertexIndex> neighbors_;
};

inline AdjacencyMap build_adjacency(const TriangleMesh& mesh) {
  require_valid(mesh);
  const std::size_t n = mesh.vertex_count();
  AdjacencyMap adj;
  adj.offsets_.assign(n + 1, 0);
  for (const auto& tri : mesh.triangles)
    for (VertexIndex v : tri) adj.offsets_[v + 1] += 2;
  for (std::size_t v = 0; v < n; ++v) adj.offsets_[v + 1] += adj.offsets_[v];

  std::vector<VertexIndex> raw(adj.offsets_[n]);
  std::vector<std::uint64_t> fill(adj.offsets_.begin(), adj.offsets_.end() - 1);
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const VertexIndex v = tri[k];
      raw[fill[v]++] = tri[(k + 1) % 3];
      raw[fill[v]++] = tri[(k + 2) % 3];
    }
  }

  // Sort and deduplicate each row, compacting in place.
  adj.neighbors_.reserve(raw.size());
  std::vector<std::uint64_t> compact(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(adj.offsets_[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(adj.offsets_[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    adj.neighbors_.insert(adj.neighbors_.end(), first, last);
    compact[v + 1] = adj.neighbors_.size();
  }
  adj.offsets_ = std::move(compact);
  adj.neighbors_.shrink_to_fit();
  return adj;
}

}  // namespace surfannot
