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
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "surfannot/annotation.hpp"
#include "surfannot/marker_csv.hpp"

namespace surfannot {

// Connected region around a seed where one channel is >= a threshold.
struct ComponentResult {
  std::uint32_t frame = 0;
  VertexIndex seed = 0;
  std::vector<VertexIndex> members;      // ascending
  std::vector<TriangleIndex> triangles;  // all three vertices are members
  double area = 0;
  Vec3 centroid;  // unweighted mean of member positions
  std::size_t vertex_count() const noexcept { return members.size(); }
};

inline ComponentResult extract_component(const SurfaceFrame& frame,
                                         const AdjacencyMap& adjacency,
                                         VertexIndex seed, int channel,
                                         std::uint8_t threshold,
                                         std::uint32_t frame_index = 0) {
  if (channel != 0 && channel != 1)
    throw DomainError("channel must be 0 or 1");
  const auto& mesh = frame.mesh;
  if (seed >= mesh.vertex_count())
    throw DomainError("seed vertex " + std::to_string(seed) + " out of range");
  const auto& values = frame.colours.channel(channel);

  ComponentResult result;
  result.frame = frame_index;
  result.seed = seed;
  if (values[seed] < threshold) return result;

  std::vector<std::uint8_t> member(mesh.vertex_count(), 0);
  std::vector<VertexIndex> stack{seed};
  member[seed] = 1;
  while (!stack.empty()) {
    const VertexIndex v = stack.back();
    stack.pop_back();
    result.members.push_back(v);
    for (VertexIndex w : adjacency.neighbors(v)) {
      if (!member[w] && values[w] >= threshold) {
        member[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::sort(result.members.begin(), result.members.end());

  Vec3 sum;
  for (VertexIndex v : result.members) sum = sum + mesh.position(v);
  result.centroid = (1.0 / static_cast<double>(result.members.size())) * sum;

  for (TriangleIndex t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (member[tri[0]] && member[tri[1]] && member[tri[2]]) {
      result.triangles.push_back(t);
      result.area += triangle_area(mesh, t);
    }
  }
  return result;
}

inline ComponentResult extract_component(const SurfaceFrame& frame, VertexIndex seed,
                                         int channel, std::uint8_t threshold) {
  return extract_component(frame, build_adjacency(frame.mesh), seed, channel, threshold);
}

struct TrackRow {
  MarkerId marker_id = 0;
  std::uint32_t frame = 0;
  double area = 0;
  std::size_t vertex_count = 0;
  Vec3 centroid;
  std::string error;  // set when extraction failed; measures are then zero

  friend bool operator==(const TrackRow&, const TrackRow&) = default;
};

using TrackTable = std::vector<TrackRow>;

// One component per marker, rows sorted by (marker id, frame). Markers that
// cannot be measured produce an empty row carrying the error.
inline TrackTable track_measurements(const SurfaceSeries& series, const MarkerSet& markers,
                                     int channel, std::uint8_t threshold,
                                     const AdjacencyCache* cache = nullptr) {
  if (channel != 0 && channel != 1) throw DomainError("channel must be 0 or 1");
  AdjacencyCache local(series.frame_count());
  const AdjacencyCache& adj = cache ? *cache : local;

  TrackTable table;
  for (const auto& m : markers) {
    TrackRow row{m.id, m.frame, 0, 0, {}, {}};
    try {
      if (m.frame >= series.frame_count())
        throw DomainError("frame " + std::to_string(m.frame) + " out of range");
      const auto& frame = series.frames[m.frame];
      auto comp = extract_component(frame, adj.get(m.frame, frame.mesh), m.vertex_index,
                                    channel, threshold, m.frame);
      row.area = comp.area;
      row.vertex_count = comp.vertex_count();
      row.centroid = comp.centroid;
    } catch (const Error& e) {
      row.error = e.what();
    }
    table.push_back(std::move(row));
  }
  std::stable_sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return a.marker_id != b.marker_id ? a.marker_id < b.marker_id : a.frame < b.frame;
  });
  return table;
}

inline constexpr std::string_view kTrackCsvHeader =
    "marker_id,frame,area,vertex_count,centroid_x,centroid_y,centroid_z";

inline std::string export_track_csv(const TrackTable& table) {
  std::string out(kTrackCsvHeader);
  out += '\n';
  for (const auto& r : table) {
    out += std::to_string(r.marker_id) + ',' + std::to_string(r.frame) + ',';
    append_double(out, r.area);
    out += ',' + std::to_string(r.vertex_count);
    for (double c : {r.centroid.x, r.centroid.y, r.centroid.z}) {
      out += ',';
      append_double(out, c);
    }
    out += '\n';
  }
  return out;
}

// Inverse of export_track_csv. Error text is not part of the format.
inline TrackTable parse_track_csv(std::string_view text) {
  using namespace csv_detail;
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kTrackCsvHeader)
    throw CsvError(1, "expected header '" + std::string(kTrackCsvHeader) + "'");
  TrackTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split_fields(lines[i]);
    TrackRow r;
    if (f.size() != 7 || !parse_field(f[0], r.marker_id) || !parse_field(f[1], r.frame) ||
        !parse_field(f[2], r.area) || !parse_field(f[3], r.vertex_count) ||
        !parse_field(f[4], r.centroid.x) || !parse_field(f[5], r.centroid.y) ||
        !parse_field(f[6], r.centroid.z))
      throw CsvError(i + 1, "malformed track row");
    table.push_back(r);
  }
  return table;
}

}  // namespace surfannot
