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

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "surfannot/annotation.hpp"

namespace surfannot {

inline constexpr std::string_view kMarkerCsvHeader = "frame,x,y,z,vertex_index";
inline constexpr double kMarkerSnapTolerance = 1e-3;

// Shortest decimal that parses back to the same float.
inline void append_float(std::string& out, float v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

inline void append_double(std::string& out, double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

inline std::string export_markers_csv(const MarkerSet& markers) {
  std::string out(kMarkerCsvHeader);
  out += '\n';
  for (const auto& m : markers) {
    out += std::to_string(m.frame);
    for (float c : m.position) {
      out += ',';
      append_float(out, c);
    }
    out += ',';
    out += std::to_string(m.vertex_index);
    out += '\n';
  }
  return out;
}

namespace csv_detail {

// Splits text into lines on LF, dropping a trailing CR and a final empty line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
bool parse_field(std::string_view s, T& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

}  // namespace csv_detail

struct MarkerImport {
  MarkerSet markers;
  std::vector<std::string> warnings;  // rows snapped onto their vertex
};

// Parses marker CSV and checks every row against the series. Positions
// within kMarkerSnapTolerance of the named vertex are snapped onto it.
// Ids are assigned 1..n in row order.
inline MarkerImport import_markers_csv(std::string_view text,
                                       const SurfaceSeries& series) {
  using namespace csv_detail;
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kMarkerCsvHeader)
    throw CsvError(1, "expected header '" + std::string(kMarkerCsvHeader) + "'");

  MarkerImport result;
  std::vector<Marker> markers;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto fields = split_fields(lines[i]);
    if (fields.size() != 5)
      throw CsvError(line_no, "expected 5 fields, found " + std::to_string(fields.size()));
    Marker m;
    if (!parse_field(fields[0], m.frame)) throw CsvError(line_no, "invalid frame");
    for (int k = 0; k < 3; ++k)
      if (!parse_field(fields[1 + k], m.position[k]) || !std::isfinite(m.position[k]))
        throw CsvError(line_no, "invalid coordinate");
    if (!parse_field(fields[4], m.vertex_index))
      throw CsvError(line_no, "invalid vertex_index");
    if (m.frame >= series.frame_count())
      throw CsvError(line_no, "frame " + std::to_string(m.frame) + " out of range (series has " +
                                  std::to_string(series.frame_count()) + " frames)");
    const auto& mesh = series.frames[m.frame].mesh;
    if (m.vertex_index >= mesh.vertex_count())
      throw CsvError(line_no, "vertex_index " + std::to_string(m.vertex_index) + " out of range");
    const Position& actual = mesh.vertices[m.vertex_index];
    const double gap = distance(to_vec3(m.position), to_vec3(actual));
    if (gap > kMarkerSnapTolerance)
      throw CsvError(line_no, "position is " + std::to_string(gap) +
                                  " from vertex " + std::to_string(m.vertex_index));
    if (m.position != actual)
      result.warnings.push_back("line " + std::to_string(line_no) + ": snapped marker onto vertex " +
                                std::to_string(m.vertex_index));
    m.position = actual;
    m.id = markers.size() + 1;
    markers.push_back(m);
  }
  result.markers = MarkerSet(std::move(markers));
  return result;
}

}  // namespace surfannot
