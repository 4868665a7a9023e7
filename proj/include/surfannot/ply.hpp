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
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surfannot/mesh.hpp"

namespace surfannot {

static_assert(std::endian::native == std::endian::little,
              "binary .ply I/O assumes a little-endian host");

// One bit per vertex (stored as 0/1 bytes). An empty layer means "absent",
// which is equivalent to all-unlabelled.
using LabelLayer = std::vector<std::uint8_t>;

inline bool any_labelled(const LabelLayer& labels) {
  return std::any_of(labels.begin(), labels.end(), [](auto b) { return b != 0; });
}

enum class PlyFormat { Ascii, BinaryLittleEndian };

enum class PlyScalar { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

inline std::size_t scalar_size(PlyScalar t) {
  switch (t) {
    case PlyScalar::Int8:
    case PlyScalar::UInt8: return 1;
    case PlyScalar::Int16:
    case PlyScalar::UInt16: return 2;
    case PlyScalar::Int32:
    case PlyScalar::UInt32:
    case PlyScalar::Float32: return 4;
    case PlyScalar::Float64: return 8;
  }
  return 0;
}

inline std::string_view scalar_name(PlyScalar t) {
  switch (t) {
    case PlyScalar::Int8: return "char";
    case PlyScalar::UInt8: return "uchar";
    case PlyScalar::Int16: return "short";
    case PlyScalar::UInt16: return "ushort";
    case PlyScalar::Int32: return "int";
    case PlyScalar::UInt32: return "uint";
    case PlyScalar::Float32: return "float";
    case PlyScalar::Float64: return "double";
  }
  return "";
}

inline std::optional<PlyScalar> parse_scalar_name(std::string_view s) {
  if (s == "char" || s == "int8") return PlyScalar::Int8;
  if (s == "uchar" || s == "uint8") return PlyScalar::UInt8;
  if (s == "short" || s == "int16") return PlyScalar::Int16;
  if (s == "ushort" || s == "uint16") return PlyScalar::UInt16;
  if (s == "int" || s == "int32") return PlyScalar::Int32;
  if (s == "uint" || s == "uint32") return PlyScalar::UInt32;
  if (s == "float" || s == "float32") return PlyScalar::Float32;
  if (s == "double" || s == "float64") return PlyScalar::Float64;
  return std::nullopt;
}

struct PlyProperty {
  std::string name;
  PlyScalar type;
  friend bool operator==(const PlyProperty&, const PlyProperty&) = default;
};

struct PlyHeader {
  PlyFormat format = PlyFormat::BinaryLittleEndian;
  std::uint64_t vertex_count = 0;
  std::uint64_t face_count = 0;
  std::vector<PlyProperty> vertex_properties;
  bool has_face_element = false;
  PlyScalar face_count_type = PlyScalar::UInt8;
  PlyScalar face_index_type = PlyScalar::UInt32;
  std::size_t body_offset = 0;  // first byte after end_header
};

// Vertex properties other than x/y/z/red/green/blue, kept opaquely so files
// from other tools survive a round trip. layout is the full vertex property
// order as written; data holds the extra properties' little-endian bytes,
// vertex-major, in layout order.
struct ExtraVertexData {
  std::vector<PlyProperty> layout;
  std::vector<std::uint8_t> data;

  std::size_t stride() const {
    std::size_t s = 0;
    for (const auto& p : layout)
      if (!is_standard(p.name)) s += scalar_size(p.type);
    return s;
  }
  static bool is_standard(std::string_view name) {
    return name == "x" || name == "y" || name == "z" || name == "red" ||
           name == "green" || name == "blue";
  }
  friend bool operator==(const ExtraVertexData&, const ExtraVertexData&) = default;
};

inline std::vector<PlyProperty> default_vertex_layout() {
  return {{"x", PlyScalar::Float32},    {"y", PlyScalar::Float32},
          {"z", PlyScalar::Float32},    {"red", PlyScalar::UInt8},
          {"green", PlyScalar::UInt8},  {"blue", PlyScalar::UInt8}};
}

struct SurfaceFrame {
  TriangleMesh mesh;
  ChannelData colours;
  LabelLayer labels;  // empty when absent
  ExtraVertexData extras;
  std::string source_path;

  std::size_t vertex_count() const noexcept { return mesh.vertex_count(); }
  bool has_labels() const { return any_labelled(labels); }
  bool labelled(VertexIndex v) const { return !labels.empty() && labels[v] != 0; }
};

// Field-exact comparison: positions by bit pattern, colours and effective
// labels byte-exact, extra properties byte-exact. source_path is ignored.
inline bool same_frame_content(const SurfaceFrame& a, const SurfaceFrame& b) {
  if (a.mesh.vertices.size() != b.mesh.vertices.size()) return false;
  for (std::size_t v = 0; v < a.mesh.vertices.size(); ++v)
    for (int k = 0; k < 3; ++k)
      if (std::bit_cast<std::uint32_t>(a.mesh.vertices[v][k]) !=
          std::bit_cast<std::uint32_t>(b.mesh.vertices[v][k]))
        return false;
  if (a.mesh.triangles != b.mesh.triangles) return false;
  if (a.colours != b.colours) return false;
  for (VertexIndex v = 0; v < a.vertex_count(); ++v)
    if (a.labelled(v) != b.labelled(v)) return false;
  auto layout_or_default = [](const ExtraVertexData& e) {
    return e.layout.empty() ? default_vertex_layout() : e.layout;
  };
  return layout_or_default(a.extras) == layout_or_default(b.extras) &&
         a.extras.data == b.extras.data;
}

inline ValidationReport validate_frame(const SurfaceFrame& frame) {
  auto report = validate_mesh(frame.mesh, frame.colours);
  if (!frame.labels.empty() && frame.labels.size() != frame.vertex_count())
    report.issues.push_back({IssueKind::ChannelLengthMismatch,
                             "channel length mismatch: label layer has " +
                                 std::to_string(frame.labels.size()) +
                                 " values for " +
                                 std::to_string(frame.vertex_count()) + " vertices"});
  if (frame.extras.data.size() != frame.extras.stride() * frame.vertex_count())
    report.issues.push_back({IssueKind::ChannelLengthMismatch,
                             "channel length mismatch: extra vertex data size"});
  return report;
}

namespace ply_detail {

inline constexpr std::uint64_t kMaxElementCount = 0xFFFFFFFFull;

// Splits a header line into whitespace-separated words.
inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

template <typename T>
T load_le(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

inline double load_scalar(const std::uint8_t* p, PlyScalar t) {
  switch (t) {
    case PlyScalar::Int8: return load_le<std::int8_t>(p);
    case PlyScalar::UInt8: return load_le<std::uint8_t>(p);
    case PlyScalar::Int16: return load_le<std::int16_t>(p);
    case PlyScalar::UInt16: return load_le<std::uint16_t>(p);
    case PlyScalar::Int32: return load_le<std::int32_t>(p);
    case PlyScalar::UInt32: return load_le<std::uint32_t>(p);
    case PlyScalar::Float32: return load_le<float>(p);
    case PlyScalar::Float64: return load_le<double>(p);
  }
  return 0;
}

inline bool is_integer(PlyScalar t) {
  return t != PlyScalar::Float32 && t != PlyScalar::Float64;
}

inline bool integer_range(PlyScalar t, std::int64_t v) {
  switch (t) {
    case PlyScalar::Int8: return v >= INT8_MIN && v <= INT8_MAX;
    case PlyScalar::UInt8: return v >= 0 && v <= UINT8_MAX;
    case PlyScalar::Int16: return v >= INT16_MIN && v <= INT16_MAX;
    case PlyScalar::UInt16: return v >= 0 && v <= UINT16_MAX;
    case PlyScalar::Int32: return v >= INT32_MIN && v <= INT32_MAX;
    case PlyScalar::UInt32: return v >= 0 && v <= static_cast<std::int64_t>(UINT32_MAX);
    default: return true;
  }
}

// Encodes an ASCII token as the little-endian bytes of type t.
inline bool encode_token(std::string_view tok, PlyScalar t, std::uint8_t* out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (t == PlyScalar::Float32) {
    float f;
    auto r = std::from_chars(first, last, f);
    if (r.ec != std::errc() || r.ptr != last) return false;
    std::memcpy(out, &f, 4);
    return true;
  }
  if (t == PlyScalar::Float64) {
    double d;
    auto r = std::from_chars(first, last, d);
    if (r.ec != std::errc() || r.ptr != last) return false;
    std::memcpy(out, &d, 8);
    return true;
  }
  if (!tok.empty() && tok.front() == '+') ++first;
  std::int64_t v;
  auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last || !integer_range(t, v)) return false;
  switch (t) {
    case PlyScalar::Int8: { auto x = static_cast<std::int8_t>(v); std::memcpy(out, &x, 1); break; }
    case PlyScalar::UInt8: { auto x = static_cast<std::uint8_t>(v); std::memcpy(out, &x, 1); break; }
    case PlyScalar::Int16: { auto x = static_cast<std::int16_t>(v); std::memcpy(out, &x, 2); break; }
    case PlyScalar::UInt16: { auto x = static_cast<std::uint16_t>(v); std::memcpy(out, &x, 2); break; }
    case PlyScalar::Int32: { auto x = static_cast<std::int32_t>(v); std::memcpy(out, &x, 4); break; }
    case PlyScalar::UInt32: { auto x = static_cast<std::uint32_t>(v); std::memcpy(out, &x, 4); break; }
    default: return false;
  }
  return true;
}

// Cursor over the body of a file. ASCII bodies are consumed token by token,
// binary bodies value by value; both report the byte offset of failures.
class BodyReader {
 public:
  BodyReader(std::span<const std::uint8_t> bytes, std::size_t offset, PlyFormat format)
      : bytes_(bytes), pos_(offset), format_(format) {}

  std::size_t offset() const noexcept { return pos_; }
  // Start of the most recently read value.
  std::size_t last_offset() const noexcept { return last_; }

  // Reads one value of type t into out (little-endian bytes).
  void read(PlyScalar t, std::uint8_t* out, const char* what) {
    const std::size_t size = scalar_size(t);
    if (format_ == PlyFormat::BinaryLittleEndian) {
      last_ = pos_;
      if (bytes_.size() - pos_ < size)
        throw ParseError(pos_, std::string("truncated body while reading ") + what);
      std::memcpy(out, bytes_.data() + pos_, size);
      pos_ += size;
      return;
    }
    const std::size_t start = skip_space();
    last_ = start;
    if (pos_ >= bytes_.size())
      throw ParseError(pos_, std::string("truncated body while reading ") + what);
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) ++pos_;
    std::string_view tok(reinterpret_cast<const char*>(bytes_.data()) + start,
                         pos_ - start);
    if (!encode_token(tok, t, out))
      throw ParseError(start, "invalid " + std::string(scalar_name(t)) + " value '" +
                                  std::string(tok.substr(0, 32)) + "' for " + what);
  }

  double read_number(PlyScalar t, const char* what) {
    std::uint8_t buf[8];
    read(t, buf, what);
    return load_scalar(buf, t);
  }

  void expect_end() {
    if (format_ == PlyFormat::Ascii) skip_space();
    if (pos_ != bytes_.size())
      throw ParseError(pos_, "unexpected data after the last element");
  }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }
  std::size_t skip_space() {
    while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
    return pos_;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  std::size_t last_ = 0;
  PlyFormat format_;
};

}  // namespace ply_detail

inline PlyHeader parse_ply_header(std::span<const std::uint8_t> bytes) {
  using ply_detail::split_words;
  PlyHeader header;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  enum class Element { None, Vertex, Face } current = Element::None;
  bool saw_format = false;
  bool face_list_seen = false;

  auto next_line = [&](std::size_t& line_start) -> std::optional<std::string_view> {
    line_start = pos;
    while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    if (pos >= bytes.size()) return std::nullopt;
    std::string_view line(reinterpret_cast<const char*>(bytes.data()) + line_start,
                          pos - line_start);
    ++pos;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    return line;
  };
  auto parse_count = [](std::string_view s, std::size_t at) {
    std::uint64_t n = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), n);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ParseError(at, "invalid element count '" + std::string(s) + "'");
    if (n > ply_detail::kMaxElementCount)
      throw ParseError(at, "element count exceeds 2^32-1");
    return n;
  };

  std::size_t start = 0;
  auto magic = next_line(start);
  if (!magic || *magic != "ply") throw ParseError(0, "missing 'ply' magic line");

  while (true) {
    auto line = next_line(start);
    if (!line) throw ParseError(start, "header is not terminated by end_header");
    auto words = split_words(*line);
    if (words.empty()) continue;
    const auto& key = words[0];
    if (key == "comment" || key == "obj_info") continue;
    if (key == "end_header") {
      if (words.size() != 1) throw ParseError(start, "malformed end_header line");
      break;
    }
    if (key == "format") {
      if (saw_format) throw ParseError(start, "duplicate format line");
      if (words.size() != 3) throw ParseError(start, "malformed format line");
      if (words[2] != "1.0")
        throw ParseError(start, "unsupported format version " + std::string(words[2]));
      if (words[1] == "ascii") header.format = PlyFormat::Ascii;
      else if (words[1] == "binary_little_endian") header.format = PlyFormat::BinaryLittleEndian;
      else if (words[1] == "binary_big_endian")
        throw ParseError(start, "unsupported format binary_big_endian");
      else throw ParseError(start, "unknown format '" + std::string(words[1]) + "'");
      saw_format = true;
      continue;
    }
    if (!saw_format) throw ParseError(start, "format line must precede elements");
    if (key == "element") {
      if (words.size() != 3) throw ParseError(start, "malformed element line");
      if (words[1] == "vertex") {
        if (current != Element::None) throw ParseError(start, "vertex element must come first");
        current = Element::Vertex;
        header.vertex_count = parse_count(words[2], start);
      } else if (words[1] == "face") {
        if (current != Element::Vertex)
          throw ParseError(start, "face element must follow the vertex element");
        current = Element::Face;
        header.has_face_element = true;
        header.face_count = parse_count(words[2], start);
      } else {
        throw ParseError(start, "unsupported element '" + std::string(words[1]) + "'");
      }
      continue;
    }
    if (key == "property") {
      if (current == Element::None) throw ParseError(start, "property outside of an element");
      if (current == Element::Vertex) {
        if (words.size() != 3)
          throw ParseError(start, "vertex properties must be scalar");
        auto type = parse_scalar_name(words[1]);
        if (!type) throw ParseError(start, "unknown property type '" + std::string(words[1]) + "'");
        std::string name(words[2]);
        for (const auto& p : header.vertex_properties)
          if (p.name == name) throw ParseError(start, "duplicate vertex property '" + name + "'");
        if ((name == "red" || name == "green" || name == "blue") && *type != PlyScalar::UInt8)
          throw ParseError(start, "colour property '" + name + "' must be uchar");
        if ((name == "x" || name == "y" || name == "z") && *type != PlyScalar::Float32 &&
            *type != PlyScalar::Float64)
          throw ParseError(start, "coordinate property '" + name + "' must be float or double");
        header.vertex_properties.push_back({std::move(name), *type});
      } else {
        if (face_list_seen) throw ParseError(start, "unsupported extra face property");
        if (words.size() != 5 || words[1] != "list")
          throw ParseError(start, "unsupported face property; expected a vertex index list");
        if (words[4] != "vertex_indices" && words[4] != "vertex_index")
          throw ParseError(start, "unsupported face property '" + std::string(words[4]) + "'");
        auto count_type = parse_scalar_name(words[2]);
        auto index_type = parse_scalar_name(words[3]);
        if (!count_type || !index_type || !ply_detail::is_integer(*count_type) ||
            !ply_detail::is_integer(*index_type))
          throw ParseError(start, "face list types must be integers");
        header.face_count_type = *count_type;
        header.face_index_type = *index_type;
        face_list_seen = true;
      }
      continue;
    }
    throw ParseError(start, "unrecognised header keyword '" + std::string(key) + "'");
  }

  if (current == Element::None) throw ParseError(start, "missing vertex element");
  if (header.has_face_element && !face_list_seen && header.face_count > 0)
    throw ParseError(start, "face element has no vertex index list");
  for (const char* axis : {"x", "y", "z"}) {
    bool found = std::any_of(header.vertex_properties.begin(), header.vertex_properties.end(),
                             [&](const auto& p) { return p.name == axis; });
    if (!found) throw ParseError(start, std::string("missing vertex property '") + axis + "'");
  }
  header.body_offset = pos;
  return header;
}

// Decodes one .ply frame. red/green become the two channels; a blue channel
// with any nonzero value becomes the label layer (labelled iff blue >= 128).
inline SurfaceFrame parse_ply(std::span<const std::uint8_t> bytes) {
  PlyHeader header = parse_ply_header(bytes);
  ply_detail::BodyReader reader(bytes, header.body_offset, header.format);

  SurfaceFrame frame;
  const std::size_t n = header.vertex_count;
  // Reject impossible counts before allocating.
  if (header.format == PlyFormat::BinaryLittleEndian) {
    std::size_t row = 0;
    for (const auto& p : header.vertex_properties) row += scalar_size(p.type);
    if (row * n > bytes.size() - header.body_offset)
      throw ParseError(bytes.size(), "truncated body: vertex data shorter than declared");
  } else if (n > bytes.size()) {
    throw ParseError(bytes.size(), "truncated body: vertex data shorter than declared");
  }

  // Canonical layout: coordinates as float, missing colours appended.
  std::vector<PlyProperty> layout = header.vertex_properties;
  for (auto& p : layout)
    if (p.name == "x" || p.name == "y" || p.name == "z") p.type = PlyScalar::Float32;
  for (const char* c : {"red", "green", "blue"})
    if (std::none_of(layout.begin(), layout.end(), [&](const auto& p) { return p.name == c; }))
      layout.push_back({c, PlyScalar::UInt8});
  frame.extras.layout = std::move(layout);
  const std::size_t stride = frame.extras.stride();

  frame.mesh.vertices.resize(n);
  frame.colours.channel0.assign(n, 0);
  frame.colours.channel1.assign(n, 0);
  std::vector<std::uint8_t> blue(n, 0);
  frame.extras.data.resize(stride * n);

  for (std::size_t v = 0; v < n; ++v) {
    std::uint8_t* extra = frame.extras.data.data() + v * stride;
    for (const auto& prop : header.vertex_properties) {
      const std::string& name = prop.name;
      if (name == "x" || name == "y" || name == "z") {
        const int axis = name[0] - 'x';
        if (prop.type == PlyScalar::Float32) {
          std::uint8_t buf[4];
          reader.read(prop.type, buf, "vertex coordinate");
          frame.mesh.vertices[v][axis] = ply_detail::load_le<float>(buf);
        } else {
          frame.mesh.vertices[v][axis] =
              static_cast<float>(reader.read_number(prop.type, "vertex coordinate"));
        }
      } else if (name == "red" || name == "green" || name == "blue") {
        std::uint8_t b;
        reader.read(PlyScalar::UInt8, &b, "vertex colour");
        (name == "red" ? frame.colours.channel0[v]
                       : name == "green" ? frame.colours.channel1[v] : blue[v]) = b;
      } else {
        reader.read(prop.type, extra, "vertex property");
        extra += scalar_size(prop.type);
      }
    }
  }

  const std::size_t m = header.face_count;
  if (header.format == PlyFormat::BinaryLittleEndian &&
      m * (scalar_size(header.face_count_type) + 3 * scalar_size(header.face_index_type)) >
          bytes.size() - reader.offset())
    throw ParseError(bytes.size(), "truncated body: face data shorter than declared");
  frame.mesh.triangles.resize(m);
  for (std::size_t f = 0; f < m; ++f) {
    const double count = reader.read_number(header.face_count_type, "face vertex count");
    if (count != 3)
      throw ParseError(reader.last_offset(), "face " + std::to_string(f) + " has " +
                               std::to_string(static_cast<long long>(count)) +
                               " vertices; only triangles are supported");
    for (int k = 0; k < 3; ++k) {
      const double idx = reader.read_number(header.face_index_type, "face vertex index");
      if (idx < 0 || idx >= static_cast<double>(n))
        throw ParseError(reader.last_offset(), "face " + std::to_string(f) + ": index out of range (" +
                                     std::to_string(static_cast<long long>(idx)) + ")");
      frame.mesh.triangles[f][k] = static_cast<VertexIndex>(idx);
    }
  }
  reader.expect_end();

  if (std::any_of(blue.begin(), blue.end(), [](auto b) { return b != 0; })) {
    frame.labels.resize(n);
    for (std::size_t v = 0; v < n; ++v) frame.labels[v] = blue[v] >= 128 ? 1 : 0;
  }

  auto report = validate_frame(frame);
  if (!report.ok())
    throw ParseError(reader.offset(), "invalid mesh: " + report.to_string());
  return frame;
}

inline SurfaceFrame parse_ply(std::string_view bytes) {
  return parse_ply(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

// Encodes a frame as binary_little_endian 1.0. Labels go to blue as 0/255.
inline std::vector<std::uint8_t> write_ply(const SurfaceFrame& frame) {
  auto report = validate_frame(frame);
  if (!report.ok()) throw ValidationError(std::move(report));
  const std::vector<PlyProperty> layout =
      frame.extras.layout.empty() ? default_vertex_layout() : frame.extras.layout;
  for (const char* required : {"x", "y", "z", "red", "green", "blue"})
    if (std::none_of(layout.begin(), layout.end(),
                     [&](const auto& p) { return p.name == required; }))
      throw DomainError(std::string("vertex layout lacks '") + required + "'");

  std::string head = "ply\nformat binary_little_endian 1.0\n";
  head += "element vertex " + std::to_string(frame.vertex_count()) + "\n";
  for (const auto& p : layout) {
    const PlyScalar t = (p.name == "x" || p.name == "y" || p.name == "z")
                            ? PlyScalar::Float32
                        : ExtraVertexData::is_standard(p.name) ? PlyScalar::UInt8
                                                                : p.type;
    head += "property " + std::string(scalar_name(t)) + " " + p.name + "\n";
  }
  head += "element face " + std::to_string(frame.mesh.triangle_count()) + "\n";
  head += "property list uchar uint vertex_indices\nend_header\n";

  const std::size_t stride = frame.extras.stride();
  std::vector<std::uint8_t> out(head.begin(), head.end());
  out.reserve(out.size() + frame.vertex_count() * (15 + stride) +
              frame.mesh.triangle_count() * 13);
  auto put = [&](const void* p, std::size_t size) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + size);
  };
  for (std::size_t v = 0; v < frame.vertex_count(); ++v) {
    const std::uint8_t* extra = frame.extras.data.data() + v * stride;
    for (const auto& p : layout) {
      if (p.name == "x" || p.name == "y" || p.name == "z") {
        put(&frame.mesh.vertices[v][p.name[0] - 'x'], 4);
      } else if (p.name == "red") {
        put(&frame.colours.channel0[v], 1);
      } else if (p.name == "green") {
        put(&frame.colours.channel1[v], 1);
      } else if (p.name == "blue") {
        const std::uint8_t b = frame.labelled(static_cast<VertexIndex>(v)) ? 255 : 0;
        put(&b, 1);
      } else {
        put(extra, scalar_size(p.type));
        extra += scalar_size(p.type);
      }
    }
  }
  for (const auto& tri : frame.mesh.triangles) {
    const std::uint8_t three = 3;
    put(&three, 1);
    put(tri.data(), 12);
  }
  return out;
}

}  // namespace surfannot
