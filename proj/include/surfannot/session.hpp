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

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "surfannot/analysis.hpp"
#include "surfannot/annotation.hpp"
#include "surfannot/marker_csv.hpp"
#include "surfannot/series.hpp"
#include "surfannot/view.hpp"

namespace surfannot {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kMarkersFile = "markers.csv";

inline std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

struct ManifestFrame {
  std::string file;
  std::string sha256;
  std::uint64_t vertices = 0;
  std::uint64_t triangles = 0;
  friend bool operator==(const ManifestFrame&, const ManifestFrame&) = default;
};

struct Manifest {
  int version = kManifestVersion;
  std::vector<ManifestFrame> frames;
  std::string markers_file = kMarkersFile;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : m.frames)
    frames.push_back({{"file", f.file},
                      {"sha256", f.sha256},
                      {"vertices", f.vertices},
                      {"triangles", f.triangles}});
  return {{"version", m.version}, {"frames", frames}, {"markers_file", m.markers_file}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    Manifest m;
    m.version = j.at("version").get<int>();
    for (const auto& f : j.at("frames"))
      m.frames.push_back({f.at("file").get<std::string>(), f.at("sha256").get<std::string>(),
                          f.at("vertices").get<std::uint64_t>(),
                          f.at("triangles").get<std::uint64_t>()});
    m.markers_file = j.value("markers_file", std::string(kMarkersFile));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("malformed manifest: ") + e.what());
  }
}

struct PlaybackCursor {
  std::uint32_t current = 0;
  bool playing = false;
  double fps = 5.0;
  friend bool operator==(const PlaybackCursor&, const PlaybackCursor&) = default;
};

struct Project {
  std::string id;
  std::filesystem::path source_directory;
  AnnotationState annotations;
  ViewState view;
  PlaybackCursor cursor;
  bool dirty = false;
  std::vector<std::string> warnings;

  const SurfaceSeries& series() const noexcept { return annotations.series(); }
};

inline std::string random_token() {
  std::random_device rd;
  std::uniform_int_distribution<std::uint64_t> dist;
  const std::uint64_t v = dist(rd);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[i] = kHex[(v >> (4 * i)) & 15];
  return out;
}

inline Project make_project(SurfaceSeries series, std::filesystem::path source = {}) {
  auto shared = std::make_shared<const SurfaceSeries>(std::move(series));
  Project p{random_token(), std::move(source), AnnotationState(shared), {}, {}, false, {}};
  for (const auto& f : shared->frames) p.view.opacity.emplace_back(f.vertex_count());
  return p;
}

// Loads frames listed by a manifest after checking their checksums.
inline SurfaceSeries load_manifest_series(const std::filesystem::path& dir,
                                          const Manifest& manifest) {
  if (manifest.version != kManifestVersion)
    throw IntegrityError("unsupported manifest version " + std::to_string(manifest.version));
  if (manifest.frames.empty()) throw IntegrityError("manifest lists no frames");
  SurfaceSeries series;
  std::vector<FileDiagnostic> diags;
  for (const auto& entry : manifest.frames) {
    const auto path = dir / entry.file;
    std::vector<std::uint8_t> bytes;
    try {
      bytes = read_file(path);
    } catch (const IoError& e) {
      throw IntegrityError("manifest frame missing: " + entry.file);
    }
    if (sha256_hex(bytes) != entry.sha256)
      throw IntegrityError("checksum mismatch for " + entry.file);
    try {
      SurfaceFrame frame = parse_ply(std::span<const std::uint8_t>(bytes));
      frame.source_path = path.string();
      if (frame.vertex_count() != entry.vertices ||
          frame.mesh.triangle_count() != entry.triangles)
        throw IntegrityError("element counts differ from manifest");
      series.frames.push_back(std::move(frame));
    } catch (const Error& e) {
      diags.push_back({path.string(), e.what()});
    }
  }
  if (!diags.empty()) throw SeriesLoadError(std::move(diags));
  return series;
}

// Opens a directory of .ply frames. A manifest, if present, fixes the frame
// list and is integrity-checked; a markers CSV next to the frames is imported.
inline Project open_project(const std::filesystem::path& dir) {
  const auto manifest_path = dir / kManifestFile;
  std::string markers_name = kMarkersFile;
  SurfaceSeries series;
  if (std::filesystem::exists(manifest_path)) {
    auto bytes = read_file(manifest_path);
    nlohmann::json j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (j.is_discarded()) throw IntegrityError("manifest is not valid JSON");
    Manifest manifest = manifest_from_json(j);
    series = load_manifest_series(dir, manifest);
    markers_name = manifest.markers_file;
  } else {
    series = load_series(dir);
  }

  Project project = make_project(std::move(series), dir);
  const auto markers_path = dir / markers_name;
  if (std::filesystem::exists(markers_path)) {
    auto bytes = read_file(markers_path);
    auto imported = import_markers_csv(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
        project.series());
    project.annotations.load_markers(imported.markers);
    project.warnings = std::move(imported.warnings);
  }
  return project;
}

// Writes labelled frames, markers.csv and manifest.json into dest.
inline Manifest save_project(const Project& project, const std::filesystem::path& dest) {
  const SurfaceSeries labelled = project.annotations.labelled_series();
  const auto files = save_labelled_series(labelled, dest);
  Manifest manifest;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto bytes = read_file(files[i]);
    manifest.frames.push_back({files[i].filename().string(), sha256_hex(bytes),
                               labelled.frames[i].vertex_count(),
                               labelled.frames[i].mesh.triangle_count()});
  }
  const std::string csv = export_markers_csv(project.annotations.markers());
  write_file(dest / manifest.markers_file,
             std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  const std::string text = to_json(manifest).dump(2) + "\n";
  write_file(dest / kManifestFile,
             std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return manifest;
}

inline nlohmann::json project_summary(const Project& p) {
  nlohmann::json frames = nlohmann::json::array();
  std::size_t labelled = 0;
  for (std::size_t i = 0; i < p.series().frame_count(); ++i) {
    const auto& f = p.series().frames[i];
    const bool has = any_labelled(p.annotations.labels(i));
    labelled += has;
    frames.push_back({{"index", i},
                      {"file", std::filesystem::path(f.source_path).filename().string()},
                      {"vertices", f.vertex_count()},
                      {"triangles", f.mesh.triangle_count()},
                      {"labelled", has}});
  }
  return {{"id", p.id},
          {"source", p.source_directory.string()},
          {"frame_count", p.series().frame_count()},
          {"frames", frames},
          {"labelled_frames", labelled},
          {"mixed_labels", labelled > 0 && labelled < p.series().frame_count()},
          {"markers", p.annotations.markers().size()},
          {"dirty", p.dirty}};
}

// Binary frame geometry: u32 vertex count, u32 triangle count, f32 xyz per
// vertex, u32 index triples. All little-endian.
inline std::vector<std::uint8_t> encode_geometry(const TriangleMesh& mesh) {
  const auto v = static_cast<std::uint32_t>(mesh.vertex_count());
  const auto t = static_cast<std::uint32_t>(mesh.triangle_count());
  std::vector<std::uint8_t> out(8 + 12 * std::size_t{v} + 12 * std::size_t{t});
  std::memcpy(out.data(), &v, 4);
  std::memcpy(out.data() + 4, &t, 4);
  if (v) std::memcpy(out.data() + 8, mesh.vertices.data(), 12 * std::size_t{v});
  if (t) std::memcpy(out.data() + 8 + 12 * std::size_t{v}, mesh.triangles.data(), 12 * std::size_t{t});
  return out;
}

inline TriangleMesh decode_geometry(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw DomainError("geometry payload too short");
  std::uint32_t v, t;
  std::memcpy(&v, bytes.data(), 4);
  std::memcpy(&t, bytes.data() + 4, 4);
  if (bytes.size() != 8 + 12 * std::size_t{v} + 12 * std::size_t{t})
    throw DomainError("geometry payload length mismatch");
  TriangleMesh mesh;
  mesh.vertices.resize(v);
  mesh.triangles.resize(t);
  if (v) std::memcpy(mesh.vertices.data(), bytes.data() + 8, 12 * std::size_t{v});
  if (t) std::memcpy(mesh.triangles.data(), bytes.data() + 8 + 12 * std::size_t{v}, 12 * std::size_t{t});
  return mesh;
}

// Mutation rejected because the caller's state version is stale.
class VersionConflict : public Error {
 public:
  VersionConflict(std::uint64_t expected, std::uint64_t actual)
      : Error("stale state version " + std::to_string(expected) + " (current " +
              std::to_string(actual) + ")"),
        actual_(actual) {}
  std::uint64_t actual() const noexcept { return actual_; }

 private:
  std::uint64_t actual_;
};

template <typename T>
struct Versioned {
  T value;
  std::uint64_t version;
};

struct CursorSeek { std::int64_t frame; };
struct CursorStep { int delta; };
struct CursorPlay {};
struct CursorPause {};
struct CursorRate { double fps; };
using CursorCommand = std::variant<CursorSeek, CursorStep, CursorPlay, CursorPause, CursorRate>;

// Single owner of a project's mutable state. Mutations are serialized and
// each one that succeeds bumps the state version; a mutation whose expected
// version is stale fails with VersionConflict and changes nothing. Reads
// share the lock and never see a half-applied mutation.
class Session {
 public:
  explicit Session(Project project) : project_(std::move(project)) {}

  std::uint64_t version() const {
    std::shared_lock lock(mutex_);
    return version_;
  }

  // Runs f on a consistent snapshot.
  template <typename F>
  auto read(F&& f) const {
    std::shared_lock lock(mutex_);
    return f(project_);
  }

  nlohmann::json summary() const {
    std::shared_lock lock(mutex_);
    auto j = project_summary(project_);
    j["version"] = version_;
    return j;
  }

  std::vector<std::uint8_t> geometry(std::size_t frame) const {
    std::shared_lock lock(mutex_);
    return encode_geometry(frame_at(frame).mesh);
  }

  std::vector<std::uint8_t> display(std::size_t frame, const ThresholdWindow& window,
                                    RenderMode mode) const {
    std::shared_lock lock(mutex_);
    return compose_display(frame_at(frame), project_.annotations.labels(frame), window,
                           project_.view.opacity[frame], mode);
  }

  std::optional<PickHit> pick(std::size_t frame, const Ray& ray) const {
    std::shared_lock lock(mutex_);
    return ray_pick(frame_at(frame).mesh, ray);
  }

  Versioned<Marker> add_marker(std::uint64_t expected, std::uint32_t frame, const PickHit& hit) {
    return mutate(expected, [&](Project& p) { return p.annotations.place_marker(frame, hit); });
  }

  Versioned<Marker> remove_marker(std::uint64_t expected, MarkerId id) {
    return mutate(expected, [&](Project& p) { return p.annotations.remove_marker(id); });
  }

  Versioned<std::vector<VertexIndex>> stroke(std::uint64_t expected, const BrushStroke& s) {
    return mutate(expected, [&](Project& p) { return p.annotations.apply_stroke(s); });
  }

  // An empty history is not an error; the result is empty and the version
  // is unchanged.
  Versioned<std::optional<DeltaDescription>> undo(std::uint64_t expected) {
    return history_step(expected, true);
  }
  Versioned<std::optional<DeltaDescription>> redo(std::uint64_t expected) {
    return history_step(expected, false);
  }

  Versioned<std::vector<VertexIndex>> set_opacity(std::uint64_t expected, std::uint32_t frame,
                                                  VertexIndex seed, double radius, float alpha,
                                                  DistanceMetric metric = DistanceMetric::GeodesicEdgeGraph) {
    return mutate(expected, [&](Project& p) {
      auto region = p.annotations.region(frame, seed, radius, metric).vertices();
      set_opacity_region(p.view.opacity[frame], std::span<const VertexIndex>(region), alpha);
      return region;
    }, /*dirties=*/false);
  }

  Versioned<bool> reset_opacity(std::uint64_t expected, std::optional<std::uint32_t> frame = {}) {
    return mutate(expected, [&](Project& p) {
      if (frame) {
        p.annotations.check_frame(*frame);
        p.view.opacity[*frame].reset();
      } else {
        p.view.reset_opacity();
      }
      return true;
    }, false);
  }

  Versioned<PlaybackCursor> move_cursor(std::uint64_t expected, const CursorCommand& cmd) {
    return mutate(expected, [&](Project& p) {
      PlaybackCursor& c = p.cursor;
      const auto last = static_cast<std::int64_t>(p.series().frame_count()) - 1;
      if (const auto* seek = std::get_if<CursorSeek>(&cmd)) {
        if (seek->frame < 0 || seek->frame > last)
          throw NotFoundError("frame " + std::to_string(seek->frame) + " out of range");
        c.current = static_cast<std::uint32_t>(seek->frame);
      } else if (const auto* step = std::get_if<CursorStep>(&cmd)) {
        c.current = static_cast<std::uint32_t>(
            std::clamp<std::int64_t>(std::int64_t{c.current} + step->delta, 0, last));
      } else if (std::holds_alternative<CursorPlay>(cmd)) {
        c.playing = true;
      } else if (std::holds_alternative<CursorPause>(cmd)) {
        c.playing = false;
      } else {
        const double fps = std::get<CursorRate>(cmd).fps;
        if (!(fps > 0 && fps <= 240)) throw DomainError("frame rate must be in (0, 240]");
        c.fps = fps;
      }
      return c;
    }, false);
  }

  PlaybackCursor cursor() const {
    std::shared_lock lock(mutex_);
    return project_.cursor;
  }

  std::string markers_csv() const {
    std::shared_lock lock(mutex_);
    return export_markers_csv(project_.annotations.markers());
  }

  std::string tracks_csv(int channel, std::uint8_t threshold) const {
    std::shared_lock lock(mutex_);
    return export_track_csv(
        track_measurements(project_.series(), project_.annotations.markers(), channel, threshold));
  }

  // Saving does not change annotation state, so it needs no version.
  Manifest save(const std::filesystem::path& dest) {
    std::unique_lock lock(mutex_);
    Manifest m = save_project(project_, dest);
    project_.dirty = false;
    return m;
  }

 private:
  const SurfaceFrame& frame_at(std::size_t frame) const {
    project_.annotations.check_frame(frame);
    return project_.series().frames[frame];
  }

  template <typename F>
  auto mutate(std::uint64_t expected, F&& f, bool dirties = true)
      -> Versioned<decltype(f(std::declval<Project&>()))> {
    std::unique_lock lock(mutex_);
    if (expected != version_) throw VersionConflict(expected, version_);
    auto value = f(project_);
    if (dirties) project_.dirty = true;
    return {std::move(value), ++version_};
  }

  Versioned<std::optional<DeltaDescription>> history_step(std::uint64_t expected, bool back) {
    std::unique_lock lock(mutex_);
    if (expected != version_) throw VersionConflict(expected, version_);
    auto desc = back ? project_.annotations.undo() : project_.annotations.redo();
    if (desc) {
      project_.dirty = true;
      ++version_;
    }
    return {std::move(desc), version_};
  }

  mutable std::shared_mutex mutex_;
  Project project_;
  std::uint64_t version_ = 0;
};

}  // namespace surfannot
