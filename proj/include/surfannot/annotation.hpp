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
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "surfannot/distance.hpp"
#include "surfannot/pick.hpp"
#include "surfannot/series.hpp"

namespace surfannot {

using MarkerId = std::uint64_t;

struct Marker {
  MarkerId id = 0;
  std::uint32_t frame = 0;
  Position position{};
  VertexIndex vertex_index = 0;

  friend bool operator==(const Marker&, const Marker&) = default;
};

inline bool same_payload(const Marker& a, const Marker& b) {
  return a.frame == b.frame && a.position == b.position &&
         a.vertex_index == b.vertex_index;
}

// Markers in insertion order. Several markers may share a vertex.
class MarkerSet {
 public:
  MarkerSet() = default;
  explicit MarkerSet(std::vector<Marker> markers) : markers_(std::move(markers)) {}

  std::size_t size() const noexcept { return markers_.size(); }
  bool empty() const noexcept { return markers_.empty(); }
  auto begin() const noexcept { return markers_.begin(); }
  auto end() const noexcept { return markers_.end(); }
  const Marker& operator[](std::size_t i) const { return markers_[i]; }
  const std::vector<Marker>& items() const noexcept { return markers_; }

  std::optional<std::size_t> position_of(MarkerId id) const {
    for (std::size_t i = 0; i < markers_.size(); ++i)
      if (markers_[i].id == id) return i;
    return std::nullopt;
  }
  void insert(std::size_t pos, Marker m) {
    markers_.insert(markers_.begin() + static_cast<std::ptrdiff_t>(pos), m);
  }
  Marker erase(std::size_t pos) {
    Marker m = markers_[pos];
    markers_.erase(markers_.begin() + static_cast<std::ptrdiff_t>(pos));
    return m;
  }

  friend bool operator==(const MarkerSet&, const MarkerSet&) = default;

 private:
  std::vector<Marker> markers_;
};

// Same markers in the same order, ignoring ids.
inline bool same_payload(const MarkerSet& a, const MarkerSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_payload(a[i], b[i])) return false;
  return true;
}

enum class StrokeMode { Paint, Erase };

struct BrushStroke {
  std::uint32_t frame = 0;
  VertexIndex seed = 0;
  double radius = 1.0;
  DistanceMetric metric = DistanceMetric::GeodesicEdgeGraph;
  StrokeMode mode = StrokeMode::Paint;
};

// Reversible record of one annotation mutation.
struct MarkerDelta {
  Marker marker;
  std::size_t position = 0;  // index in the marker list
  bool added = true;
};

struct LabelDelta {
  std::uint32_t frame = 0;
  std::vector<VertexIndex> vertices;  // vertices whose mask flipped
  std::uint8_t value = 1;             // mask value after the stroke
  std::uint8_t label_class = 1;       // reserved; always 1 today
};

using AnnotationDelta = std::variant<MarkerDelta, LabelDelta>;

// What an undo or redo did, for UI refresh.
struct DeltaDescription {
  enum class Kind { MarkerAdded, MarkerRemoved, Labels } kind;
  std::uint32_t frame = 0;
  std::optional<Marker> marker;
  std::vector<VertexIndex> vertices;
  std::uint8_t value = 0;  // current label value of vertices
};

// Linear undo/redo history with a fixed depth; the oldest entries fall off.
class UndoHistory {
 public:
  explicit UndoHistory(std::size_t depth) : depth_(depth) {}

  void push(AnnotationDelta d) {
    redo_.clear();
    undo_.push_back(std::move(d));
    if (undo_.size() > depth_) undo_.pop_front();
  }
  std::optional<AnnotationDelta> pop_undo() {
    if (undo_.empty()) return std::nullopt;
    AnnotationDelta d = std::move(undo_.back());
    undo_.pop_back();
    return d;
  }
  std::optional<AnnotationDelta> pop_redo() {
    if (redo_.empty()) return std::nullopt;
    AnnotationDelta d = std::move(redo_.back());
    redo_.pop_back();
    return d;
  }
  void push_redo(AnnotationDelta d) { redo_.push_back(std::move(d)); }
  void push_undo_keep_redo(AnnotationDelta d) { undo_.push_back(std::move(d)); }
  void clear() { undo_.clear(), redo_.clear(); }

  std::size_t undo_size() const noexcept { return undo_.size(); }
  std::size_t redo_size() const noexcept { return redo_.size(); }
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::size_t depth_;
  std::deque<AnnotationDelta> undo_;
  std::vector<AnnotationDelta> redo_;
};

inline constexpr std::size_t kDefaultUndoDepth = 256;

// Markers and paint for one series. Not synchronized: one owner mutates,
// concurrent readers need external coordination.
class AnnotationState {
 public:
  explicit AnnotationState(std::shared_ptr<const SurfaceSeries> series,
                           std::size_t undo_depth = kDefaultUndoDepth)
      : series_(std::move(series)),
        adjacency_(std::make_unique<AdjacencyCache>(series_->frame_count())),
        history_(undo_depth) {
    labels_.reserve(series_->frame_count());
    for (const auto& f : series_->frames) {
      LabelLayer layer(f.vertex_count(), 0);
      for (VertexIndex v = 0; v < f.vertex_count(); ++v) layer[v] = f.labelled(v);
      labels_.push_back(std::move(layer));
    }
  }

  const SurfaceSeries& series() const noexcept { return *series_; }
  std::shared_ptr<const SurfaceSeries> series_ptr() const noexcept { return series_; }
  std::size_t frame_count() const noexcept { return series_->frame_count(); }
  const MarkerSet& markers() const noexcept { return markers_; }
  const LabelLayer& labels(std::size_t frame) const { return labels_.at(frame); }
  const std::vector<LabelLayer>& all_labels() const noexcept { return labels_; }
  const UndoHistory& history() const noexcept { return history_; }

  const AdjacencyMap& adjacency(std::size_t frame) const {
    check_frame(frame);
    return adjacency_->get(frame, series_->frames[frame].mesh);
  }

  DistanceField region(std::uint32_t frame, VertexIndex seed, double radius,
                       DistanceMetric metric) const {
    check_frame(frame);
    const auto& mesh = series_->frames[frame].mesh;
    if (metric == DistanceMetric::Euclidean)
      return euclidean_distances(mesh, seed, radius);
    return geodesic_distances(mesh, adjacency(frame), seed, radius);
  }

  // Stores a marker on the picked triangle's nearest vertex.
  Marker place_marker(std::uint32_t frame, const PickHit& hit) {
    check_frame(frame);
    const auto& mesh = series_->frames[frame].mesh;
    if (!hit_matches_mesh(mesh, hit))
      throw DomainError("stale pick: hit does not match frame " + std::to_string(frame));
    Marker m{next_id_++, frame, mesh.vertices[hit.nearest_vertex], hit.nearest_vertex};
    const std::size_t pos = markers_.size();
    markers_.insert(pos, m);
    history_.push(MarkerDelta{m, pos, true});
    return m;
  }

  Marker remove_marker(MarkerId id) {
    auto pos = markers_.position_of(id);
    if (!pos) throw NotFoundError("unknown marker id " + std::to_string(id));
    Marker m = markers_.erase(*pos);
    history_.push(MarkerDelta{m, *pos, false});
    return m;
  }

  // Paints or erases every vertex within the stroke radius. Returns the
  // vertices whose mask actually changed, in ascending order.
  std::vector<VertexIndex> apply_stroke(const BrushStroke& stroke) {
    check_frame(stroke.frame);
    if (!std::isfinite(stroke.radius) || stroke.radius <= 0)
      throw DomainError("brush radius must be finite and positive");
    const DistanceField field = region(stroke.frame, stroke.seed, stroke.radius, stroke.metric);
    const std::uint8_t target = stroke.mode == StrokeMode::Paint ? 1 : 0;
    LabelLayer& layer = labels_[stroke.frame];
    std::vector<VertexIndex> changed;
    for (const auto& e : field) {
      if (layer[e.vertex] != target) {
        layer[e.vertex] = target;
        changed.push_back(e.vertex);
      }
    }
    history_.push(LabelDelta{stroke.frame, changed, target});
    return changed;
  }

  // nullopt when there is nothing to undo.
  std::optional<DeltaDescription> undo() {
    auto d = history_.pop_undo();
    if (!d) return std::nullopt;
    auto desc = apply_delta(*d, /*forward=*/false);
    history_.push_redo(std::move(*d));
    return desc;
  }

  std::optional<DeltaDescription> redo() {
    auto d = history_.pop_redo();
    if (!d) return std::nullopt;
    auto desc = apply_delta(*d, /*forward=*/true);
    history_.push_undo_keep_redo(std::move(*d));
    return desc;
  }

  // Replaces all markers (session load). Clears history; ids are reassigned.
  void load_markers(const MarkerSet& markers) {
    std::vector<Marker> fresh;
    MarkerId id = 1;
    for (Marker m : markers) {
      check_frame(m.frame);
      if (m.vertex_index >= series_->frames[m.frame].vertex_count())
        throw DomainError("marker vertex out of range");
      m.id = id++;
      fresh.push_back(m);
    }
    markers_ = MarkerSet(std::move(fresh));
    next_id_ = id;
    history_.clear();
  }

  // The series with the current paint as label layers.
  SurfaceSeries labelled_series() const {
    SurfaceSeries out = *series_;
    for (std::size_t i = 0; i < out.frame_count(); ++i)
      out.frames[i].labels = any_labelled(labels_[i]) ? labels_[i] : LabelLayer{};
    return out;
  }

  void check_frame(std::size_t frame) const {
    if (frame >= series_->frame_count())
      throw NotFoundError("frame " + std::to_string(frame) + " out of range");
  }

 private:
  DeltaDescription apply_delta(const AnnotationDelta& d, bool forward) {
    if (const auto* md = std::get_if<MarkerDelta>(&d)) {
      const bool add = md->added == forward;
      if (add) markers_.insert(md->position, md->marker);
      else markers_.erase(md->position);
      return {add ? DeltaDescription::Kind::MarkerAdded : DeltaDescription::Kind::MarkerRemoved,
              md->marker.frame, md->marker, {}, 0};
    }
    const auto& ld = std::get<LabelDelta>(d);
    const std::uint8_t value = forward ? ld.value : static_cast<std::uint8_t>(!ld.value);
    LabelLayer& layer = labels_[ld.frame];
    for (VertexIndex v : ld.vertices) layer[v] = value;
    return {DeltaDescription::Kind::Labels, ld.frame, std::nullopt, ld.vertices, value};
  }

  std::shared_ptr<const SurfaceSeries> series_;
  std::unique_ptr<AdjacencyCache> adjacency_;
  MarkerSet markers_;
  std::vector<LabelLayer> labels_;
  UndoHistory history_;
  MarkerId next_id_ = 1;
};

}  // namespace surfannot
