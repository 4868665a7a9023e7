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
#include <string_view>
#include <vector>

#include "surfannot/distance.hpp"
#include "surfannot/ply.hpp"

namespace surfannot {

struct ChannelWindow {
  std::uint8_t lo = 0;
  std::uint8_t hi = 255;
  bool enabled = true;
};

struct ThresholdWindow {
  std::array<ChannelWindow, 2> channels{};

  void validate() const {
    for (const auto& w : channels)
      if (w.lo > w.hi) throw DomainError("threshold window requires lo <= hi");
  }
};

// Contrast stretch of [lo, hi] onto [0, 255]. A window with lo == hi is a
// binary cut at that value.
inline std::uint8_t apply_threshold(std::uint8_t value, const ChannelWindow& w) {
  if (w.lo > w.hi) throw DomainError("threshold window requires lo <= hi");
  if (!w.enabled) return value;
  if (w.lo == w.hi) return value >= w.hi ? 255 : 0;
  if (value <= w.lo) return 0;
  if (value >= w.hi) return 255;
  // round-half-up of (value - lo) * 255 / (hi - lo)
  const unsigned span = w.hi - w.lo;
  return static_cast<std::uint8_t>((2u * (value - w.lo) * 255u + span) / (2u * span));
}

enum class RenderMode { Original, TwoTone, CutOut };

inline std::string_view to_string(RenderMode m) {
  switch (m) {
    case RenderMode::TwoTone: return "two_tone";
    case RenderMode::CutOut: return "cut_out";
    default: return "original";
  }
}

inline RenderMode parse_render_mode(std::string_view s) {
  if (s == "original") return RenderMode::Original;
  if (s == "two_tone" || s == "twotone") return RenderMode::TwoTone;
  if (s == "cut_out" || s == "cutout") return RenderMode::CutOut;
  throw DomainError("unknown render mode '" + std::string(s) + "'");
}

namespace palette {
inline constexpr std::array<std::uint8_t, 3> kLabel{255, 255, 0};
inline constexpr std::array<std::uint8_t, 3> kBase{40, 40, 40};
inline constexpr std::array<std::uint8_t, 3> kBlockOut{40, 40, 40};
}  // namespace palette

// Per-vertex alpha for one frame. Empty means fully opaque.
struct OpacityOverride {
  std::vector<float> alpha;

  explicit OpacityOverride(std::size_t vertex_count = 0) : alpha(vertex_count, 1.0f) {}

  void reset() { std::fill(alpha.begin(), alpha.end(), 1.0f); }
  float at(std::size_t v) const { return alpha.empty() ? 1.0f : alpha[v]; }
};

// Writes alpha on exactly the given vertices. Later writes win on overlap.
inline void set_opacity_region(OpacityOverride& opacity,
                               std::span<const VertexIndex> region, float alpha) {
  if (!(alpha >= 0.0f && alpha <= 1.0f))
    throw DomainError("alpha must lie in [0, 1]");
  for (VertexIndex v : region)
    if (v >= opacity.alpha.size())
      throw DomainError("opacity region vertex " + std::to_string(v) + " out of range");
  for (VertexIndex v : region) opacity.alpha[v] = alpha;
}

inline void set_opacity_region(OpacityOverride& opacity, const DistanceField& region,
                               float alpha) {
  auto vertices = region.vertices();
  set_opacity_region(opacity, std::span<const VertexIndex>(vertices), alpha);
}

inline std::uint8_t alpha_byte(float a) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(a, 0.0f, 1.0f) * 255.0f));
}

// RGBA bytes per vertex, in vertex order. labels may be empty (none) and
// opacity may be empty (opaque).
inline std::vector<std::uint8_t> compose_display(const ChannelData& colours,
                                                 const LabelLayer& labels,
                                                 const ThresholdWindow& thresholds,
                                                 const OpacityOverride& opacity,
                                                 RenderMode mode) {
  thresholds.validate();
  const std::size_t n = colours.channel0.size();
  if (colours.channel1.size() != n || (!labels.empty() && labels.size() != n) ||
      (!opacity.alpha.empty() && opacity.alpha.size() != n))
    throw DomainError("display inputs have inconsistent lengths");

  std::vector<std::uint8_t> out(4 * n);
  for (std::size_t v = 0; v < n; ++v) {
    const bool labelled = !labels.empty() && labels[v] != 0;
    std::uint8_t* px = out.data() + 4 * v;
    auto put = [px](const std::array<std::uint8_t, 3>& c) {
      px[0] = c[0], px[1] = c[1], px[2] = c[2];
    };
    if (mode == RenderMode::TwoTone) {
      put(labelled ? palette::kLabel : palette::kBase);
    } else if (mode == RenderMode::CutOut && !labelled) {
      put(palette::kBlockOut);
    } else {
      px[0] = apply_threshold(colours.channel0[v], thresholds.channels[0]);
      px[1] = apply_threshold(colours.channel1[v], thresholds.channels[1]);
      px[2] = 0;
    }
    px[3] = alpha_byte(opacity.at(v));
  }
  return out;
}

inline std::vector<std::uint8_t> compose_display(const SurfaceFrame& frame,
                                                 const LabelLayer& labels,
                                                 const ThresholdWindow& thresholds,
                                                 const OpacityOverride& opacity,
                                                 RenderMode mode) {
  return compose_display(frame.colours, labels, thresholds, opacity, mode);
}

// View settings of an open project. Opacity is per frame and never saved.
struct ViewState {
  ThresholdWindow thresholds;
  RenderMode mode = RenderMode::Original;
  std::vector<OpacityOverride> opacity;

  void reset_opacity() {
    for (auto& o : opacity) o.reset();
  }
};

}  // namespace surfannot
