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
#include <cctype>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "surfannot/ply.hpp"

namespace surfannot {

struct SurfaceSeries {
  std::vector<SurfaceFrame> frames;

  std::size_t frame_count() const noexcept { return frames.size(); }
  const SurfaceFrame& frame(std::size_t i) const { return frames.at(i); }
};

// Natural ordering of file names: digit runs compare by numeric value,
// everything else case-insensitively. Remaining ties fall back to a plain
// byte comparison so the order is total.
inline int natural_compare(std::string_view a, std::string_view b) {
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0, j = 0;
  int leading_zero_tiebreak = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t si = i, sj = j;
      while (i < a.size() && is_digit(a[i])) ++i;
      while (j < b.size() && is_digit(b[j])) ++j;
      std::string_view ra = a.substr(si, i - si), rb = b.substr(sj, j - sj);
      const std::size_t za = ra.find_first_not_of('0'), zb = rb.find_first_not_of('0');
      std::string_view na = za == std::string_view::npos ? "" : ra.substr(za);
      std::string_view nb = zb == std::string_view::npos ? "" : rb.substr(zb);
      if (na.size() != nb.size()) return na.size() < nb.size() ? -1 : 1;
      if (int c = na.compare(nb); c != 0) return c < 0 ? -1 : 1;
      if (leading_zero_tiebreak == 0 && ra.size() != rb.size())
        leading_zero_tiebreak = ra.size() < rb.size() ? -1 : 1;
      continue;
    }
    const int ca = std::tolower(static_cast<unsigned char>(a[i]));
    const int cb = std::tolower(static_cast<unsigned char>(b[j]));
    if (ca != cb) return ca < cb ? -1 : 1;
    ++i, ++j;
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  if (leading_zero_tiebreak != 0) return leading_zero_tiebreak;
  if (int c = a.compare(b); c != 0) return c < 0 ? -1 : 1;
  return 0;
}

inline bool natural_less(std::string_view a, std::string_view b) {
  return natural_compare(a, b) < 0;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()),
                           static_cast<std::streamsize>(size)))
    throw IoError("cannot read " + path.string());
  return bytes;
}

inline void write_file(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

inline SurfaceFrame load_frame(const std::filesystem::path& path) {
  auto bytes = read_file(path);
  SurfaceFrame frame = parse_ply(std::span<const std::uint8_t>(bytes));
  frame.source_path = path.string();
  return frame;
}

inline bool has_ply_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".ply";
}

inline void sort_frame_paths(std::vector<std::filesystem::path>& files) {
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    const int c = natural_compare(a.filename().string(), b.filename().string());
    return c != 0 ? c < 0 : a.string() < b.string();
  });
}

// Loads the given files as one series in natural filename order. Every file
// is attempted; any failure fails the whole load with one diagnostic per
// offending file.
inline SurfaceSeries load_series(std::vector<std::filesystem::path> files) {
  if (files.empty()) throw SeriesLoadError("no .ply files to load");
  sort_frame_paths(files);

  SurfaceSeries series;
  series.frames.resize(files.size());
  std::vector<std::string> errors(files.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < files.size(); i += workers) {
        try {
          series.frames[i] = load_frame(files[i]);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    }));
  }
  for (auto& j : jobs) j.get();

  std::vector<FileDiagnostic> diags;
  for (std::size_t i = 0; i < files.size(); ++i)
    if (!errors[i].empty()) diags.push_back({files[i].string(), errors[i]});
  if (!diags.empty()) throw SeriesLoadError(std::move(diags));
  return series;
}

inline std::vector<std::filesystem::path> list_ply_files(
    const std::filesystem::path& directory) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec))
    throw SeriesLoadError("not a directory: " + directory.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory))
    if (entry.is_regular_file() && has_ply_extension(entry.path()))
      files.push_back(entry.path());
  if (files.empty())
    throw SeriesLoadError("no .ply files in " + directory.string());
  sort_frame_paths(files);
  return files;
}

inline SurfaceSeries load_series(const std::filesystem::path& directory) {
  return load_series(list_ply_files(directory));
}

inline std::string labelled_filename(const SurfaceFrame& frame, std::size_t index,
                                     std::string_view suffix) {
  std::string stem = frame.source_path.empty()
                         ? "frame_" + std::to_string(index)
                         : std::filesystem::path(frame.source_path).stem().string();
  if (!suffix.empty() && stem.ends_with(suffix)) return stem + ".ply";
  return stem + std::string(suffix) + ".ply";
}

// Writes one binary .ply per frame into directory, named <stem><suffix>.ply.
inline std::vector<std::filesystem::path> save_labelled_series(
    const SurfaceSeries& series, const std::filesystem::path& directory,
    std::string_view suffix = "_labelled") {
  std::vector<std::filesystem::path> out;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.frame_count(); ++i) {
    names.push_back(labelled_filename(series.frames[i], i, suffix));
    for (std::size_t k = 0; k + 1 < names.size(); ++k)
      if (names[k] == names.back())
        throw IoError("two frames map to the same output file " + names.back());
  }
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (!std::filesystem::is_directory(directory))
    throw IoError("cannot create directory " + directory.string());
  for (std::size_t i = 0; i < series.frame_count(); ++i) {
    const auto path = directory / names[i];
    write_file(path, write_ply(series.frames[i]));
    out.push_back(path);
  }
  return out;
}

}  // namespace surfannot
