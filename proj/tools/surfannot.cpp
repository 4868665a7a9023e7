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

// surfannot command line: serve, validate, export-labels, tracks, info.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "surfannot/http_api.hpp"
#include "surfannot/session.hpp"

namespace {

using namespace surfannot;
namespace fs = std::filesystem;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

bool g_json_errors = false;

int report_error(const std::string& kind, const std::string& message) {
  if (g_json_errors)
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  else
    std::cerr << "error: " << message << "\n";
  return kExitFailure;
}

std::string read_text(const fs::path& p) {
  auto bytes = read_file(p);
  return {bytes.begin(), bytes.end()};
}

int run_info(const fs::path& dir) {
  Project project = open_project(dir);
  const auto summary = project_summary(project);
  if (g_json_errors) {
    std::cout << summary.dump() << "\n";
    return 0;
  }
  std::cout << "frames: " << summary["frame_count"] << "\n";
  for (const auto& f : summary["frames"])
    std::cout << "  " << f["index"] << "  " << f["file"].get<std::string>() << "  vertices "
              << f["vertices"] << "  triangles " << f["triangles"]
              << (f["labelled"].get<bool>() ? "  labelled" : "") << "\n";
  std::cout << "labelled frames: " << summary["labelled_frames"] << "\n";
  std::cout << "markers: " << summary["markers"] << "\n";
  return 0;
}

// Parses every .ply file and reports each one; fails if any file fails.
int run_validate(const fs::path& dir) {
  std::vector<fs::path> files;
  try {
    files = list_ply_files(dir);
  } catch (const Error& e) {
    return report_error("load", e.what());
  }
  std::size_t failures = 0;
  std::string first_error;
  for (const auto& f : files) {
    try {
      SurfaceFrame frame = load_frame(f);
      std::cout << "ok    " << f.filename().string() << "  (" << frame.vertex_count()
                << " vertices, " << frame.mesh.triangle_count() << " triangles)\n";
    } catch (const Error& e) {
      ++failures;
      if (first_error.empty()) first_error = f.filename().string() + ": " + e.what();
      std::cout << "FAIL  " << f.filename().string() << "  " << e.what() << "\n";
    }
  }
  if (failures > 0)
    return report_error("validation", std::to_string(failures) + " of " +
                                          std::to_string(files.size()) +
                                          " files failed; first: " + first_error);
  return 0;
}

int run_export_labels(const fs::path& dir, const fs::path& out, const std::string& suffix) {
  auto written = save_labelled_series(load_series(dir), out, suffix);
  for (const auto& p : written) std::cout << p.string() << "\n";
  return 0;
}

int run_tracks(const fs::path& dir, const fs::path& markers, int channel, int threshold,
               const fs::path& out) {
  SurfaceSeries series = load_series(dir);
  auto imported = import_markers_csv(read_text(markers), series);
  for (const auto& w : imported.warnings) std::cerr << "warning: " << w << "\n";
  const std::string csv = export_track_csv(
      track_measurements(series, imported.markers, channel, static_cast<std::uint8_t>(threshold)));
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
  }
  return 0;
}

httplib::Server* g_server = nullptr;

int run_serve(const fs::path& dir, int port, const std::string& host, const std::string& web_root) {
  Session session(open_project(dir));
  httplib::Server server;
  http::register_routes(server, session);
  if (!web_root.empty() && !server.set_mount_point("/", web_root))
    return report_error("usage", "web root does not exist: " + web_root);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cout << "serving " << dir.string() << " on http://" << host << ":" << port
            << http::kApiRoot << std::endl;
  if (!server.listen(host, port)) return report_error("io", "cannot listen on port " + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotate and analyse time series of cell-surface meshes"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json_errors, "Machine-readable output and one-line JSON errors");

  std::string dir, out, markers, host = "127.0.0.1", web_root, suffix = "_labelled";
  int port = http::kDefaultPort, channel = 1, threshold = 0;

  auto* serve = app.add_subcommand("serve", "Open a project and run the HTTP API");
  serve->add_option("dir", dir, "Series directory")->required();
  auto* port_opt = serve->add_option("--port", port, "Port (default 8047, or $SURFANNOT_PORT)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--web-root", web_root, "Directory of static UI assets");

  auto* validate = app.add_subcommand("validate", "Check every frame of a series");
  validate->add_option("dir", dir, "Series directory")->required();

  auto* export_labels = app.add_subcommand("export-labels", "Write labelled .ply copies of a series");
  export_labels->add_option("dir", dir, "Series directory")->required();
  export_labels->add_option("out", out, "Output directory")->required();
  export_labels->add_option("--suffix", suffix, "Filename suffix");

  auto* tracks = app.add_subcommand("tracks", "Measure thresholded components at markers");
  tracks->add_option("dir", dir, "Series directory")->required();
  tracks->add_option("--markers", markers, "Marker CSV")->required();
  tracks->add_option("--channel", channel, "Channel (0 or 1)")->check(CLI::Range(0, 1));
  tracks->add_option("--threshold", threshold, "Threshold byte")->check(CLI::Range(0, 255));
  tracks->add_option("--out", out, "Output CSV (stdout if omitted)");

  auto* info = app.add_subcommand("info", "Print a series summary");
  info->add_option("dir", dir, "Series directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (g_json_errors) {
      report_error("usage", e.what());
      return kExitUsage;
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*serve) {
      if (port_opt->count() == 0)
        if (const char* env = std::getenv("SURFANNOT_PORT")) port = std::atoi(env);
      return run_serve(dir, port, host, web_root);
    }
    if (*validate) return run_validate(dir);
    if (*export_labels) return run_export_labels(dir, out, suffix);
    if (*tracks) return run_tracks(dir, markers, channel, threshold, out);
    if (*info) return run_info(dir);
  } catch (const SeriesLoadError& e) {
    return report_error("load", e.what());
  } catch (const CsvError& e) {
    return report_error("csv", e.what());
  } catch (const IntegrityError& e) {
    return report_error("integrity", e.what());
  } catch (const IoError& e) {
    return report_error("io", e.what());
  } catch (const Error& e) {
    return report_error("domain", e.what());
  }
  return kExitUsage;
}
