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

#include "httplib.h"
#include "json.hpp"
#include "surfannot/session.hpp"

namespace surfannot::http {

inline constexpr const char* kApiRoot = "/api/v1";
inline constexpr int kDefaultPort = 8047;

// Malformed request (status 400).
class BadRequest : public Error {
 public:
  using Error::Error;
};

using nlohmann::json;

inline json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
inline json pos_json(const Position& p) { return json::array({p[0], p[1], p[2]}); }

inline Vec3 json_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw BadRequest("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json marker_json(const Marker& m) {
  return {{"id", m.id}, {"frame", m.frame}, {"position", pos_json(m.position)},
          {"vertex_index", m.vertex_index}};
}

inline json hit_json(const PickHit& h) {
  return {{"triangle_index", h.triangle_index}, {"barycentric", vec_json(h.barycentric)},
          {"point", vec_json(h.point)}, {"nearest_vertex", h.nearest_vertex},
          {"distance", h.distance}};
}

inline PickHit json_hit(const json& j) {
  PickHit h;
  h.triangle_index = j.at("triangle_index").get<TriangleIndex>();
  h.barycentric = json_vec(j.at("barycentric"));
  h.point = json_vec(j.at("point"));
  h.nearest_vertex = j.at("nearest_vertex").get<VertexIndex>();
  h.distance = j.at("distance").get<double>();
  return h;
}

inline json delta_json(const std::optional<DeltaDescription>& d) {
  if (!d) return {{"applied", false}};
  const char* kind = d->kind == DeltaDescription::Kind::MarkerAdded     ? "marker_added"
                     : d->kind == DeltaDescription::Kind::MarkerRemoved ? "marker_removed"
                                                                        : "labels";
  json j = {{"applied", true}, {"kind", kind}, {"frame", d->frame}};
  if (d->marker) j["marker"] = marker_json(*d->marker);
  if (d->kind == DeltaDescription::Kind::Labels) {
    j["vertices"] = d->vertices;
    j["value"] = d->value;
  }
  return j;
}

inline json cursor_json(const PlaybackCursor& c) {
  return {{"frame", c.current}, {"playing", c.playing}, {"fps", c.fps}};
}

namespace detail {

inline json body_json(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

inline std::uint64_t body_version(const json& j) {
  if (!j.contains("version") || !j["version"].is_number_unsigned())
    throw BadRequest("mutating requests must carry the current 'version'");
  return j["version"].get<std::uint64_t>();
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
    throw BadRequest(std::string("invalid ") + what);
  return v;
}

// URL frame ids that do not fit are unknown frames, not malformed requests.
inline std::uint32_t frame_param(const httplib::Request& req) {
  std::uint64_t v = 0;
  const std::string s = req.matches[1];
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || v > UINT32_MAX) throw NotFoundError("unknown frame " + s);
  return static_cast<std::uint32_t>(v);
}

inline std::uint8_t byte_param(const httplib::Request& req, const char* key, std::uint8_t fallback) {
  if (!req.has_param(key)) return fallback;
  const int v = parse_number<int>(req.get_param_value(key), key);
  if (v < 0 || v > 255) throw BadRequest(std::string(key) + " must be in [0, 255]");
  return static_cast<std::uint8_t>(v);
}

inline void send_json(httplib::Response& res, const json& j, int status = 200) {
  res.status = status;
  res.set_content(j.dump(), "application/json");
}

inline void send_bytes(httplib::Response& res, const std::vector<std::uint8_t>& bytes) {
  res.set_content(std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                  "application/octet-stream");
}

template <typename F>
httplib::Server::Handler guarded(Session& session, F f) {
  return [&session, f](const httplib::Request& req, httplib::Response& res) {
    auto fail = [&](int status, const std::string& msg) {
      send_json(res, {{"error", msg}, {"version", session.version()}}, status);
    };
    try {
      f(req, res);
    } catch (const BadRequest& e) {
      fail(400, e.what());
    } catch (const json::exception& e) {
      fail(400, e.what());
    } catch (const NotFoundError& e) {
      fail(404, e.what());
    } catch (const VersionConflict& e) {
      fail(409, e.what());
    } catch (const IoError& e) {
      fail(500, e.what());
    } catch (const Error& e) {
      fail(422, e.what());
    }
  };
}

}  // namespace detail

// Installs the /api/v1 endpoints for session on server.
inline void register_routes(httplib::Server& server, Session& session) {
  using namespace detail;
  const std::string root = kApiRoot;
  const std::string frame = root + R"(/frames/(\d+))";

  server.Get(root + "/project", guarded(session, [&](const auto&, auto& res) {
    send_json(res, session.summary());
  }));

  server.Get(frame + "/geometry", guarded(session, [&](const auto& req, auto& res) {
    send_bytes(res, session.geometry(frame_param(req)));
  }));

  server.Get(frame + "/display", guarded(session, [&](const auto& req, auto& res) {
    ThresholdWindow w;
    w.channels[0] = {byte_param(req, "lo0", 0), byte_param(req, "hi0", 255),
                     !req.has_param("en0") || req.get_param_value("en0") != "0"};
    w.channels[1] = {byte_param(req, "lo1", 0), byte_param(req, "hi1", 255),
                     !req.has_param("en1") || req.get_param_value("en1") != "0"};
    for (const auto& c : w.channels)
      if (c.lo > c.hi) throw BadRequest("threshold window requires lo <= hi");
    const RenderMode mode = req.has_param("mode")
                                ? parse_render_mode(req.get_param_value("mode"))
                                : RenderMode::Original;
    send_bytes(res, session.display(frame_param(req), w, mode));
  }));

  server.Post(frame + "/pick", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    const json& r = body.contains("ray") ? body.at("ray") : body;
    Ray ray{json_vec(r.at("origin")), json_vec(r.at("direction"))};
    const double len = norm(ray.direction);
    if (!(len > 0) || !std::isfinite(len)) throw BadRequest("ray direction must be nonzero");
    ray.direction = (1.0 / len) * ray.direction;
    auto hit = session.pick(frame_param(req), ray);
    send_json(res, hit ? json{{"hit", true}, {"pick", hit_json(*hit)}} : json{{"hit", false}});
  }));

  server.Get(root + "/markers", guarded(session, [&](const auto&, auto& res) {
    json list = json::array();
    session.read([&](const Project& p) {
      for (const auto& m : p.annotations.markers()) list.push_back(marker_json(m));
      return 0;
    });
    send_json(res, {{"markers", list}, {"version", session.version()}});
  }));

  server.Post(root + "/markers", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    const auto v = body_version(body);
    auto r = session.add_marker(v, body.at("frame").template get<std::uint32_t>(),
                                json_hit(body.at("pick")));
    send_json(res, {{"version", r.version}, {"marker", marker_json(r.value)}});
  }));

  server.Delete(root + R"(/markers/(\d+))", guarded(session, [&](const auto& req, auto& res) {
    if (!req.has_param("version")) throw BadRequest("missing version query parameter");
    const auto v = parse_number<std::uint64_t>(req.get_param_value("version"), "version");
    const auto id = parse_number<MarkerId>(req.matches[1], "marker id");
    auto r = session.remove_marker(v, id);
    send_json(res, {{"version", r.version}, {"marker", marker_json(r.value)}});
  }));

  server.Post(frame + "/strokes", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    const auto v = body_version(body);
    BrushStroke s;
    s.frame = frame_param(req);
    s.seed = body.at("seed").template get<VertexIndex>();
    s.radius = body.at("radius").template get<double>();
    s.metric = parse_metric(body.value("metric", std::string("geodesic")));
    const std::string mode = body.value("mode", std::string("paint"));
    if (mode != "paint" && mode != "erase") throw BadRequest("mode must be paint or erase");
    s.mode = mode == "paint" ? StrokeMode::Paint : StrokeMode::Erase;
    auto r = session.stroke(v, s);
    send_json(res, {{"version", r.version}, {"changed", r.value}});
  }));

  server.Post(root + "/undo", guarded(session, [&](const auto& req, auto& res) {
    auto r = session.undo(body_version(body_json(req)));
    json j = delta_json(r.value);
    j["version"] = r.version;
    send_json(res, j);
  }));

  server.Post(root + "/redo", guarded(session, [&](const auto& req, auto& res) {
    auto r = session.redo(body_version(body_json(req)));
    json j = delta_json(r.value);
    j["version"] = r.version;
    send_json(res, j);
  }));

  server.Post(frame + "/opacity", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    const auto v = body_version(body);
    auto r = session.set_opacity(v, frame_param(req), body.at("seed").template get<VertexIndex>(),
                                 body.at("radius").template get<double>(),
                                 body.at("alpha").template get<float>(),
                                 parse_metric(body.value("metric", std::string("geodesic"))));
    send_json(res, {{"version", r.version}, {"vertices", r.value}});
  }));

  server.Post(root + "/opacity/reset", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    std::optional<std::uint32_t> f;
    if (body.contains("frame")) f = body.at("frame").template get<std::uint32_t>();
    auto r = session.reset_opacity(body_version(body), f);
    send_json(res, {{"version", r.version}});
  }));

  server.Get(root + "/markers.csv", guarded(session, [&](const auto&, auto& res) {
    res.set_content(session.markers_csv(), "text/csv");
  }));

  server.Get(root + "/tracks.csv", guarded(session, [&](const auto& req, auto& res) {
    if (!req.has_param("channel") || !req.has_param("threshold"))
      throw BadRequest("channel and threshold are required");
    const int channel = parse_number<int>(req.get_param_value("channel"), "channel");
    if (channel != 0 && channel != 1) throw BadRequest("channel must be 0 or 1");
    res.set_content(session.tracks_csv(channel, byte_param(req, "threshold", 0)), "text/csv");
  }));

  server.Get(root + "/cursor", guarded(session, [&](const auto&, auto& res) {
    json j = cursor_json(session.cursor());
    j["version"] = session.version();
    send_json(res, j);
  }));

  server.Post(root + "/cursor", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    const auto v = body_version(body);
    CursorCommand cmd;
    if (body.contains("frame")) {
      cmd = CursorSeek{body.at("frame").template get<std::int64_t>()};
    } else if (body.contains("step")) {
      const int step = body.at("step").template get<int>();
      if (step != 1 && step != -1) throw BadRequest("step must be +1 or -1");
      cmd = CursorStep{step};
    } else if (body.contains("action")) {
      const std::string a = body.at("action").template get<std::string>();
      if (a == "play") cmd = CursorPlay{};
      else if (a == "pause") cmd = CursorPause{};
      else throw BadRequest("action must be play or pause");
    } else if (body.contains("fps")) {
      cmd = CursorRate{body.at("fps").template get<double>()};
    } else {
      throw BadRequest("cursor request needs frame, step, action or fps");
    }
    auto r = session.move_cursor(v, cmd);
    json j = cursor_json(r.value);
    j["version"] = r.version;
    send_json(res, j);
  }));

  server.Post(root + "/save", guarded(session, [&](const auto& req, auto& res) {
    const json body = body_json(req);
    auto manifest = session.save(body.at("directory").template get<std::string>());
    json j = to_json(manifest);
    j["state_version"] = session.version();
    send_json(res, j);
  }));
}

}  // namespace surfannot::http
