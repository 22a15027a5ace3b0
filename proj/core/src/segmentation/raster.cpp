// Copyright 2026 The Forge Authors.
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

#include "forge/segmentation/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace forge {

void ViewSpec::validate() const {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "view '" + view_id + "' has non-positive size");
  }
  const Vec3 forward = target - eye;
  if (forward.norm() < 1e-12 || forward.normalized().cross(up).norm() < 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "view '" + view_id + "' has a degenerate camera frame");
  }
  if (projection == Projection::kOrthographic && !(ortho_half_extent > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "view '" + view_id + "' has non-positive extent");
  }
  if (projection == Projection::kPerspective && !(fov_y_degrees > 0.0 && fov_y_degrees < 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "view '" + view_id + "' has invalid field of view");
  }
}

namespace {

struct Camera {
  Vec3 eye, right, up, forward;
  bool ortho;
  double sx, sy;  // camera-plane units per NDC unit (ortho) or tan(fov/2)
  double w, h;

  explicit Camera(const ViewSpec& v)
      : eye(v.eye), ortho(v.projection == Projection::kOrthographic), w(v.width), h(v.height) {
    forward = (v.target - v.eye).normalized();
    right = forward.cross(v.up).normalized();
    up = right.cross(forward);
    const double aspect = w / h;
    const double half = ortho ? v.ortho_half_extent
                              : std::tan(0.5 * v.fov_y_degrees * std::numbers::pi / 180.0);
    sy = half;
    sx = half * aspect;
  }

  /// Pixel-space x, y and view depth.
  Vec3 project(const Vec3& p) const {
    const Vec3 d = p - eye;
    const double depth = d.dot(forward);
    double x = d.dot(right), y = d.dot(up);
    if (!ortho) {
      x /= depth;
      y /= depth;
    }
    return {(x / sx + 1.0) * 0.5 * w, (1.0 - y / sy) * 0.5 * h, depth};
  }
};

template <typename IdOf>
IdRaster rasterize(const TriMesh& mesh, const ViewSpec& view, IdOf id_of) {
  view.validate();
  IdRaster out(view.width, view.height);
  std::vector<double> depth(out.pixels.size(), std::numeric_limits<double>::infinity());
  const Camera cam(view);
  constexpr double kNear = 1e-9;

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto tri = mesh.triangle(static_cast<std::int32_t>(f));
    std::array<Vec3, 3> s;
    bool behind = false;
    for (int i = 0; i < 3; ++i) {
      s[i] = cam.project(tri[i]);
      behind |= s[i].z() <= kNear;
    }
    if (behind) continue;
    const double area = (s[1].x() - s[0].x()) * (s[2].y() - s[0].y()) -
                        (s[2].x() - s[0].x()) * (s[1].y() - s[0].y());
    if (area == 0.0) continue;
    const double lo_x = std::min({s[0].x(), s[1].x(), s[2].x()});
    const double hi_x = std::max({s[0].x(), s[1].x(), s[2].x()});
    const double lo_y = std::min({s[0].y(), s[1].y(), s[2].y()});
    const double hi_y = std::max({s[0].y(), s[1].y(), s[2].y()});
    const int x0 = std::max(0, static_cast<int>(std::ceil(lo_x - 0.5)));
    const int x1 = std::min(view.width - 1, static_cast<int>(std::floor(hi_x - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(lo_y - 0.5)));
    const int y1 = std::min(view.height - 1, static_cast<int>(std::floor(hi_y - 0.5)));
    if (x0 > x1 || y0 > y1) continue;
    const std::int32_t id = id_of(static_cast<std::int32_t>(f));
    for (int y = y0; y <= y1; ++y) {
      const double py = y + 0.5;
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5;
        // Edge functions, normalized by the signed area so inside is >= 0 for
        // both windings.
        double b[3];
        for (int i = 0; i < 3; ++i) {
          const Vec3& a = s[(i + 1) % 3];
          const Vec3& c = s[(i + 2) % 3];
          b[i] = ((c.x() - a.x()) * (py - a.y()) - (px - a.x()) * (c.y() - a.y())) / area;
        }
        if (b[0] < 0.0 || b[1] < 0.0 || b[2] < 0.0) continue;
        const double sum = b[0] + b[1] + b[2];
        double z;
        if (cam.ortho) {
          z = (b[0] * s[0].z() + b[1] * s[1].z() + b[2] * s[2].z()) / sum;
        } else {
          z = sum / (b[0] / s[0].z() + b[1] / s[1].z() + b[2] / s[2].z());
        }
        const std::size_t k = static_cast<std::size_t>(y) * view.width + x;
        if (z < depth[k]) {
          depth[k] = z;
          out.pixels[k] = id;
        }
      }
    }
  }
  return out;
}

}  // namespace

IdRaster render_segment_ids(const TriMesh& mesh, const OverSegmentation& overseg,
                            const ViewSpec& view) {
  return rasterize(mesh, view, [&](std::int32_t f) {
    return overseg.segment_of_face[static_cast<std::size_t>(f)];
  });
}

IdRaster render_face_ids(const TriMesh& mesh, const ViewSpec& view) {
  return rasterize(mesh, view, [](std::int32_t f) { return f; });
}

std::vector<ViewSpec> default_views(const Aabb& bounds, int azimuths,
                                    std::span<const double> elevations_degrees, int resolution) {
  static constexpr double kDefaultElevations[] = {30.0, -10.0};
  if (elevations_degrees.empty()) elevations_degrees = kDefaultElevations;
  const Vec3 center = bounds.empty() ? Vec3::Zero() : bounds.center();
  const double radius = std::max(0.5 * bounds.diagonal(), 1e-6);
  std::vector<ViewSpec> views;
  int ring = 0;
  for (double elevation : elevations_degrees) {
    const double el = elevation * std::numbers::pi / 180.0;
    for (int a = 0; a < azimuths; ++a) {
      const double az = 2.0 * std::numbers::pi * a / azimuths;
      const Vec3 dir(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
      ViewSpec v;
      v.view_id = "r" + std::to_string(ring) + "_a" + std::to_string(a);
      v.eye = center + 3.0 * radius * dir;
      v.target = center;
      v.up = Vec3::UnitY();
      v.ortho_half_extent = 1.05 * radius;
      v.width = v.height = resolution;
      views.push_back(v);
    }
    ++ring;
  }
  return views;
}

std::vector<std::uint8_t> encode_raster(const IdRaster& raster) {
  const std::string header =
      "IRAST " + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + raster.pixels.size() * 4);
  for (std::int32_t v : raster.pixels) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
  }
  return out;
}

IdRaster decode_raster(std::span<const std::uint8_t> bytes) {
  const auto newline = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (newline == bytes.end()) throw Error(ErrorCode::kMalformedFile, "IRAST header missing");
  std::istringstream header(std::string(bytes.begin(), newline));
  std::string magic;
  long long w = -1, h = -1;
  header >> magic >> w >> h;
  if (magic != "IRAST" || !header || w <= 0 || h <= 0) {
    throw Error(ErrorCode::kMalformedFile, "bad IRAST header");
  }
  const std::size_t offset = static_cast<std::size_t>(newline - bytes.begin()) + 1;
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - offset != count * 4) {
    throw Error(ErrorCode::kMalformedFile, "IRAST payload size does not match header");
  }
  IdRaster out(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[offset + 4 * i + b]) << (8 * b);
    const auto v = static_cast<std::int32_t>(u);
    if (v < -1) throw Error(ErrorCode::kMalformedFile, "IRAST value below -1");
    out.pixels[i] = v;
  }
  return out;
}

IdRaster read_raster(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_raster(bytes);
}

void write_raster(const std::filesystem::path& path, const IdRaster& raster) {
  const auto bytes = encode_raster(raster);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::vector<std::string> parse_vocabulary(std::string_view text) {
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
    start = end + 1;
  }
  return labels;
}

std::vector<std::string> read_vocabulary(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_vocabulary(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

namespace {
nlohmann::json vec_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }
Vec3 json_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kMalformedFile, "expected 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}
}  // namespace

nlohmann::json views_to_json(std::span<const ViewSpec> views) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : views) {
    nlohmann::json j;
    j["view_id"] = v.view_id;
    j["eye"] = vec_json(v.eye);
    j["target"] = vec_json(v.target);
    j["up"] = vec_json(v.up);
    j["projection"] = v.projection == Projection::kOrthographic ? "orthographic" : "perspective";
    if (v.projection == Projection::kOrthographic) {
      j["ortho_half_extent"] = v.ortho_half_extent;
    } else {
      j["fov_y_degrees"] = v.fov_y_degrees;
    }
    j["width"] = v.width;
    j["height"] = v.height;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<ViewSpec> views_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedFile, "views document must be an array");
  std::vector<ViewSpec> views;
  try {
    for (const auto& j : doc) {
      ViewSpec v;
      v.view_id = j.at("view_id").get<std::string>();
      v.eye = json_vec(j.at("eye"));
      v.target = json_vec(j.at("target"));
      v.up = json_vec(j.value("up", nlohmann::json::array({0.0, 1.0, 0.0})));
      const std::string proj = j.value("projection", std::string("orthographic"));
      if (proj == "orthographic") {
        v.projection = Projection::kOrthographic;
        v.ortho_half_extent = j.at("ortho_half_extent").get<double>();
      } else if (proj == "perspective") {
        v.projection = Projection::kPerspective;
        v.fov_y_degrees = j.at("fov_y_degrees").get<double>();
      } else {
        throw Error(ErrorCode::kMalformedFile, "unknown projection '" + proj + "'");
      }
      v.width = j.at("width").get<int>();
      v.height = j.at("height").get<int>();
      v.validate();
      views.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("views document: ") + e.what());
  }
  return views;
}

}  // namespace forge
