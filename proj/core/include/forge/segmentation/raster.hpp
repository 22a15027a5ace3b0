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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/mesh/oversegment.hpp"
#include "forge/mesh/trimesh.hpp"

namespace forge {

enum class Projection { kOrthographic, kPerspective };

struct ViewSpec {
  std::string view_id;
  Vec3 eye = Vec3(0, 0, 3);
  Vec3 target = Vec3::Zero();
  Vec3 up = Vec3::UnitY();
  Projection projection = Projection::kOrthographic;
  /// Half height of the orthographic frustum; width scales by aspect.
  double ortho_half_extent = 1.0;
  /// Vertical field of view for perspective views.
  double fov_y_degrees = 45.0;
  int width = 512;
  int height = 512;

  /// Throws InvalidArgument on non-positive size or a degenerate camera frame.
  void validate() const;
};

/// Row-major grid of ids from the top-left pixel; -1 is background.
struct IdRaster {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> pixels;

  IdRaster() = default;
  IdRaster(int w, int h, std::int32_t fill = -1)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::int32_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::int32_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const IdRaster&) const = default;
};

/// Depth-buffered rasterization of segment ids. Pixel centers are sampled;
/// a center on a triangle edge counts as covered. Nearer depth wins and equal
/// depths keep the lower face index.
IdRaster render_segment_ids(const TriMesh& mesh, const OverSegmentation& overseg,
                            const ViewSpec& view);

/// Same rasterizer, writing face indices instead of segment ids.
IdRaster render_face_ids(const TriMesh& mesh, const ViewSpec& view);

/// Orthographic turntable views around `bounds`: one ring per elevation, each
/// with `azimuths` evenly spaced cameras.
std::vector<ViewSpec> default_views(const Aabb& bounds, int azimuths = 8,
                                    std::span<const double> elevations_degrees = {},
                                    int resolution = 512);

// IRAST format: ASCII "IRAST <w> <h>\n" then w*h little-endian int32.
std::vector<std::uint8_t> encode_raster(const IdRaster& raster);
IdRaster decode_raster(std::span<const std::uint8_t> bytes);
IdRaster read_raster(const std::filesystem::path& path);
void write_raster(const std::filesystem::path& path, const IdRaster& raster);

/// One label per line; line number (from 0) is the label id.
std::vector<std::string> parse_vocabulary(std::string_view text);
std::vector<std::string> read_vocabulary(const std::filesystem::path& path);

nlohmann::json views_to_json(std::span<const ViewSpec> views);
std::vector<ViewSpec> views_from_json(const nlohmann::json& doc);

}  // namespace forge
