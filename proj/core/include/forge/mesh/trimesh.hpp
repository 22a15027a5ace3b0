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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "forge/mesh/geometry.hpp"

namespace forge {

using Face = std::array<std::int32_t, 3>;
/// Sorted, duplicate-free list of face indices into a TriMesh.
using FaceSet = std::vector<std::int32_t>;

/// Indexed triangle mesh. Positions are in model units; `unit_scale` converts
/// them to meters. Up is always +Y.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  /// Source material index per face; empty when the source carried none.
  std::vector<std::int32_t> face_material;
  double unit_scale = 1.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  bool empty() const { return faces.empty(); }

  std::array<Vec3, 3> triangle(std::int32_t f) const {
    const Face& t = faces[static_cast<std::size_t>(f)];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }
  double face_area(std::int32_t f) const;
  /// Unit normal following the winding; zero for zero-area faces.
  Vec3 face_normal(std::int32_t f) const;
  Vec3 face_centroid(std::int32_t f) const;

  Aabb bounds() const;
  Aabb bounds(std::span<const std::int32_t> faces) const;

  /// Throws MalformedFile if an index is out of range or a face repeats a
  /// vertex.
  void validate() const;
};

FaceSet all_faces(const TriMesh& mesh);
double total_area(const TriMesh& mesh, std::span<const std::int32_t> faces);

/// Translates the mesh so the center of its axis-aligned bounds is the origin.
/// Returns the applied translation.
Vec3 recenter(TriMesh& mesh);

void transform_in_place(TriMesh& mesh, const RigidTransform& pose);

/// Compact copy holding only `faces` (vertex indices remapped).
TriMesh submesh(const TriMesh& mesh, std::span<const std::int32_t> faces);

/// Appends `src` to `dst`; returns the index of the first appended face.
std::int32_t append(TriMesh& dst, const TriMesh& src);

/// True when every edge of the selection (after welding coincident vertices
/// within `weld_tolerance`) is shared by an even, nonzero number of selected
/// faces. Flush-stacked closed shells stay closed.
bool is_closed(const TriMesh& mesh, std::span<const std::int32_t> faces,
               double weld_tolerance = 1e-6);

/// Welded vertex representative per vertex: vertices within `tolerance` of
/// each other (transitively) share the smallest index of their group.
std::vector<std::int32_t> weld_vertices(const TriMesh& mesh, double tolerance);

/// Closed axis-aligned box with outward winding (12 triangles).
TriMesh make_box(const Vec3& min, const Vec3& max);

/// Closed oriented box: `axes` columns are the box directions, `extents` full
/// side lengths.
TriMesh make_oriented_box(const Vec3& center, const Mat3& axes,
                          const Vec3& extents);

// Closed prism approximating a cylinder; `axis` need not be unit.
TriMesh make_cylinder(const Vec3& base_center, const Vec3& axis, double radius,
                      double length, int segments = 16);

}  // namespace forge
