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
#include <string_view>

#include "forge/mesh/trimesh.hpp"

namespace forge {

enum class BoxKind { kAabb, kPobb, kGobb };

std::string_view to_string(BoxKind kind);

struct OrientedBox {
  Vec3 center = Vec3::Zero();
  /// Columns are the (orthonormal, right-handed) box directions.
  Mat3 axes = Mat3::Identity();
  /// Full side lengths along each axis.
  Vec3 extents = Vec3::Zero();
  BoxKind kind = BoxKind::kAabb;
  /// Set when principal directions were not unique and a fallback frame was
  /// chosen for the ambiguous subspace.
  bool degenerate = false;

  double volume() const { return extents.prod(); }
  Vec3 axis(int i) const { return axes.col(i); }
  bool contains(const Vec3& p, double tolerance = 1e-6) const;
  std::array<Vec3, 8> corners() const;
};

/// Area-weighted surface statistics of a face selection (exact integrals over
/// the triangles, independent of tessellation density).
struct SurfaceMoments {
  double area = 0.0;
  Vec3 mean = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
};

SurfaceMoments surface_moments(const TriMesh& mesh, std::span<const std::int32_t> faces);

/// Relative eigenvalue gap below which principal directions are treated as
/// ambiguous.
inline constexpr double kEigenGapTolerance = 1e-9;

/// Box of the requested kind enclosing every vertex of the selection.
OrientedBox bounding_box(const TriMesh& mesh, std::span<const std::int32_t> faces,
                         BoxKind kind);

/// Smallest-volume box among AABB/POBB/GOBB, except that the gravity-aligned
/// box wins whenever its volume is within (1 + gobb_tolerance) of the minimum.
OrientedBox select_descriptor_box(const TriMesh& mesh, std::span<const std::int32_t> faces,
                                  double gobb_tolerance = 0.05);

/// Picks, among the box kinds, the one `select_descriptor_box` would return
/// given precomputed boxes.
const OrientedBox& choose_descriptor(const OrientedBox& aabb, const OrientedBox& pobb,
                                     const OrientedBox& gobb, double gobb_tolerance);

}  // namespace forge
