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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "forge/mesh/trimesh.hpp"

namespace forge {

/// Static bounding-volume hierarchy over a set of triangles. Each triangle
/// keeps its source face index and an integer tag (typically a part id).
class TriangleBvh {
 public:
  struct RayHit {
    double t = 0.0;
    std::int32_t face = -1;
    std::int32_t tag = -1;
  };

  TriangleBvh() = default;
  TriangleBvh(const TriMesh& mesh, std::span<const std::int32_t> faces,
              std::span<const std::int32_t> tags = {});

  bool empty() const { return tris_.empty(); }
  std::size_t size() const { return tris_.size(); }
  const Aabb& bounds() const { return nodes_.empty() ? empty_box_ : nodes_[0].box; }

  /// Distance from `p` to the nearest triangle; returns `upper` if nothing is
  /// closer than `upper`.
  double distance(const Vec3& p,
                  double upper = std::numeric_limits<double>::infinity()) const;
  /// True if some triangle lies within `radius` of `p` (inclusive).
  bool within(const Vec3& p, double radius) const;

  /// Exact minimum triangle–triangle distance to `other`, pruned by `upper`.
  double distance(const TriangleBvh& other,
                  double upper = std::numeric_limits<double>::infinity()) const;
  /// True if the two triangle sets come strictly closer than `threshold`.
  bool closer_than(const TriangleBvh& other, double threshold) const;

  /// All intersections along the ray with parameter in [0, t_max], sorted by t.
  std::vector<RayHit> ray_hits(const Vec3& origin, const Vec3& dir,
                               double t_max = std::numeric_limits<double>::infinity()) const;
  std::optional<RayHit> first_hit(const Vec3& origin, const Vec3& dir,
                                   double t_max = std::numeric_limits<double>::infinity()) const;

 private:
  struct Tri {
    std::array<Vec3, 3> v;
    std::int32_t face;
    std::int32_t tag;
  };
  struct Node {
    Aabb box;
    std::int32_t left = -1;   // child index, or -1 for leaves
    std::int32_t right = -1;
    std::int32_t start = 0;   // leaf range into tris_
    std::int32_t count = 0;
  };

  std::int32_t build(std::int32_t start, std::int32_t count);
  static double tri_distance_sq(const Tri& t, const Vec3& p);

  std::vector<Tri> tris_;
  std::vector<Node> nodes_;
  Aabb empty_box_;
};

}  // namespace forge
