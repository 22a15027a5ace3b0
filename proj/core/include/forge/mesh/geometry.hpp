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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <limits>
#include <optional>

namespace forge {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using RigidTransform = Eigen::Isometry3d;

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return (min.array() > max.array()).any(); }
  void expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void expand(const Aabb& o) {
    min = min.cwiseMin(o.min);
    max = max.cwiseMax(o.max);
  }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return empty() ? 0.0 : extent().norm(); }

  double squared_distance(const Vec3& p) const {
    Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
  }
  double squared_distance(const Aabb& o) const {
    Vec3 d = (min - o.max).cwiseMax(o.min - max).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
  }
  /// Slab test; returns entry parameter or nullopt when the ray misses
  /// within [0, t_max].
  std::optional<double> ray_entry(const Vec3& origin, const Vec3& inv_dir,
                                  double t_max) const;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

double point_triangle_squared_distance(const Vec3& p, const Vec3& a,
                                       const Vec3& b, const Vec3& c);

double segment_segment_squared_distance(const Vec3& p1, const Vec3& q1,
                                        const Vec3& p2, const Vec3& q2);

bool segment_intersects_triangle(const Vec3& p, const Vec3& q, const Vec3& a,
                                 const Vec3& b, const Vec3& c);

/// Exact Euclidean distance between two closed triangles (0 when they touch
/// or intersect).
double triangle_triangle_distance(const std::array<Vec3, 3>& t0,
                                  const std::array<Vec3, 3>& t1);

/// Möller–Trumbore intersection; returns the ray parameter of the hit.
std::optional<double> ray_triangle(const Vec3& origin, const Vec3& dir,
                                   const Vec3& a, const Vec3& b,
                                   const Vec3& c);

}  // namespace forge
