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
#include <span>
#include <vector>

#include "forge/mesh/geometry.hpp"

namespace forge {

/// Static k-d tree over a point cloud for nearest-distance queries.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::span<const Vec3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Distance to the nearest indexed point, or `upper` if none is closer.
  double nearest_distance(const Vec3& p,
                          double upper = std::numeric_limits<double>::infinity()) const;

  /// Minimum distance between any query point and any indexed point.
  double min_distance(std::span<const Vec3> queries,
                      double upper = std::numeric_limits<double>::infinity()) const;

 private:
  void build(std::size_t lo, std::size_t hi);
  void search(std::size_t lo, std::size_t hi, const Vec3& p, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<std::uint8_t> split_axis_;
};

}  // namespace forge
