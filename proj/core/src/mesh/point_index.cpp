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

#include "forge/mesh/point_index.hpp"

#include <algorithm>
#include <cmath>

namespace forge {

namespace {
constexpr std::size_t kLeafSize = 8;
}

PointIndex::PointIndex(std::span<const Vec3> points)
    : points_(points.begin(), points.end()), split_axis_(points.size(), 0) {
  build(0, points_.size());
}

void PointIndex::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) return;
  Aabb box;
  for (std::size_t i = lo; i < hi; ++i) box.expand(points_[i]);
  int axis = 0;
  box.extent().maxCoeff(&axis);
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(points_.begin() + static_cast<std::ptrdiff_t>(lo),
                   points_.begin() + static_cast<std::ptrdiff_t>(mid),
                   points_.begin() + static_cast<std::ptrdiff_t>(hi),
                   [axis](const Vec3& a, const Vec3& b) { return a[axis] < b[axis]; });
  split_axis_[mid] = static_cast<std::uint8_t>(axis);
  build(lo, mid);
  build(mid + 1, hi);
}

void PointIndex::search(std::size_t lo, std::size_t hi, const Vec3& p, double& best_sq) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t i = lo; i < hi; ++i) best_sq = std::min(best_sq, (points_[i] - p).squaredNorm());
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const int axis = split_axis_[mid];
  const double delta = p[axis] - points_[mid][axis];
  best_sq = std::min(best_sq, (points_[mid] - p).squaredNorm());
  const bool left_first = delta < 0.0;
  if (left_first) {
    search(lo, mid, p, best_sq);
    if (delta * delta < best_sq) search(mid + 1, hi, p, best_sq);
  } else {
    search(mid + 1, hi, p, best_sq);
    if (delta * delta < best_sq) search(lo, mid, p, best_sq);
  }
}

double PointIndex::nearest_distance(const Vec3& p, double upper) const {
  double best_sq = upper * upper;
  search(0, points_.size(), p, best_sq);
  return std::min(upper, std::sqrt(best_sq));
}

double PointIndex::min_distance(std::span<const Vec3> queries, double upper) const {
  double best = upper;
  for (const Vec3& q : queries) best = nearest_distance(q, best);
  return best;
}

}  // namespace forge
