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
#include <memory>
#include <span>
#include <vector>

#include "forge/mesh/bvh.hpp"
#include "forge/mesh/oversegment.hpp"
#include "forge/mesh/trimesh.hpp"

namespace forge {

/// Exact minimum triangle–triangle distance between two face sets.
double min_segment_distance(const TriMesh& mesh, std::span<const std::int32_t> a,
                            std::span<const std::int32_t> b);

/// Lazily built per-segment BVHs for repeated segment-to-segment queries.
class SegmentDistanceCache {
 public:
  SegmentDistanceCache(const TriMesh& mesh, const OverSegmentation& overseg);

  double distance(std::int32_t a, std::int32_t b);
  /// Strictly-below test that stops as soon as a close pair is found.
  bool closer_than(std::int32_t a, std::int32_t b, double threshold);
  const Aabb& bounds(std::int32_t segment) const {
    return boxes_[static_cast<std::size_t>(segment)];
  }

 private:
  const TriangleBvh& bvh(std::int32_t segment);

  const TriMesh& mesh_;
  const OverSegmentation& overseg_;
  std::vector<std::unique_ptr<TriangleBvh>> trees_;
  std::vector<Aabb> boxes_;
};

}  // namespace forge
