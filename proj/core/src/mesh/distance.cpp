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

#include "forge/mesh/distance.hpp"

#include <cmath>

namespace forge {

double min_segment_distance(const TriMesh& mesh, std::span<const std::int32_t> a,
                            std::span<const std::int32_t> b) {
  const TriangleBvh ta(mesh, a);
  const TriangleBvh tb(mesh, b);
  return ta.distance(tb);
}

SegmentDistanceCache::SegmentDistanceCache(const TriMesh& mesh,
                                           const OverSegmentation& overseg)
    : mesh_(mesh), overseg_(overseg), trees_(overseg.size()) {
  boxes_.reserve(overseg.size());
  for (const auto& seg : overseg.segments) boxes_.push_back(mesh.bounds(seg));
}

const TriangleBvh& SegmentDistanceCache::bvh(std::int32_t segment) {
  auto& slot = trees_[static_cast<std::size_t>(segment)];
  if (!slot) {
    slot = std::make_unique<TriangleBvh>(
        mesh_, overseg_.segments[static_cast<std::size_t>(segment)]);
  }
  return *slot;
}

double SegmentDistanceCache::distance(std::int32_t a, std::int32_t b) {
  return bvh(a).distance(bvh(b));
}

bool SegmentDistanceCache::closer_than(std::int32_t a, std::int32_t b, double threshold) {
  if (std::sqrt(bounds(a).squared_distance(bounds(b))) >= threshold) return false;
  return bvh(a).closer_than(bvh(b), threshold);
}

}  // namespace forge
