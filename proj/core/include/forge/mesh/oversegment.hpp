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
#include <vector>

#include "forge/mesh/trimesh.hpp"

namespace forge {

/// Partition of a mesh's faces into edge-connected segments.
struct OverSegmentation {
  std::vector<std::int32_t> segment_of_face;
  /// Sorted face lists, ordered by their smallest face index.
  std::vector<FaceSet> segments;

  std::size_t size() const { return segments.size(); }
};

inline constexpr double kDefaultWeldTolerance = 1e-6;

/// Connected components of the face-adjacency graph, where two faces are
/// adjacent iff they share an edge after welding vertices closer than
/// `weld_tolerance` (inclusive).
OverSegmentation oversegment(const TriMesh& mesh,
                             double weld_tolerance = kDefaultWeldTolerance);

}  // namespace forge
