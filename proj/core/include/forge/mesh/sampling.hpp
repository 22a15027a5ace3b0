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
#include <span>
#include <vector>

#include "forge/mesh/trimesh.hpp"

namespace forge {

struct PointSet {
  std::vector<Vec3> points;
  std::vector<std::int32_t> source_face;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
  Vec3 centroid() const;
};

/// Area-weighted uniform samples over `faces`. Identical seeds give
/// bit-identical output. Throws ZeroArea if the selection has no area.
PointSet sample_surface(const TriMesh& mesh, std::span<const std::int32_t> faces,
                        std::size_t count, std::uint64_t seed);

}  // namespace forge
