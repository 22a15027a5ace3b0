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
#include <string>
#include <string_view>
#include <vector>

#include "forge/mesh/trimesh.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

enum class DeltaSource { kDrawerCompletion, kShelf, kRail, kDivider, kParametricPart, kExemplar };

std::string_view to_string(DeltaSource source);

/// Geometry to attach to one part, existing or new.
struct DeltaPart {
  std::int32_t owner = -1;
  bool new_part = false;
  /// Label for new parts; ignored for existing owners.
  std::string label;
  DeltaSource source = DeltaSource::kDrawerCompletion;
  TriMesh geometry;
};

struct GeometryDelta {
  std::vector<DeltaPart> parts;
  /// Notes for the verification queue ("inherited_material", ...).
  std::vector<std::string> flags;

  bool empty() const { return parts.empty(); }
  std::size_t face_count() const;
  /// All added geometry in one mesh, in part order.
  TriMesh combined() const;
};

/// Area-weighted most common material among `faces`, or -1 if the mesh has
/// no materials.
std::int32_t dominant_material(const TriMesh& mesh, std::span<const std::int32_t> faces);

/// Appends the delta to `mesh` and `parts`, re-describing touched parts.
/// Generated faces take `material` when the mesh carries materials. Returns
/// the ids of parts created.
std::vector<std::int32_t> apply_delta(TriMesh& mesh, PartSet& parts, const GeometryDelta& delta,
                                      const ClusteringParams& describe, std::int32_t material = -1);

}  // namespace forge
