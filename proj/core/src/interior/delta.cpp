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
#include "forge/interior/delta.hpp"

#include <algorithm>
#include <map>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(DeltaSource source) {
  switch (source) {
    case DeltaSource::kDrawerCompletion: return "drawer_completion";
    case DeltaSource::kShelf: return "shelf";
    case DeltaSource::kRail: return "rail";
    case DeltaSource::kDivider: return "divider";
    case DeltaSource::kParametricPart: return "parametric_part";
    case DeltaSource::kExemplar: return "exemplar";
  }
  return "?";
}

std::size_t GeometryDelta::face_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.geometry.face_count();
  return n;
}

TriMesh GeometryDelta::combined() const {
  TriMesh out;
  for (const auto& p : parts) append(out, p.geometry);
  return out;
}

std::int32_t dominant_material(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  if (mesh.face_material.empty()) return -1;
  std::map<std::int32_t, double> area;
  for (auto f : faces) area[mesh.face_material[static_cast<std::size_t>(f)]] += mesh.face_area(f);
  std::int32_t best = -1;
  double best_area = -1.0;
  for (const auto& [m, a] : area) {
    if (a > best_area) {
      best = m;
      best_area = a;
    }
  }
  return best;
}

std::vector<std::int32_t> apply_delta(TriMesh& mesh, PartSet& parts, const GeometryDelta& delta,
                                      const ClusteringParams& describe, std::int32_t material) {
  std::vector<std::int32_t> created;
  std::vector<std::int32_t> touched;
  for (const auto& piece : delta.parts) {
    if (piece.geometry.empty()) continue;
    TriMesh geometry = piece.geometry;
    if (!mesh.face_material.empty() || material >= 0) {
      geometry.face_material.assign(geometry.face_count(), std::max(material, 0));
    }
    const std::int32_t first = append(mesh, geometry);
    FaceSet added(geometry.face_count());
    for (std::size_t i = 0; i < added.size(); ++i) added[i] = first + static_cast<std::int32_t>(i);

    if (piece.new_part) {
      if (parts.find(piece.owner) != nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "new part id " + std::to_string(piece.owner) + " is taken");
      }
      PartInstance part;
      part.id = piece.owner;
      part.label = piece.label;
      part.faces = std::move(added);
      parts.parts.push_back(std::move(part));
      created.push_back(piece.owner);
    } else {
      PartInstance& part = parts.at(piece.owner);
      part.faces.insert(part.faces.end(), added.begin(), added.end());
      std::sort(part.faces.begin(), part.faces.end());
    }
    touched.push_back(piece.owner);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (auto id : touched) describe_part(mesh, parts.at(id), describe);
  std::sort(parts.parts.begin(), parts.parts.end(),
            [](const PartInstance& a, const PartInstance& b) { return a.id < b.id; });
  return created;
}

}  // namespace forge
