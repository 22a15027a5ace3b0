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

#include "forge/mesh/oversegment.hpp"

#include <algorithm>
#include <map>

#include "forge/mesh/union_find.hpp"

namespace forge {

OverSegmentation oversegment(const TriMesh& mesh, double weld_tolerance) {
  OverSegmentation out;
  const std::size_t nf = mesh.faces.size();
  out.segment_of_face.assign(nf, -1);
  if (nf == 0) return out;

  const auto rep = weld_vertices(mesh, weld_tolerance);
  UnionFind uf(nf);
  std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> first_face_of_edge;
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      std::int32_t a = rep[t[k]];
      std::int32_t b = rep[t[(k + 1) % 3]];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      auto [it, inserted] =
          first_face_of_edge.emplace(std::pair{a, b}, static_cast<std::int32_t>(f));
      if (!inserted) uf.unite(f, static_cast<std::size_t>(it->second));
    }
  }
  // Scanning faces in order numbers segments by their smallest face.
  std::vector<std::int32_t> segment_of_root(nf, -1);
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t root = uf.find(f);
    if (segment_of_root[root] < 0) {
      segment_of_root[root] = static_cast<std::int32_t>(out.segments.size());
      out.segments.emplace_back();
    }
    const std::int32_t s = segment_of_root[root];
    out.segment_of_face[f] = s;
    out.segments[static_cast<std::size_t>(s)].push_back(static_cast<std::int32_t>(f));
  }
  return out;
}

}  // namespace forge
