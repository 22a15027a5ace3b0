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

#include "forge/mesh/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "forge/error.hpp"
#include "forge/mesh/union_find.hpp"

namespace forge {

double TriMesh::face_area(std::int32_t f) const {
  const auto t = triangle(f);
  return triangle_area(t[0], t[1], t[2]);
}

Vec3 TriMesh::face_normal(std::int32_t f) const {
  const auto t = triangle(f);
  Vec3 n = (t[1] - t[0]).cross(t[2] - t[0]);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

Vec3 TriMesh::face_centroid(std::int32_t f) const {
  const auto t = triangle(f);
  return (t[0] + t[1] + t[2]) / 3.0;
}

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const Face& f : faces) {
    for (auto v : f) box.expand(vertices[v]);
  }
  return box;
}

Aabb TriMesh::bounds(std::span<const std::int32_t> selection) const {
  Aabb box;
  for (auto f : selection) {
    for (auto v : faces[static_cast<std::size_t>(f)]) box.expand(vertices[v]);
  }
  return box;
}

void TriMesh::validate() const {
  const auto n = static_cast<std::int64_t>(vertices.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Face& f = faces[i];
    for (auto v : f) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::kMalformedFile,
                    "face " + std::to_string(i) + " references vertex " +
                        std::to_string(v) + " of " + std::to_string(n));
      }
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw Error(ErrorCode::kMalformedFile,
                  "face " + std::to_string(i) + " is degenerate");
    }
  }
  if (!face_material.empty() && face_material.size() != faces.size()) {
    throw Error(ErrorCode::kMalformedFile, "face material count mismatch");
  }
}

FaceSet all_faces(const TriMesh& mesh) {
  FaceSet out(mesh.faces.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

double total_area(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  double sum = 0.0;
  for (auto f : faces) sum += mesh.face_area(f);
  return sum;
}

Vec3 recenter(TriMesh& mesh) {
  const Aabb box = mesh.bounds();
  if (box.empty()) return Vec3::Zero();
  const Vec3 shift = -box.center();
  for (Vec3& v : mesh.vertices) v += shift;
  return shift;
}

void transform_in_place(TriMesh& mesh, const RigidTransform& pose) {
  for (Vec3& v : mesh.vertices) v = pose * v;
}

TriMesh submesh(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  TriMesh out;
  out.unit_scale = mesh.unit_scale;
  std::unordered_map<std::int32_t, std::int32_t> remap;
  out.faces.reserve(faces.size());
  for (auto f : faces) {
    Face nf{};
    for (int k = 0; k < 3; ++k) {
      const auto v = mesh.faces[static_cast<std::size_t>(f)][k];
      auto [it, inserted] =
          remap.emplace(v, static_cast<std::int32_t>(out.vertices.size()));
      if (inserted) out.vertices.push_back(mesh.vertices[v]);
      nf[k] = it->second;
    }
    out.faces.push_back(nf);
    if (!mesh.face_material.empty()) {
      out.face_material.push_back(
          mesh.face_material[static_cast<std::size_t>(f)]);
    }
  }
  return out;
}

std::int32_t append(TriMesh& dst, const TriMesh& src) {
  const auto first_face = static_cast<std::int32_t>(dst.faces.size());
  const auto offset = static_cast<std::int32_t>(dst.vertices.size());
  const bool had_material = !dst.face_material.empty();
  dst.vertices.insert(dst.vertices.end(), src.vertices.begin(),
                      src.vertices.end());
  for (const Face& f : src.faces) {
    dst.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
  }
  if (had_material || !src.face_material.empty()) {
    dst.face_material.resize(static_cast<std::size_t>(first_face), 0);
    if (src.face_material.empty()) {
      dst.face_material.resize(dst.faces.size(), 0);
    } else {
      dst.face_material.insert(dst.face_material.end(),
                               src.face_material.begin(),
                               src.face_material.end());
    }
  }
  return first_face;
}

std::vector<std::int32_t> weld_vertices(const TriMesh& mesh, double tolerance) {
  const std::size_t n = mesh.vertices.size();
  std::vector<std::int32_t> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  if (n == 0) return rep;

  UnionFind uf(n);
  if (tolerance <= 0.0) {
    // Exact coincidence only.
    std::map<std::array<double, 3>, std::int32_t> seen;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& v = mesh.vertices[i];
      auto [it, inserted] = seen.emplace(std::array<double, 3>{v.x(), v.y(), v.z()},
                                         static_cast<std::int32_t>(i));
      if (!inserted) uf.unite(i, static_cast<std::size_t>(it->second));
    }
  } else {
    struct CellHash {
      std::size_t operator()(const std::array<std::int64_t, 3>& c) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : c) {
          h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) +
               (h >> 2);
        }
        return h;
      }
    };
    std::unordered_map<std::array<std::int64_t, 3>, std::vector<std::int32_t>,
                       CellHash>
        grid;
    auto cell_of = [&](const Vec3& v) {
      return std::array<std::int64_t, 3>{
          static_cast<std::int64_t>(std::floor(v.x() / tolerance)),
          static_cast<std::int64_t>(std::floor(v.y() / tolerance)),
          static_cast<std::int64_t>(std::floor(v.z() / tolerance))};
    };
    const double tol2 = tolerance * tolerance;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& v = mesh.vertices[i];
      const auto c = cell_of(v);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
            if (it == grid.end()) continue;
            for (auto j : it->second) {
              if ((mesh.vertices[static_cast<std::size_t>(j)] - v)
                      .squaredNorm() <= tol2) {
                uf.unite(i, static_cast<std::size_t>(j));
              }
            }
          }
        }
      }
      grid[c].push_back(static_cast<std::int32_t>(i));
    }
  }
  // Representative = smallest index in each group.
  std::vector<std::int32_t> smallest(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = uf.find(i);
    if (smallest[root] < 0) smallest[root] = static_cast<std::int32_t>(i);
    rep[i] = smallest[root];
  }
  return rep;
}

bool is_closed(const TriMesh& mesh, std::span<const std::int32_t> faces,
               double weld_tolerance) {
  if (faces.empty()) return false;
  const auto rep = weld_vertices(mesh, weld_tolerance);
  std::map<std::pair<std::int32_t, std::int32_t>, int> edge_count;
  for (auto f : faces) {
    const Face& t = mesh.faces[static_cast<std::size_t>(f)];
    for (int k = 0; k < 3; ++k) {
      std::int32_t a = rep[t[k]];
      std::int32_t b = rep[t[(k + 1) % 3]];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  }
  return std::all_of(edge_count.begin(), edge_count.end(),
                     [](const auto& kv) { return kv.second % 2 == 0; });
}

TriMesh make_box(const Vec3& min, const Vec3& max) {
  const Vec3 center = 0.5 * (min + max);
  return make_oriented_box(center, Mat3::Identity(), max - min);
}

TriMesh make_oriented_box(const Vec3& center, const Mat3& axes,
                          const Vec3& extents) {
  TriMesh box;
  box.vertices.reserve(8);
  for (int i = 0; i < 8; ++i) {
    const Vec3 s((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5,
                 (i & 4) ? 0.5 : -0.5);
    box.vertices.push_back(center + axes * s.cwiseProduct(extents));
  }
  // Outward-facing winding for a right-handed frame.
  box.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6},
               {0, 1, 4}, {1, 5, 4}, {2, 6, 3}, {3, 6, 7},
               {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return box;
}

TriMesh make_cylinder(const Vec3& base_center, const Vec3& axis, double radius,
                      double length, int segments) {
  if (segments < 3 || radius <= 0.0 || length <= 0.0 || axis.norm() == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "bad cylinder parameters");
  }
  const Vec3 w = axis.normalized();
  const Vec3 helper =
      std::abs(w.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 u = w.cross(helper).normalized();
  const Vec3 v = w.cross(u);
  TriMesh cyl;
  const auto n = static_cast<std::int32_t>(segments);
  for (std::int32_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    const Vec3 rim = radius * (std::cos(a) * u + std::sin(a) * v);
    cyl.vertices.push_back(base_center + rim);
    cyl.vertices.push_back(base_center + length * w + rim);
  }
  const std::int32_t bottom = 2 * n;
  const std::int32_t top = 2 * n + 1;
  cyl.vertices.push_back(base_center);
  cyl.vertices.push_back(base_center + length * w);
  for (std::int32_t i = 0; i < n; ++i) {
    const std::int32_t j = (i + 1) % n;
    const std::int32_t b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    cyl.faces.push_back({b0, b1, t1});
    cyl.faces.push_back({b0, t1, t0});
    cyl.faces.push_back({bottom, b1, b0});
    cyl.faces.push_back({top, t0, t1});
  }
  return cyl;
}

}  // namespace forge
