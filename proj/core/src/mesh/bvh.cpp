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

#include "forge/mesh/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace forge {

namespace {
constexpr std::int32_t kLeafSize = 4;
}

TriangleBvh::TriangleBvh(const TriMesh& mesh, std::span<const std::int32_t> faces,
                         std::span<const std::int32_t> tags) {
  tris_.reserve(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    tris_.push_back({mesh.triangle(faces[i]), faces[i],
                     tags.empty() ? -1 : tags[i]});
  }
  if (!tris_.empty()) {
    nodes_.reserve(2 * tris_.size() / kLeafSize + 2);
    build(0, static_cast<std::int32_t>(tris_.size()));
  }
}

std::int32_t TriangleBvh::build(std::int32_t start, std::int32_t count) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  Aabb centroids;
  for (std::int32_t i = start; i < start + count; ++i) {
    const Tri& t = tris_[static_cast<std::size_t>(i)];
    for (const Vec3& v : t.v) box.expand(v);
    centroids.expand((t.v[0] + t.v[1] + t.v[2]) / 3.0);
  }
  nodes_[static_cast<std::size_t>(index)].box = box;
  if (count <= kLeafSize) {
    nodes_[static_cast<std::size_t>(index)].start = start;
    nodes_[static_cast<std::size_t>(index)].count = count;
    return index;
  }
  int axis = 0;
  const Vec3 ext = centroids.extent();
  if (ext.y() > ext[axis]) axis = 1;
  if (ext.z() > ext[axis]) axis = 2;
  const std::int32_t mid = start + count / 2;
  auto key = [axis](const Tri& t) { return t.v[0][axis] + t.v[1][axis] + t.v[2][axis]; };
  std::nth_element(tris_.begin() + start, tris_.begin() + mid, tris_.begin() + start + count,
                   [&](const Tri& a, const Tri& b) {
                     const double ka = key(a);
                     const double kb = key(b);
                     return ka < kb || (ka == kb && a.face < b.face);
                   });
  const std::int32_t left = build(start, mid - start);
  const std::int32_t right = build(mid, start + count - mid);
  nodes_[static_cast<std::size_t>(index)].left = left;
  nodes_[static_cast<std::size_t>(index)].right = right;
  return index;
}

double TriangleBvh::tri_distance_sq(const Tri& t, const Vec3& p) {
  return point_triangle_squared_distance(p, t.v[0], t.v[1], t.v[2]);
}

double TriangleBvh::distance(const Vec3& p, double upper) const {
  if (tris_.empty()) return upper;
  double best = std::isinf(upper) ? upper : upper * upper;
  std::vector<std::int32_t> stack{0};
  stack.reserve(64);
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.box.squared_distance(p) >= best) continue;
    if (node.left < 0) {
      for (std::int32_t i = node.start; i < node.start + node.count; ++i) {
        best = std::min(best, tri_distance_sq(tris_[static_cast<std::size_t>(i)], p));
      }
      continue;
    }
    const double dl = nodes_[static_cast<std::size_t>(node.left)].box.squared_distance(p);
    const double dr = nodes_[static_cast<std::size_t>(node.right)].box.squared_distance(p);
    // Push the farther child first so the nearer one is explored first.
    if (dl < dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::isinf(best) ? best : std::sqrt(best);
}

bool TriangleBvh::within(const Vec3& p, double radius) const {
  if (tris_.empty()) return false;
  const double r2 = radius * radius;
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (node.box.squared_distance(p) > r2) continue;
    if (node.left < 0) {
      for (std::int32_t i = node.start; i < node.start + node.count; ++i) {
        if (tri_distance_sq(tris_[static_cast<std::size_t>(i)], p) <= r2) return true;
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  return false;
}

double TriangleBvh::distance(const TriangleBvh& other, double upper) const {
  if (tris_.empty() || other.tris_.empty()) return upper;
  double best = upper;
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& a = nodes_[static_cast<std::size_t>(ia)];
    const Node& b = other.nodes_[static_cast<std::size_t>(ib)];
    const double box_d = std::sqrt(a.box.squared_distance(b.box));
    if (box_d >= best) continue;
    const bool a_leaf = a.left < 0;
    const bool b_leaf = b.left < 0;
    if (a_leaf && b_leaf) {
      for (std::int32_t i = a.start; i < a.start + a.count; ++i) {
        for (std::int32_t j = b.start; j < b.start + b.count; ++j) {
          const double d = triangle_triangle_distance(
              tris_[static_cast<std::size_t>(i)].v, other.tris_[static_cast<std::size_t>(j)].v);
          if (d < best) best = d;
          if (best == 0.0) return 0.0;
        }
      }
      continue;
    }
    // Descend into the larger (or only internal) node.
    const bool split_a = !a_leaf && (b_leaf || a.box.diagonal() >= b.box.diagonal());
    if (split_a) {
      stack.emplace_back(a.right, ib);
      stack.emplace_back(a.left, ib);
    } else {
      stack.emplace_back(ia, b.right);
      stack.emplace_back(ia, b.left);
    }
  }
  return best;
}

bool TriangleBvh::closer_than(const TriangleBvh& other, double threshold) const {
  return distance(other, threshold) < threshold;
}

std::vector<TriangleBvh::RayHit> TriangleBvh::ray_hits(const Vec3& origin, const Vec3& dir,
                                                       double t_max) const {
  std::vector<RayHit> hits;
  if (tris_.empty()) return hits;
  const Vec3 inv(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (!node.box.ray_entry(origin, inv, t_max)) continue;
    if (node.left < 0) {
      for (std::int32_t i = node.start; i < node.start + node.count; ++i) {
        const Tri& t = tris_[static_cast<std::size_t>(i)];
        if (auto hit = ray_triangle(origin, dir, t.v[0], t.v[1], t.v[2]); hit && *hit <= t_max) {
          hits.push_back({*hit, t.face, t.tag});
        }
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    return a.t < b.t || (a.t == b.t && a.face < b.face);
  });
  return hits;
}

std::optional<TriangleBvh::RayHit> TriangleBvh::first_hit(const Vec3& origin, const Vec3& dir,
                                                          double t_max) const {
  std::optional<RayHit> best;
  if (tris_.empty()) return best;
  const Vec3 inv(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
  std::int32_t stack[128];
  int top = 0;
  stack[top++] = 0;
  double limit = t_max;
  while (top > 0) {
    const Node& node = nodes_[static_cast<std::size_t>(stack[--top])];
    if (!node.box.ray_entry(origin, inv, limit)) continue;
    if (node.left < 0) {
      for (std::int32_t i = node.start; i < node.start + node.count; ++i) {
        const Tri& t = tris_[static_cast<std::size_t>(i)];
        auto hit = ray_triangle(origin, dir, t.v[0], t.v[1], t.v[2]);
        if (!hit || *hit > limit) continue;
        if (!best || *hit < best->t || (*hit == best->t && t.face < best->face)) {
          best = RayHit{*hit, t.face, t.tag};
          limit = *hit;
        }
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  return best;
}

}  // namespace forge
