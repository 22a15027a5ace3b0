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

#include "forge/mesh/bounding_box.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(BoxKind kind) {
  switch (kind) {
    case BoxKind::kAabb: return "AABB";
    case BoxKind::kPobb: return "POBB";
    case BoxKind::kGobb: return "GOBB";
  }
  return "?";
}

bool OrientedBox::contains(const Vec3& p, double tolerance) const {
  const Vec3 local = axes.transpose() * (p - center);
  return ((local.cwiseAbs() - 0.5 * extents).array() <= tolerance).all();
}

std::array<Vec3, 8> OrientedBox::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    const Vec3 s((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5);
    out[static_cast<std::size_t>(i)] = center + axes * s.cwiseProduct(extents);
  }
  return out;
}

SurfaceMoments surface_moments(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  SurfaceMoments m;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  for (auto f : faces) {
    const auto t = mesh.triangle(f);
    const double a = triangle_area(t[0], t[1], t[2]);
    if (a <= 0.0) continue;
    const Vec3 s = t[0] + t[1] + t[2];
    m.area += a;
    first += a * s / 3.0;
    // Integral of x x^T over a triangle: A/12 (sum v v^T + s s^T).
    second += (a / 12.0) * (t[0] * t[0].transpose() + t[1] * t[1].transpose() +
                            t[2] * t[2].transpose() + s * s.transpose());
  }
  if (m.area > 0.0) {
    m.mean = first / m.area;
    m.covariance = second / m.area - m.mean * m.mean.transpose();
    m.covariance = 0.5 * (m.covariance + m.covariance.transpose());
  }
  return m;
}

namespace {

Vec3 canonical_sign(const Vec3& v) {
  constexpr double kEps = 1e-12;
  for (int i : {1, 0, 2}) {
    if (v[i] > kEps) return v;
    if (v[i] < -kEps) return -v;
  }
  return v;
}

OrientedBox fit(const TriMesh& mesh, std::span<const std::int32_t> faces, Mat3 axes,
                BoxKind kind) {
  if (axes.determinant() < 0.0) axes.col(2) = -axes.col(2);
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (auto f : faces) {
    for (auto v : mesh.faces[static_cast<std::size_t>(f)]) {
      const Vec3 local = axes.transpose() * mesh.vertices[v];
      lo = lo.cwiseMin(local);
      hi = hi.cwiseMax(local);
    }
  }
  OrientedBox box;
  box.kind = kind;
  box.axes = axes;
  box.extents = hi - lo;
  box.center = axes * (0.5 * (lo + hi));
  return box;
}

/// Area-dominant face normal directions (sign-canonical), largest first.
std::vector<Vec3> dominant_normals(const TriMesh& mesh, std::span<const std::int32_t> faces,
                                   std::size_t limit) {
  std::map<std::array<std::int64_t, 3>, std::pair<double, Vec3>> bins;
  for (auto f : faces) {
    const double a = mesh.face_area(f);
    if (a <= 0.0) continue;
    const Vec3 n = canonical_sign(mesh.face_normal(f));
    const std::array<std::int64_t, 3> key{std::llround(n.x() * 1e6), std::llround(n.y() * 1e6),
                                          std::llround(n.z() * 1e6)};
    auto& bin = bins[key];
    if (bin.first == 0.0) bin.second = n;
    bin.first += a;
  }
  std::vector<std::pair<double, Vec3>> sorted;
  for (const auto& [key, value] : bins) sorted.push_back(value);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < sorted.size() && i < limit; ++i) out.push_back(sorted[i].second);
  return out;
}

std::vector<Vec3> candidate_directions(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  std::vector<Vec3> out = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const Vec3& n : dominant_normals(mesh, faces, 6)) out.push_back(n);
  return out;
}

/// Unit component of `v` orthogonal to `n`, or nullopt if nearly parallel.
std::optional<Vec3> orthogonalize(const Vec3& v, const Vec3& n) {
  Vec3 d = v - v.dot(n) * n;
  const double len = d.norm();
  if (len < 1e-6) return std::nullopt;
  return Vec3(d / len);
}

OrientedBox pca_box(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  const SurfaceMoments m = surface_moments(mesh, faces);
  Eigen::SelfAdjointEigenSolver<Mat3> solver(m.covariance);
  // Eigen returns ascending eigenvalues; order principal axes descending.
  Vec3 values = solver.eigenvalues().reverse();
  Mat3 vectors = solver.eigenvectors().rowwise().reverse();
  const double scale = std::max(std::abs(values[0]), std::numeric_limits<double>::min());
  const bool gap01 = values[0] - values[1] < kEigenGapTolerance * scale;
  const bool gap12 = values[1] - values[2] < kEigenGapTolerance * scale;

  if (!gap01 && !gap12) {
    Mat3 axes;
    for (int i = 0; i < 3; ++i) axes.col(i) = canonical_sign(vectors.col(i));
    return fit(mesh, faces, axes, BoxKind::kPobb);
  }

  const auto candidates = candidate_directions(mesh, faces);
  OrientedBox best;
  double best_volume = std::numeric_limits<double>::infinity();
  auto consider = [&](const Mat3& axes) {
    OrientedBox box = fit(mesh, faces, axes, BoxKind::kPobb);
    if (box.volume() < best_volume * (1.0 - 1e-12)) {
      best_volume = box.volume();
      best = box;
    }
  };
  if (gap01 && gap12) {
    // Isotropic spread: any frame is principal.
    for (const Vec3& u : candidates) {
      for (const Vec3& v : candidates) {
        auto w = orthogonalize(v, u);
        if (!w) continue;
        Mat3 axes;
        axes << u, *w, u.cross(*w);
        consider(axes);
      }
    }
  } else {
    // One unique direction; the other two span an ambiguous plane.
    const int unique = gap01 ? 2 : 0;
    const Vec3 e = canonical_sign(vectors.col(unique));
    for (const Vec3& v : candidates) {
      auto d = orthogonalize(v, e);
      if (!d) continue;
      Mat3 axes;
      if (unique == 0) {
        axes << e, canonical_sign(*d), e.cross(canonical_sign(*d));
      } else {
        axes << canonical_sign(*d), e.cross(canonical_sign(*d)), e;
      }
      consider(axes);
    }
  }
  best.degenerate = true;
  return best;
}

OrientedBox gravity_box(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  const SurfaceMoments m = surface_moments(mesh, faces);
  Eigen::Matrix2d planar;
  planar << m.covariance(0, 0), m.covariance(0, 2), m.covariance(2, 0), m.covariance(2, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(planar);
  const Eigen::Vector2d values = solver.eigenvalues();
  const double scale = std::max(std::abs(values[1]), std::numeric_limits<double>::min());
  auto frame_from = [](const Vec3& h) {
    Mat3 axes;
    axes << h, Vec3::UnitY(), h.cross(Vec3::UnitY());
    return axes;
  };
  if (values[1] - values[0] >= kEigenGapTolerance * scale) {
    const Eigen::Vector2d major = solver.eigenvectors().col(1);
    const Vec3 h = canonical_sign(Vec3(major.x(), 0.0, major.y()).normalized());
    return fit(mesh, faces, frame_from(h), BoxKind::kGobb);
  }
  OrientedBox best;
  double best_volume = std::numeric_limits<double>::infinity();
  for (const Vec3& c : candidate_directions(mesh, faces)) {
    auto h = orthogonalize(c, Vec3::UnitY());
    if (!h) continue;
    OrientedBox box = fit(mesh, faces, frame_from(canonical_sign(*h)), BoxKind::kGobb);
    if (box.volume() < best_volume * (1.0 - 1e-12)) {
      best_volume = box.volume();
      best = box;
    }
  }
  best.degenerate = true;
  return best;
}

}  // namespace

OrientedBox bounding_box(const TriMesh& mesh, std::span<const std::int32_t> faces,
                         BoxKind kind) {
  if (faces.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bounding box of an empty selection");
  }
  switch (kind) {
    case BoxKind::kAabb: return fit(mesh, faces, Mat3::Identity(), BoxKind::kAabb);
    case BoxKind::kPobb: return pca_box(mesh, faces);
    case BoxKind::kGobb: return gravity_box(mesh, faces);
  }
  return {};
}

const OrientedBox& choose_descriptor(const OrientedBox& aabb, const OrientedBox& pobb,
                                     const OrientedBox& gobb, double gobb_tolerance) {
  const double min_volume = std::min({aabb.volume(), pobb.volume(), gobb.volume()});
  if (gobb.volume() <= (1.0 + gobb_tolerance) * min_volume) return gobb;
  return aabb.volume() <= pobb.volume() ? aabb : pobb;
}

OrientedBox select_descriptor_box(const TriMesh& mesh, std::span<const std::int32_t> faces,
                                  double gobb_tolerance) {
  const OrientedBox aabb = bounding_box(mesh, faces, BoxKind::kAabb);
  const OrientedBox pobb = bounding_box(mesh, faces, BoxKind::kPobb);
  const OrientedBox gobb = bounding_box(mesh, faces, BoxKind::kGobb);
  return choose_descriptor(aabb, pobb, gobb, gobb_tolerance);
}

}  // namespace forge
