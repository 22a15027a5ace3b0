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

#include "forge/articulation/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "forge/error.hpp"
#include "forge/mesh/parallel.hpp"

namespace forge {

void SweepParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be positive");
  };
  positive(angular_step_degrees, "angular_step_degrees");
  positive(linear_step_fraction, "linear_step_fraction");
  positive(threshold_factor, "threshold_factor");
  positive(epsilon_fraction, "epsilon_fraction");
  positive(retention, "retention");
  positive(max_travel_factor, "max_travel_factor");
  positive(max_angle_degrees, "max_angle_degrees");
  if (rest_snap_degrees < 0.0 || rest_snap_fraction < 0.0) throw Error(ErrorCode::kInvalidArgument, "rest snap must be >= 0");
  if (ramp_window < 1) throw Error(ErrorCode::kInvalidArgument, "ramp_window must be >= 1");
  if (absolute_floor < 1) throw Error(ErrorCode::kInvalidArgument, "absolute_floor must be >= 1");
  if (samples_per_part == 0) throw Error(ErrorCode::kInvalidArgument, "samples_per_part must be positive");
  if (!(safe_fraction > 0.0 && safe_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "safe_fraction must be in (0, 1]");
  }
  if (collision_epsilon < 0.0) throw Error(ErrorCode::kInvalidArgument, "collision_epsilon must be >= 0");
}

double SweepParams::epsilon_for(const TriMesh& mesh) const {
  return collision_epsilon > 0.0 ? collision_epsilon : epsilon_fraction * mesh.bounds().diagonal();
}

namespace {
// Irrational-ish direction so parity rays rarely graze edges of axis-aligned
// geometry.
const Vec3 kParityDirection = Vec3(0.5773502691896258, 0.6180339887498949, 0.5345224838248488).normalized();
}  // namespace

CollisionScene::CollisionScene(const TriMesh& mesh, const PartSet& parts,
                               std::span<const std::int32_t> moving, double epsilon)
    : closed_(parts.size(), 0), epsilon_(epsilon) {
  FaceSet faces;
  std::vector<std::int32_t> tags;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& part = parts.parts[i];
    const bool is_moving = std::find(moving.begin(), moving.end(), part.id) != moving.end();
    if (is_moving) {
      points_.insert(points_.end(), part.samples.points.begin(), part.samples.points.end());
      continue;
    }
    faces.insert(faces.end(), part.faces.begin(), part.faces.end());
    tags.insert(tags.end(), part.faces.size(), static_cast<std::int32_t>(i));
    if (!part.faces.empty() && is_closed(mesh, part.faces)) {
      closed_[i] = 1;
      closed_bounds_.expand(mesh.bounds(part.faces));
    }
  }
  obstacles_ = TriangleBvh(mesh, faces, tags);
}

bool CollisionScene::inside_closed(const Vec3& p) const {
  if (closed_bounds_.empty() || closed_bounds_.squared_distance(p) > 0.0) return false;
  std::vector<int> parity(closed_.size(), 0);
  for (const auto& hit : obstacles_.ray_hits(p, kParityDirection)) {
    if (closed_[static_cast<std::size_t>(hit.tag)]) parity[static_cast<std::size_t>(hit.tag)] ^= 1;
  }
  return std::any_of(parity.begin(), parity.end(), [](int v) { return v != 0; });
}

std::int64_t CollisionScene::count_points(std::span<const Vec3> points, const RigidTransform& pose) const {
  if (obstacles_.empty()) return 0;
  std::int64_t n = 0;
  for (const Vec3& p : points) {
    const Vec3 q = pose * p;
    if (obstacles_.within(q, epsilon_) || inside_closed(q)) ++n;
  }
  return n;
}

std::int64_t CollisionScene::count(const RigidTransform& pose) const { return count_points(points_, pose); }

std::int64_t count_collision_points(const TriMesh& mesh, const PartSet& parts, std::int32_t moving,
                                    const RigidTransform& pose, const SweepParams& params) {
  const std::int32_t ids[] = {moving};
  const CollisionScene scene(mesh, parts, ids, params.epsilon_for(mesh));
  return scene.count(pose);
}

std::optional<std::size_t> detect_ramp(std::span<const std::int64_t> counts, int window, double factor,
                                       std::int64_t floor) {
  if (counts.empty()) return std::nullopt;
  const auto w = static_cast<std::size_t>(window);
  const double c0 = static_cast<double>(counts[0]);
  const double threshold = std::max(factor * c0, c0 + static_cast<double>(floor));
  for (std::size_t k = w; k < counts.size(); ++k) {
    if (static_cast<double>(counts[k]) <= threshold) continue;
    bool rising = true;
    for (std::size_t j = 0; j < w && rising; ++j) rising = counts[k - j] > counts[k - j - 1];
    if (!rising) continue;
    std::size_t start = k;
    while (start > 0 && counts[start - 1] < counts[start]) --start;
    return start;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_sustained_zero(std::span<const std::int64_t> counts, int window) {
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t k = 1; k + w <= counts.size(); ++k) {
    bool zero = true;
    for (std::size_t j = 0; j < w && zero; ++j) zero = counts[k + j] == 0;
    if (zero) return k;
  }
  return std::nullopt;
}

std::string_view to_string(RangeStatus status) {
  switch (status) {
    case RangeStatus::kOk: return "ok";
    case RangeStatus::kContinuous: return "continuous";
    case RangeStatus::kDegenerateRange: return "degenerate_range";
    case RangeStatus::kNoDetachment: return "no_detachment";
  }
  return "?";
}

RigidTransform rotation_pose(const Vec3& origin, const Vec3& axis, double radians) {
  RigidTransform t = RigidTransform::Identity();
  t.translate(origin);
  t.rotate(Eigen::AngleAxisd(radians, axis.normalized()));
  t.translate(-origin);
  return t;
}

RigidTransform translation_pose(const Vec3& axis, double distance) {
  RigidTransform t = RigidTransform::Identity();
  t.translate(distance * axis.normalized());
  return t;
}

namespace {

/// Evaluates counts for steps 1..n in parallel chunks until `done` holds for
/// the prefix collected so far. counts[0] is the rest count.
std::vector<std::int64_t> sweep(const CollisionScene& scene, std::int64_t rest, std::size_t n,
                                const std::function<RigidTransform(std::size_t)>& pose_at,
                                const std::function<bool(std::span<const std::int64_t>)>& done) {
  std::vector<std::int64_t> counts = {rest};
  const std::size_t chunk = std::max<std::size_t>(8, 2 * std::thread::hardware_concurrency());
  for (std::size_t first = 1; first <= n; first += chunk) {
    const std::size_t last = std::min(n, first + chunk - 1);
    counts.resize(last + 1);
    parallel_for(first, last + 1, [&](std::size_t k) { counts[k] = scene.count(pose_at(k)); });
    if (done(counts)) break;
  }
  return counts;
}

std::vector<std::int32_t> moving_group(std::int32_t child, std::span<const std::int32_t> moving) {
  if (moving.empty()) return {child};
  return {moving.begin(), moving.end()};
}

}  // namespace

RangeResult estimate_range_revolute(const TriMesh& mesh, const PartSet& parts, std::int32_t child,
                                    const Vec3& origin, const Vec3& axis, const SweepParams& params,
                                    std::span<const std::int32_t> moving) {
  params.validate();
  parts.at(child);
  const auto group = moving_group(child, moving);
  const CollisionScene scene(mesh, parts, group, params.epsilon_for(mesh));
  const double step = params.angular_step_degrees * std::numbers::pi / 180.0;
  const auto n = static_cast<std::size_t>(std::ceil(params.max_angle_degrees / params.angular_step_degrees - 1e-9));
  const Vec3 dir = axis.normalized();

  RangeResult out;
  out.step = step;
  out.rest_count = scene.count(RigidTransform::Identity());
  auto ramp = [&](std::span<const std::int64_t> c) {
    return detect_ramp(c, params.ramp_window, params.threshold_factor, params.absolute_floor);
  };
  std::optional<std::size_t> bound[2];
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    auto counts = sweep(
        scene, out.rest_count, n, [&](std::size_t k) { return rotation_pose(origin, dir, sign * step * k); },
        [&](std::span<const std::int64_t> c) { return ramp(c).has_value(); });
    bound[side] = ramp(counts);
    (side == 0 ? out.positive_counts : out.negative_counts) = std::move(counts);
  }
  if (!bound[0] && !bound[1]) {
    out.status = RangeStatus::kContinuous;
    return out;
  }
  const double full = params.max_angle_degrees * std::numbers::pi / 180.0;
  const double snap = params.rest_snap_degrees * std::numbers::pi / 180.0 + 1e-12;
  out.upper_is_rest = bound[0] && step * static_cast<double>(*bound[0]) <= snap;
  out.lower_is_rest = bound[1] && step * static_cast<double>(*bound[1]) <= snap;
  out.upper_bound = !bound[0] ? full : out.upper_is_rest ? 0.0 : step * static_cast<double>(*bound[0]);
  out.lower_bound = !bound[1] ? -full : out.lower_is_rest ? 0.0 : -step * static_cast<double>(*bound[1]);
  if (out.upper_is_rest && out.lower_is_rest) {
    out.status = RangeStatus::kDegenerateRange;
    out.limits = JointLimits{0.0, 0.0};
    return out;
  }
  const double trim = (1.0 - params.safe_fraction) * (out.upper_bound - out.lower_bound);
  JointLimits limits{out.lower_bound, out.upper_bound};
  if (out.lower_is_rest) {
    limits.upper -= trim;
  } else if (out.upper_is_rest) {
    limits.lower += trim;
  } else {
    limits.lower += 0.5 * trim;
    limits.upper -= 0.5 * trim;
  }
  out.limits = limits;
  return out;
}

RangeResult estimate_range_prismatic(const TriMesh& mesh, const PartSet& parts, std::int32_t child,
                                     std::int32_t parent, const Vec3& axis, bool non_recessing,
                                     const SweepParams& params, std::span<const std::int32_t> moving) {
  params.validate();
  const PartInstance& part = parts.at(child);
  const Vec3 dir = axis.normalized();
  double sigma = 1.0;
  if (const PartInstance* p = parts.find(parent)) {
    if ((part.samples.centroid() - p->samples.centroid()).dot(dir) < 0.0) sigma = -1.0;
  }
  const auto group = moving_group(child, moving);
  const double epsilon = params.epsilon_for(mesh);
  const CollisionScene scene(mesh, parts, group, epsilon);
  const double extent = part.box.extents.maxCoeff();
  if (!(extent > 0.0)) throw Error(ErrorCode::kDegeneratePart, "part has zero extent");
  const double step = params.linear_step_fraction * extent;
  const auto n = static_cast<std::size_t>(std::ceil(params.max_travel_factor / params.linear_step_fraction - 1e-9));

  RangeResult out;
  out.step = step;
  out.rest_count = scene.count(RigidTransform::Identity());

  if (out.rest_count == 0) {
    // Nothing holds the part at rest, so no travel can be inferred.
    out.status = RangeStatus::kDegenerateRange;
    out.upper_is_rest = out.lower_is_rest = true;
    out.limits = JointLimits{0.0, 0.0};
    return out;
  }
  double outward = 0.0;
  {
    auto counts = sweep(
        scene, out.rest_count, n, [&](std::size_t k) { return translation_pose(dir, sigma * step * k); },
        [&](std::span<const std::int64_t> c) { return first_sustained_zero(c, params.ramp_window).has_value(); });
    const auto free = first_sustained_zero(counts, params.ramp_window);
    out.positive_counts = std::move(counts);
    if (!free) {
      out.status = RangeStatus::kNoDetachment;
      out.upper_is_rest = true;
    } else {
      // Points register within epsilon of an obstacle, so the last contact
      // sits one band before the crossing, taken mid-step.
      const double first_free = step * static_cast<double>(*free);
      outward = std::max(0.0, first_free - 0.5 * step - epsilon);
    }
  }
  out.upper_bound = outward;

  auto inward_counts = sweep(
      scene, out.rest_count, n, [&](std::size_t k) { return translation_pose(dir, -sigma * step * k); },
      [&](std::span<const std::int64_t> c) {
        return detect_ramp(c, params.ramp_window, params.threshold_factor, params.absolute_floor).has_value();
      });
  const auto inward = detect_ramp(inward_counts, params.ramp_window, params.threshold_factor, params.absolute_floor);
  out.negative_counts = std::move(inward_counts);
  double inward_travel = 0.0;
  if (!inward) {
    inward_travel = step * static_cast<double>(n);
  } else if (step * static_cast<double>(*inward) <= params.rest_snap_fraction * extent * (1.0 + 1e-12)) {
    out.lower_is_rest = true;
  } else {
    const double start = step * static_cast<double>(*inward);
    // The first rising step sees the band, not the surface.
    inward_travel = start + 0.5 * step + epsilon;
  }
  out.lower_bound = -inward_travel;

  JointLimits limits{params.retention * out.lower_bound, params.retention * out.upper_bound};
  if (non_recessing) limits.lower = std::max(limits.lower, 0.0);
  if (sigma < 0.0) limits = JointLimits{-limits.upper, -limits.lower};
  out.limits = limits;
  return out;
}

}  // namespace forge
