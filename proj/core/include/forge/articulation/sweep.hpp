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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "forge/articulation/joint.hpp"
#include "forge/mesh/bvh.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

struct SweepParams {
  double angular_step_degrees = 1.0;
  /// Linear step as a fraction of the child descriptor box's largest extent.
  double linear_step_fraction = 0.01;
  int ramp_window = 3;
  double threshold_factor = 2.0;
  std::int64_t absolute_floor = 5;
  double safe_fraction = 0.8;
  /// Collision band; when zero, `epsilon_fraction` of the object diagonal.
  double collision_epsilon = 0.0;
  double epsilon_fraction = 0.005;
  std::size_t samples_per_part = 2048;
  /// Fraction of the detachment-collision interval kept for prismatic joints.
  double retention = 0.9;
  /// Prismatic sweep length as a multiple of the child box's largest extent.
  double max_travel_factor = 3.0;
  double max_angle_degrees = 360.0;
  /// Collision bounds this close to rest count as the rest end.
  double rest_snap_degrees = 2.0;
  /// Same for translation, as a fraction of the largest box extent.
  double rest_snap_fraction = 0.02;

  void validate() const;
  double epsilon_for(const TriMesh& mesh) const;
};

/// Other-part geometry against which a moving point set is tested.
class CollisionScene {
 public:
  /// `moving` lists the parts that move together; every other part is an
  /// obstacle.
  CollisionScene(const TriMesh& mesh, const PartSet& parts, std::span<const std::int32_t> moving,
                 double epsilon);

  /// Moving sample points (after `pose`) within epsilon of, or inside, an
  /// obstacle. Inside tests use ray parity and only apply to closed parts.
  std::int64_t count(const RigidTransform& pose) const;
  std::int64_t count_points(std::span<const Vec3> points, const RigidTransform& pose) const;

  const std::vector<Vec3>& moving_points() const { return points_; }
  double epsilon() const { return epsilon_; }

 private:
  bool inside_closed(const Vec3& p) const;

  TriangleBvh obstacles_;
  std::vector<char> closed_;  // indexed by tag (part position in the set)
  Aabb closed_bounds_;
  std::vector<Vec3> points_;
  double epsilon_;
};

std::int64_t count_collision_points(const TriMesh& mesh, const PartSet& parts, std::int32_t moving,
                                    const RigidTransform& pose, const SweepParams& params);

/// Index where the strictly increasing run ending at the first qualifying
/// step starts: the first k whose previous `window` steps all increased and
/// whose count exceeds max(factor * counts[0], counts[0] + floor).
/// counts[0] is the rest pose.
std::optional<std::size_t> detect_ramp(std::span<const std::int64_t> counts, int window,
                                       double factor, std::int64_t floor);

/// First index k >= 1 such that counts[k .. k + window) are all zero.
std::optional<std::size_t> first_sustained_zero(std::span<const std::int64_t> counts, int window);

enum class RangeStatus { kOk, kContinuous, kDegenerateRange, kNoDetachment };

std::string_view to_string(RangeStatus status);

struct RangeResult {
  RangeStatus status = RangeStatus::kOk;
  /// In radians or meters along the joint axis; unset for continuous.
  std::optional<JointLimits> limits;
  /// Raw collision bounds before trimming or retention.
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool lower_is_rest = false;
  bool upper_is_rest = false;
  double step = 0.0;
  std::int64_t rest_count = 0;
  std::vector<std::int64_t> positive_counts;
  std::vector<std::int64_t> negative_counts;
};

/// Rotation sweep about `axis` through `origin` in both directions.
/// Continuous when neither direction finds a bound; DegenerateRange when
/// both bounds snap to rest.
RangeResult estimate_range_revolute(const TriMesh& mesh, const PartSet& parts, std::int32_t child,
                                    const Vec3& origin, const Vec3& axis, const SweepParams& params,
                                    std::span<const std::int32_t> moving = {});

/// Translation sweep: detachment outward (away from the parent), first
/// collision inward, scaled by `params.retention`. Lower limit clamped to
/// zero for non-recessing parts. DegenerateRange with [0, 0] when nothing
/// touches the part at rest.
RangeResult estimate_range_prismatic(const TriMesh& mesh, const PartSet& parts, std::int32_t child,
                                     std::int32_t parent, const Vec3& axis, bool non_recessing,
                                     const SweepParams& params,
                                     std::span<const std::int32_t> moving = {});

RigidTransform rotation_pose(const Vec3& origin, const Vec3& axis, double radians);
RigidTransform translation_pose(const Vec3& axis, double distance);

}  // namespace forge
