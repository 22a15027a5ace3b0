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
#include <string>
#include <vector>

#include "forge/articulation/template.hpp"
#include "forge/mesh/geometry.hpp"

namespace forge {

struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const JointLimits&) const = default;
};

struct JointProposal {
  std::int32_t child = -1;
  std::int32_t parent = -1;
  MotionType motion = MotionType::kFixed;
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  /// Second hinge direction, universal joints only.
  std::optional<Vec3> axis2;
  /// One entry per degree of freedom: rotation first, then translation for
  /// cylindrical joints. Empty for fixed and continuous joints.
  std::vector<JointLimits> limits;
  /// Which rule produced the axis and range.
  std::string provenance;
  /// Verification flags (ambiguous axis, degenerate range, ...).
  std::vector<std::string> flags;
};

/// Sign-canonical direction: nonnegative y, then x, then z decide the sign
/// when earlier components vanish.
Vec3 canonical_direction(const Vec3& v, double eps = 1e-9);

/// True when `v` was flipped by canonical_direction.
bool canonical_flips(const Vec3& v, double eps = 1e-9);

void add_flag(JointProposal& joint, const std::string& flag);

}  // namespace forge
