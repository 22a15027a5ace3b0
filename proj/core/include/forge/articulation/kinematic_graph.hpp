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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/articulation/axis.hpp"
#include "forge/articulation/joint.hpp"
#include "forge/articulation/sweep.hpp"
#include "forge/articulation/template.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

struct KinematicGraph {
  /// Sorted part ids.
  std::vector<std::int32_t> nodes;
  std::int32_t root = -1;
  /// Joint of each non-root node, keyed by child id.
  std::map<std::int32_t, JointProposal> joints;
  std::map<std::int32_t, std::string> labels;

  std::optional<std::int32_t> parent(std::int32_t id) const;
  std::vector<std::int32_t> children(std::int32_t id) const;
  /// `id` followed by all descendants, breadth first. Stops on cycles.
  std::vector<std::int32_t> subtree(std::int32_t id) const;
};

/// Root = the base-class part (smallest id if several; the others attach to
/// it with fixed joints). Every other part takes the nearest template-valid
/// parent by sample-point distance, ties within 1e-9 going to the smaller id.
/// Joints carry the resolved motion type; axes and limits are left default.
/// Throws UnknownLabel, NoValidParent, CycleDetected.
KinematicGraph build_kinematic_graph(const PartSet& parts, const CategoryTemplate& tmpl, const TriMesh& mesh,
                                     const MotionRuleRegistry* rules = nullptr);

enum class ViolationKind {
  kCycle,
  kMultipleRoots,
  kNoRoot,
  kMissingParent,
  kDependency,
  kMotionType,
  kUniversalAxes,
  kInvalidLimits,
  kUnknownLabel,
  kAxisNotUnit,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<std::int32_t> parts;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  nlohmann::json to_json() const;
};

/// Structural and template checks. Limits may still be absent (not yet
/// estimated); when present they must match the joint's degrees of freedom.
ValidationReport validate_graph(const KinematicGraph& graph, const CategoryTemplate& tmpl);

struct ArticulationParams {
  SweepParams sweep;
  /// Contact band; when zero, `contact_fraction` of the object diagonal.
  double contact_threshold = 0.0;
  double contact_fraction = 0.005;
  /// Per-label prismatic retention overriding `sweep.retention`.
  std::map<std::string, double> retention_overrides;
  const MotionRuleRegistry* rules = nullptr;

  double contact_for(const TriMesh& mesh) const;
};

/// Builds the graph and fills every joint's origin, axis and limits. Problems
/// that need a human look become joint flags instead of errors.
KinematicGraph articulate(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl,
                          const ArticulationParams& params);

/// Origin, axis and limits for one joint whose child/parent/motion are set.
void estimate_joint(const TriMesh& mesh, const PartSet& parts, const KinematicGraph& graph,
                    const CategoryTemplate& tmpl, const ArticulationParams& params, JointProposal& joint);

}  // namespace forge
