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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/articulation/joint.hpp"
#include "forge/articulation/template.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

struct ContactCluster {
  Vec3 centroid = Vec3::Zero();
  PointSet points;
};

struct ContactRegion {
  /// Largest cluster first.
  std::vector<ContactCluster> clusters;
  double contact_threshold = 0.0;

  std::size_t point_count() const;
  Vec3 centroid() const;
};

/// Child samples within `contact_threshold` of the parent surface, grouped by
/// single linkage at twice the threshold or five mean sample spacings,
/// whichever is larger. Throws NoContact when empty.
ContactRegion detect_contact_regions(const TriMesh& mesh, const PartInstance& child,
                                     const PartInstance& parent, double contact_threshold);

/// A geometric rule that may override the template's first joint type.
using MotionRule = std::function<std::optional<MotionType>(const PartInstance&, const TemplateEntry&)>;

/// Named disambiguation rules keyed by part label; empty by default.
class MotionRuleRegistry {
 public:
  void add(const std::string& label, std::string name, MotionRule rule);
  /// First registered rule for `label` that returns a type allowed by `entry`.
  std::optional<std::pair<std::string, MotionType>> resolve(const PartInstance& part,
                                                            const TemplateEntry& entry) const;

 private:
  std::map<std::string, std::vector<std::pair<std::string, MotionRule>>> rules_;
};

/// Fixed for non-articulatable entries, otherwise a registered rule's answer
/// or the first listed joint type. Throws UnknownLabel.
MotionType resolve_motion_type(const PartInstance& part, const CategoryTemplate& tmpl,
                               const MotionRuleRegistry* rules = nullptr);

struct AxisProposal {
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
  std::optional<Vec3> axis2;
  std::string rule;
  /// The alignment test had no clear winner (margin below 1e-3).
  bool ambiguous = false;
};

/// Minimum alignment margin between the best and runner-up box axes.
inline constexpr double kAxisMargin = 1e-3;

/// Joint origin and axis from contact clusters and descriptor boxes. Throws
/// NoContact when a contact-based rule has no clusters; ambiguity is flagged
/// in the result rather than thrown.
AxisProposal propose_axis(const PartInstance& child, const PartInstance& parent, MotionType motion,
                          const ContactRegion& contact, const PartSet& context);

}  // namespace forge
