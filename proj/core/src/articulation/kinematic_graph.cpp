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

#include "forge/articulation/kinematic_graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <numbers>
#include <set>

#include "forge/error.hpp"
#include "forge/mesh/point_index.hpp"

namespace forge {

std::optional<std::int32_t> KinematicGraph::parent(std::int32_t id) const {
  auto it = joints.find(id);
  if (it == joints.end()) return std::nullopt;
  return it->second.parent;
}

std::vector<std::int32_t> KinematicGraph::children(std::int32_t id) const {
  std::vector<std::int32_t> out;
  for (const auto& [child, joint] : joints) {
    if (joint.parent == id) out.push_back(child);
  }
  return out;
}

std::vector<std::int32_t> KinematicGraph::subtree(std::int32_t id) const {
  std::vector<std::int32_t> out;
  std::set<std::int32_t> seen;
  std::deque<std::int32_t> queue = {id};
  while (!queue.empty()) {
    const std::int32_t n = queue.front();
    queue.pop_front();
    if (!seen.insert(n).second) continue;
    out.push_back(n);
    for (auto c : children(n)) queue.push_back(c);
  }
  return out;
}

namespace {

bool depends_on(const TemplateEntry& entry, const std::string& parent_label, bool parent_is_root) {
  for (const auto& dep : entry.link_dependency) {
    if (dep == parent_label) return true;
    if (dep == kRootDependency && parent_is_root) return true;
  }
  return false;
}

/// Nodes on a parent-pointer cycle, each cycle listed once in sorted order.
std::vector<std::vector<std::int32_t>> find_cycles(const KinematicGraph& graph) {
  std::vector<std::vector<std::int32_t>> cycles;
  std::set<std::int32_t> on_cycle;
  for (auto start : graph.nodes) {
    std::vector<std::int32_t> path;
    std::set<std::int32_t> in_path;
    std::optional<std::int32_t> cur = start;
    while (cur && !in_path.contains(*cur) && !on_cycle.contains(*cur)) {
      path.push_back(*cur);
      in_path.insert(*cur);
      cur = graph.parent(*cur);
    }
    if (cur && in_path.contains(*cur)) {
      auto it = std::find(path.begin(), path.end(), *cur);
      std::vector<std::int32_t> cycle(it, path.end());
      std::sort(cycle.begin(), cycle.end());
      on_cycle.insert(cycle.begin(), cycle.end());
      cycles.push_back(std::move(cycle));
    }
  }
  return cycles;
}

std::string ids_text(const std::vector<std::int32_t>& ids) {
  std::string s;
  for (auto id : ids) s += (s.empty() ? "" : ", ") + std::to_string(id);
  return s;
}

}  // namespace

KinematicGraph build_kinematic_graph(const PartSet& parts, const CategoryTemplate& tmpl, const TriMesh& /*mesh*/,
                                     const MotionRuleRegistry* rules) {
  KinematicGraph graph;
  std::vector<const PartInstance*> ordered;
  for (const auto& p : parts.parts) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const auto* p : ordered) {
    if (tmpl.find(p->label) == nullptr) {
      throw Error(ErrorCode::kUnknownLabel, "label '" + p->label + "' is not in template '" + tmpl.main_category + "'");
    }
    graph.nodes.push_back(p->id);
    graph.labels[p->id] = p->label;
  }
  for (const auto* p : ordered) {
    if (tmpl.is_root_label(p->label)) {
      graph.root = p->id;
      break;
    }
  }
  if (graph.root < 0) throw Error(ErrorCode::kNoValidParent, "no part carries a base label");

  std::map<std::int32_t, std::unique_ptr<PointIndex>> indices;
  auto index_of = [&](const PartInstance& p) -> const PointIndex& {
    auto& slot = indices[p.id];
    if (!slot) slot = std::make_unique<PointIndex>(p.samples.points);
    return *slot;
  };

  for (const auto* p : ordered) {
    if (p->id == graph.root) continue;
    JointProposal joint;
    joint.child = p->id;
    joint.origin = p->box.center;
    if (tmpl.is_root_label(p->label)) {
      joint.parent = graph.root;
      joint.motion = MotionType::kFixed;
      joint.provenance = "extra_base_part";
      graph.joints[p->id] = joint;
      continue;
    }
    const TemplateEntry& entry = *tmpl.find(p->label);
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_id = -1;
    for (const auto* q : ordered) {
      if (q == p || !depends_on(entry, q->label, q->id == graph.root)) continue;
      const double d = index_of(*q).min_distance(p->samples.points);
      // Candidates arrive by ascending id, so a tie keeps the earlier one.
      if (best_id < 0 || d < best - 1e-9) {
        best = d;
        best_id = q->id;
      }
    }
    if (best_id < 0) {
      throw Error(ErrorCode::kNoValidParent, "part " + std::to_string(p->id) + " ('" + p->label +
                                                 "') has no permitted parent among the parts");
    }
    joint.parent = best_id;
    joint.motion = resolve_motion_type(*p, tmpl, rules);
    joint.provenance = "nearest_valid_parent";
    graph.joints[p->id] = joint;
  }
  const auto cycles = find_cycles(graph);
  if (!cycles.empty()) {
    throw Error(ErrorCode::kCycleDetected, "parent assignment forms a cycle through parts " + ids_text(cycles.front()));
  }
  return graph;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCycle: return "cycle";
    case ViolationKind::kMultipleRoots: return "multiple_roots";
    case ViolationKind::kNoRoot: return "no_root";
    case ViolationKind::kMissingParent: return "missing_parent";
    case ViolationKind::kDependency: return "dependency";
    case ViolationKind::kMotionType: return "motion_type";
    case ViolationKind::kUniversalAxes: return "universal_axes";
    case ViolationKind::kInvalidLimits: return "invalid_limits";
    case ViolationKind::kUnknownLabel: return "unknown_label";
    case ViolationKind::kAxisNotUnit: return "axis_not_unit";
  }
  return "?";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : violations) {
    out.push_back({{"kind", std::string(to_string(v.kind))}, {"parts", v.parts}, {"message", v.message}});
  }
  return {{"ok", ok()}, {"violations", out}};
}

ValidationReport validate_graph(const KinematicGraph& graph, const CategoryTemplate& tmpl) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::vector<std::int32_t> parts, std::string msg) {
    report.violations.push_back({kind, std::move(parts), std::move(msg)});
  };
  const std::set<std::int32_t> nodes(graph.nodes.begin(), graph.nodes.end());
  auto label_of = [&](std::int32_t id) -> std::string {
    auto it = graph.labels.find(id);
    return it == graph.labels.end() ? std::string() : it->second;
  };

  for (auto id : graph.nodes) {
    if (tmpl.find(label_of(id)) == nullptr) {
      add(ViolationKind::kUnknownLabel, {id}, "label '" + label_of(id) + "' is not in the template");
    }
  }
  std::vector<std::int32_t> roots;
  for (auto id : graph.nodes) {
    if (!graph.joints.contains(id)) roots.push_back(id);
  }
  if (roots.empty()) {
    add(ViolationKind::kNoRoot, {}, "no part is without a parent");
  } else if (roots.size() > 1) {
    add(ViolationKind::kMultipleRoots, roots, "parts " + ids_text(roots) + " all claim to be the root");
  }
  for (const auto& [child, joint] : graph.joints) {
    if (!nodes.contains(child)) {
      add(ViolationKind::kMissingParent, {child}, "joint for unknown part " + std::to_string(child));
      continue;
    }
    if (!nodes.contains(joint.parent)) {
      add(ViolationKind::kMissingParent, {child},
          "part " + std::to_string(child) + " names missing parent " + std::to_string(joint.parent));
      continue;
    }
    const TemplateEntry* entry = tmpl.find(label_of(child));
    if (entry == nullptr) continue;
    const std::string parent_label = label_of(joint.parent);
    const bool parent_is_root = tmpl.is_root_label(parent_label);
    const bool extra_base = tmpl.is_root_label(entry->name) && parent_is_root && joint.motion == MotionType::kFixed;
    if (!extra_base && !depends_on(*entry, parent_label, parent_is_root)) {
      add(ViolationKind::kDependency, {child, joint.parent},
          "'" + entry->name + "' may not attach to '" + parent_label + "'");
    }
    const bool allowed =
        std::find(entry->joint_types.begin(), entry->joint_types.end(), joint.motion) != entry->joint_types.end() ||
        (joint.motion == MotionType::kFixed && !entry->articulatable);
    if (!allowed) {
      add(ViolationKind::kMotionType, {child},
          "'" + entry->name + "' does not allow " + std::string(to_string(joint.motion)) + " joints");
    }
    if (std::abs(joint.axis.norm() - 1.0) > 1e-9) {
      add(ViolationKind::kAxisNotUnit, {child}, "joint axis is not unit length");
    }
    if (joint.motion == MotionType::kUniversal) {
      if (!joint.axis2 || std::abs(joint.axis2->norm() - 1.0) > 1e-9 ||
          std::abs(joint.axis.dot(*joint.axis2)) > 1e-6) {
        add(ViolationKind::kUniversalAxes, {child}, "universal joint needs two orthogonal unit axes");
      }
    }
    const bool wants_limits = joint.motion != MotionType::kFixed && joint.motion != MotionType::kContinuous;
    const auto dof = static_cast<std::size_t>(degrees_of_freedom(joint.motion));
    if (wants_limits && !joint.limits.empty() && joint.limits.size() != dof) {
      add(ViolationKind::kInvalidLimits, {child}, "expected " + std::to_string(dof) + " limit pairs");
    } else if (!wants_limits && !joint.limits.empty()) {
      add(ViolationKind::kInvalidLimits, {child},
          std::string(to_string(joint.motion)) + " joints carry no limits");
    }
    for (const auto& l : joint.limits) {
      if (!(l.lower <= l.upper)) add(ViolationKind::kInvalidLimits, {child}, "lower limit exceeds upper limit");
    }
  }
  for (auto& cycle : find_cycles(graph)) {
    add(ViolationKind::kCycle, cycle, "parent links form a cycle through parts " + ids_text(cycle));
  }
  return report;
}

double ArticulationParams::contact_for(const TriMesh& mesh) const {
  return contact_threshold > 0.0 ? contact_threshold : contact_fraction * mesh.bounds().diagonal();
}

void estimate_joint(const TriMesh& mesh, const PartSet& parts, const KinematicGraph& graph,
                    const CategoryTemplate& tmpl, const ArticulationParams& params, JointProposal& joint) {
  const PartInstance& child = parts.at(joint.child);
  const PartInstance& parent = parts.at(joint.parent);
  joint.limits.clear();
  joint.axis2.reset();
  if (joint.motion == MotionType::kFixed) {
    joint.origin = child.box.center;
    joint.axis = Vec3::UnitY();
    return;
  }
  ContactRegion contact;
  try {
    contact = detect_contact_regions(mesh, child, parent, params.contact_for(mesh));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoContact) throw;
    add_flag(joint, "no_contact");
  }
  AxisProposal axis;
  if (contact.clusters.empty() && joint.motion != MotionType::kPrismatic) {
    axis.origin = child.box.center;
    axis.axis = canonical_direction(child.box.axis(1));
    if (joint.motion == MotionType::kUniversal) axis.axis2 = canonical_direction(child.box.axis(0));
    axis.rule = "box_fallback";
    axis.ambiguous = true;
  } else {
    axis = propose_axis(child, parent, joint.motion, contact, parts);
  }
  joint.origin = axis.origin;
  joint.axis = axis.axis;
  joint.axis2 = axis.axis2;
  joint.provenance = axis.rule;
  if (axis.ambiguous) add_flag(joint, "ambiguous_axis");

  const auto moving = graph.subtree(joint.child);
  const TemplateEntry* entry = tmpl.find(child.label);
  auto allows = [&](MotionType t) {
    return entry && std::find(entry->joint_types.begin(), entry->joint_types.end(), t) != entry->joint_types.end();
  };
  auto rotation_limits = [&](const Vec3& dir, bool may_become_continuous) -> std::optional<JointLimits> {
    const RangeResult r = estimate_range_revolute(mesh, parts, joint.child, joint.origin, dir, params.sweep, moving);
    switch (r.status) {
      case RangeStatus::kContinuous:
        if (may_become_continuous) {
          joint.motion = MotionType::kContinuous;
          add_flag(joint, "unbounded_rotation_to_continuous");
          return std::nullopt;
        }
        add_flag(joint, "unbounded_rotation");
        return JointLimits{-std::numbers::pi, std::numbers::pi};
      case RangeStatus::kDegenerateRange:
        add_flag(joint, "degenerate_range");
        return r.limits;
      default:
        return r.limits;
    }
  };
  auto translation_limits = [&]() {
    SweepParams sweep = params.sweep;
    if (auto it = params.retention_overrides.find(child.label); it != params.retention_overrides.end()) {
      sweep.retention = it->second;
    }
    const RangeResult r = estimate_range_prismatic(mesh, parts, joint.child, joint.parent, joint.axis,
                                                   entry && entry->non_recessing, sweep, moving);
    if (r.status == RangeStatus::kDegenerateRange) add_flag(joint, "degenerate_range");
    if (r.status == RangeStatus::kNoDetachment) add_flag(joint, "no_detachment");
    return *r.limits;
  };

  switch (joint.motion) {
    case MotionType::kRevolute:
      if (auto l = rotation_limits(joint.axis, allows(MotionType::kContinuous))) joint.limits = {*l};
      break;
    case MotionType::kContinuous:
      break;
    case MotionType::kPrismatic:
      joint.limits = {translation_limits()};
      break;
    case MotionType::kCylindrical: {
      const auto rot = rotation_limits(joint.axis, false);
      joint.limits = {*rot, translation_limits()};
      break;
    }
    case MotionType::kUniversal: {
      const auto first = rotation_limits(joint.axis, false);
      const auto second = rotation_limits(*joint.axis2, false);
      joint.limits = {*first, *second};
      break;
    }
    case MotionType::kFixed:
      break;
  }
}

KinematicGraph articulate(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl,
                          const ArticulationParams& params) {
  params.sweep.validate();
  KinematicGraph graph = build_kinematic_graph(parts, tmpl, mesh, params.rules);
  for (auto& [child, joint] : graph.joints) estimate_joint(mesh, parts, graph, tmpl, params, joint);
  return graph;
}

}  // namespace forge
