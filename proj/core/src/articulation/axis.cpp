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

#include "forge/articulation/axis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forge/error.hpp"
#include "forge/mesh/bvh.hpp"
#include "forge/mesh/union_find.hpp"

namespace forge {

std::size_t ContactRegion::point_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.points.size();
  return n;
}

Vec3 ContactRegion::centroid() const {
  Vec3 sum = Vec3::Zero();
  std::size_t n = 0;
  for (const auto& c : clusters) {
    for (const auto& p : c.points.points) sum += p;
    n += c.points.size();
  }
  return n ? Vec3(sum / static_cast<double>(n)) : Vec3::Zero();
}

ContactRegion detect_contact_regions(const TriMesh& mesh, const PartInstance& child,
                                     const PartInstance& parent, double contact_threshold) {
  if (!(contact_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "contact threshold must be positive");
  }
  const TriangleBvh parent_bvh(mesh, parent.faces);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < child.samples.size(); ++i) {
    if (parent_bvh.within(child.samples.points[i], contact_threshold)) members.push_back(i);
  }
  if (members.empty()) {
    throw Error(ErrorCode::kNoContact, "part " + std::to_string(child.id) + " is not within " +
                                           std::to_string(contact_threshold) + " of part " +
                                           std::to_string(parent.id));
  }
  UnionFind uf(members.size());
  // Linkage must bridge the sampling gaps, not just the contact band.
  const double spacing = std::sqrt(total_area(mesh, child.faces) / static_cast<double>(child.samples.size()));
  const double link = std::max(2.0 * contact_threshold, 5.0 * spacing);
  const double link_sq = link * link;
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      if ((child.samples.points[members[a]] - child.samples.points[members[b]]).squaredNorm() <= link_sq) {
        uf.unite(a, b);
      }
    }
  }
  std::map<std::size_t, std::size_t> cluster_of_root;
  ContactRegion region;
  region.contact_threshold = contact_threshold;
  for (std::size_t a = 0; a < members.size(); ++a) {
    auto [it, inserted] = cluster_of_root.emplace(uf.find(a), region.clusters.size());
    if (inserted) {
      region.clusters.emplace_back();
      region.clusters.back().points.seed = child.samples.seed;
    }
    auto& pts = region.clusters[it->second].points;
    pts.points.push_back(child.samples.points[members[a]]);
    pts.source_face.push_back(child.samples.source_face[members[a]]);
  }
  for (auto& c : region.clusters) c.centroid = c.points.centroid();
  // Clusters were created in order of their first member; stable sort keeps
  // that order among equal sizes.
  std::stable_sort(region.clusters.begin(), region.clusters.end(),
                   [](const ContactCluster& a, const ContactCluster& b) { return a.points.size() > b.points.size(); });
  return region;
}

void MotionRuleRegistry::add(const std::string& label, std::string name, MotionRule rule) {
  rules_[label].emplace_back(std::move(name), std::move(rule));
}

std::optional<std::pair<std::string, MotionType>> MotionRuleRegistry::resolve(
    const PartInstance& part, const TemplateEntry& entry) const {
  auto it = rules_.find(entry.name);
  if (it == rules_.end()) return std::nullopt;
  for (const auto& [name, rule] : it->second) {
    const auto type = rule(part, entry);
    if (type && std::find(entry.joint_types.begin(), entry.joint_types.end(), *type) != entry.joint_types.end()) {
      return std::pair{name, *type};
    }
  }
  return std::nullopt;
}

MotionType resolve_motion_type(const PartInstance& part, const CategoryTemplate& tmpl,
                               const MotionRuleRegistry* rules) {
  const TemplateEntry* entry = tmpl.find(part.label);
  if (entry == nullptr) {
    throw Error(ErrorCode::kUnknownLabel, "label '" + part.label + "' is not in template '" +
                                              tmpl.main_category + "'");
  }
  if (!entry->articulatable || entry->joint_types.empty()) return MotionType::kFixed;
  if (rules != nullptr && entry->joint_types.size() > 1) {
    if (auto hit = rules->resolve(part, *entry)) return hit->second;
  }
  return entry->joint_types.front();
}

namespace {

struct Alignment {
  int best = 0;
  bool ambiguous = false;
};

/// Box axis whose |dot| with `dir` is largest (or smallest when `most_orthogonal`).
Alignment align(const OrientedBox& box, const Vec3& dir, bool most_orthogonal = false) {
  std::array<double, 3> score;
  for (int i = 0; i < 3; ++i) {
    const double d = std::abs(box.axis(i).dot(dir));
    score[static_cast<std::size_t>(i)] = most_orthogonal ? -d : d;
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score[a] > score[b]; });
  return {order[0], score[order[0]] - score[order[1]] < kAxisMargin};
}

struct PatchShape {
  Vec3 major;
  Vec3 normal;
  /// Small and flat relative to the part: an axle-style contact whose hinge
  /// is the patch normal rather than its long direction.
  bool axle_like = false;
};

PatchShape patch_shape(const PointSet& pts, const OrientedBox& child_box) {
  const Vec3 c = pts.centroid();
  Mat3 cov = Mat3::Zero();
  for (const auto& p : pts.points) cov += (p - c) * (p - c).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
  const Vec3 ev = solver.eigenvalues();
  PatchShape out{solver.eigenvectors().col(2), solver.eigenvectors().col(0), false};
  double lo = 0.0, hi = 0.0;
  for (const auto& p : pts.points) {
    const double t = (p - c).dot(out.major);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  const bool flat = pts.size() >= 3 && ev(0) <= 0.1 * ev(1);
  out.axle_like = flat && hi - lo < 0.25 * child_box.extents.maxCoeff();
  return out;
}

void require_contact(const ContactRegion& contact) {
  if (contact.clusters.empty()) throw Error(ErrorCode::kNoContact, "no contact clusters for axis inference");
}

AxisProposal rotational_axis(const PartInstance& child, const ContactRegion& contact) {
  require_contact(contact);
  AxisProposal out;
  if (contact.clusters.size() >= 2) {
    const Vec3 a = contact.clusters[0].centroid;
    const Vec3 b = contact.clusters[1].centroid;
    const Vec3 d = b - a;
    if (d.norm() > 1e-12) {
      out.axis = canonical_direction(d.normalized());
      out.origin = 0.5 * (a + b);
      out.rule = "contact_centroids";
      return out;
    }
  }
  const auto& cluster = contact.clusters.front();
  const PatchShape shape = patch_shape(cluster.points, child.box);
  const Alignment al = align(child.box, shape.axle_like ? shape.normal : shape.major);
  out.axis = canonical_direction(child.box.axis(al.best));
  out.origin = cluster.centroid;
  out.ambiguous = al.ambiguous;
  out.rule = shape.axle_like ? "contact_normal" : "contact_elongation";
  return out;
}

}  // namespace

AxisProposal propose_axis(const PartInstance& child, const PartInstance& parent, MotionType motion,
                          const ContactRegion& contact, const PartSet& /*context*/) {
  switch (motion) {
    case MotionType::kFixed:
      throw Error(ErrorCode::kInvalidArgument, "fixed joints have no axis");
    case MotionType::kRevolute:
    case MotionType::kContinuous:
    case MotionType::kCylindrical:
      return rotational_axis(child, contact);
    case MotionType::kPrismatic: {
      AxisProposal out;
      const Vec3 pull = child.samples.centroid() - parent.samples.centroid();
      const Vec3 dir = pull.norm() > 1e-12 ? Vec3(pull.normalized()) : Vec3::UnitZ();
      const Alignment al = align(child.box, dir);
      out.axis = canonical_direction(child.box.axis(al.best));
      out.origin = child.box.center;
      out.ambiguous = al.ambiguous || pull.norm() <= 1e-12;
      out.rule = "box_pull_direction";
      return out;
    }
    case MotionType::kUniversal: {
      AxisProposal out = rotational_axis(child, contact);
      const Alignment al = align(child.box, out.axis, true);
      Vec3 second = child.box.axis(al.best);
      second -= second.dot(out.axis) * out.axis;
      if (second.norm() < 1e-9) {
        // Box axis parallel to the first hinge; any perpendicular works.
        second = out.axis.unitOrthogonal();
        out.ambiguous = true;
      }
      out.axis2 = canonical_direction(second.normalized());
      out.origin = contact.centroid();
      out.ambiguous = out.ambiguous || al.ambiguous;
      out.rule += "+box_orthogonal";
      return out;
    }
  }
  return {};
}

}  // namespace forge
