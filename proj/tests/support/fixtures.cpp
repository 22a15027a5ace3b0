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

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "forge/mesh/rng.hpp"
#include "forge/physics/physics.hpp"
#include "forge/mesh/union_find.hpp"

namespace forge::testing {

TriMesh icosphere(double radius, int subdivisions, const Vec3& center) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    for (const auto& tri : f) {
      const int a = mid(tri[0], tri[1]), b = mid(tri[1], tri[2]), c = mid(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriMesh mesh;
  for (const auto& p : v) mesh.vertices.push_back(center + radius * p);
  mesh.faces = std::move(f);
  return mesh;
}

FaceSet add_part(TriMesh& dst, const TriMesh& src) {
  const std::int32_t first = append(dst, src);
  FaceSet out;
  for (std::size_t i = 0; i < src.face_count(); ++i) out.push_back(first + static_cast<std::int32_t>(i));
  return out;
}

TriMesh box_at(const Vec3& center, const Vec3& extents) {
  return make_box(center - 0.5 * extents, center + 0.5 * extents);
}

Mat3 rotation_about(const Vec3& axis, double radians) {
  return Eigen::AngleAxisd(radians, axis.normalized()).toRotationMatrix();
}

ClusterFixture random_cluster_fixture(std::uint64_t seed, int max_boxes) {
  Rng rng(seed);
  ClusterFixture fx;
  const int boxes = 5 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_boxes - 4)));
  double x = 0.0;
  double y = 0.0;
  for (int b = 0; b < boxes; ++b) {
    if (rng.uniform() < 0.2) {
      // Start a new chain well away from the previous one.
      x = 0.0;
      y += 0.5;
    }
    const Vec3 size(0.05 + 0.05 * rng.uniform(), 0.05 + 0.05 * rng.uniform(), 0.05 + 0.05 * rng.uniform());
    const double gap = rng.uniform() < 0.1 ? 0.05 : rng.uniform(0.0001, 0.002);
    x += gap + 0.5 * size.x();
    add_part(fx.mesh, box_at({x, y + rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01)}, size));
    x += 0.5 * size.x();
    fx.label_of_box.push_back(static_cast<std::int32_t>(rng.below(3)));
  }
  return fx;
}

std::vector<std::vector<std::int32_t>> brute_force_clusters(
    const TriMesh& mesh, const std::vector<FaceSet>& segments,
    const std::vector<std::int32_t>& label_of_segment, double threshold) {
  const std::size_t n = segments.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (label_of_segment[i] != label_of_segment[j]) continue;
      double best = std::numeric_limits<double>::infinity();
      for (auto f : segments[i]) {
        for (auto g : segments[j]) best = std::min(best, triangle_triangle_distance(mesh.triangle(f), mesh.triangle(g)));
      }
      if (best < threshold) uf.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::int32_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(static_cast<std::int32_t>(i));
  std::vector<std::vector<std::int32_t>> out;
  for (auto& [root, members] : groups) out.push_back(members);
  std::sort(out.begin(), out.end());
  return out;
}

PartSet make_part_set(const TriMesh& mesh, const std::vector<std::pair<std::string, FaceSet>>& parts,
                      std::size_t samples, std::uint64_t seed) {
  ClusteringParams params;
  params.samples_per_part = samples;
  params.seed = seed;
  PartSet out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    PartInstance p;
    p.id = static_cast<std::int32_t>(i);
    p.label_id = static_cast<std::int32_t>(i);
    p.label = parts[i].first;
    p.faces = parts[i].second;
    std::sort(p.faces.begin(), p.faces.end());
    describe_part(mesh, p, params);
    out.parts.push_back(std::move(p));
  }
  return out;
}

CategoryTemplate fixture_template() {
  static const char* kJson = R"({
    "main_category": "fixture",
    "content": [
      {"name": "body", "kinematic": {"articulatable": false, "link_dependency": [], "joint_type": []}},
      {"name": "frame", "kinematic": {"articulatable": false, "link_dependency": [], "joint_type": []}},
      {"name": "housing", "kinematic": {"articulatable": false, "link_dependency": [], "joint_type": []}},
      {"name": "panel", "kinematic": {"articulatable": false, "link_dependency": [], "joint_type": []}},
      {"name": "drawer", "non_recessing": true,
       "kinematic": {"articulatable": true, "link_dependency": ["body"], "joint_type": ["prismatic"]}},
      {"name": "door",
       "kinematic": {"articulatable": true, "link_dependency": ["frame", "body"], "joint_type": ["revolute"]}},
      {"name": "rotor",
       "kinematic": {"articulatable": true, "link_dependency": ["housing"],
                     "joint_type": ["revolute", "continuous"]}},
      {"name": "button",
       "kinematic": {"articulatable": true, "link_dependency": ["panel"], "joint_type": ["prismatic"]}},
      {"name": "plate",
       "kinematic": {"articulatable": true, "link_dependency": ["body"], "joint_type": ["prismatic"]}}
    ]
  })";
  return load_template_json(nlohmann::json::parse(kJson));
}

namespace {

TriMesh span_box(const Vec3& lo, const Vec3& hi) { return make_box(lo, hi); }

ArticulatedFixture finish(TriMesh mesh, const std::string& parent_label, FaceSet parent,
                          const std::string& child_label, FaceSet child) {
  ArticulatedFixture fx;
  fx.parts = make_part_set(mesh, {{parent_label, std::move(parent)}, {child_label, std::move(child)}});
  fx.mesh = std::move(mesh);
  return fx;
}

void append_to(TriMesh& mesh, FaceSet& part, const TriMesh& piece) {
  const FaceSet added = add_part(mesh, piece);
  part.insert(part.end(), added.begin(), added.end());
}

}  // namespace

ArticulatedFixture cabinet_with_drawer(bool full_drawer) {
  TriMesh mesh;
  FaceSet body, drawer;
  const double front = 0.225;
  const double back = front - kCabinetDepth;  // inner face of the back panel
  append_to(mesh, body, span_box({-0.30, -0.25, back - 0.02}, {-0.28, 0.25, front}));
  append_to(mesh, body, span_box({0.28, -0.25, back - 0.02}, {0.30, 0.25, front}));
  append_to(mesh, body, span_box({-0.28, -0.25, back}, {0.28, -0.23, front}));
  append_to(mesh, body, span_box({-0.28, 0.23, back}, {0.28, 0.25, front}));
  append_to(mesh, body, span_box({-0.28, -0.25, back - 0.02}, {0.28, 0.25, back}));

  append_to(mesh, drawer, span_box({-0.30, -0.25, front}, {0.30, 0.25, front + 0.02}));
  if (full_drawer) {
    append_to(mesh, drawer, span_box({-0.27, -0.23, back}, {0.27, -0.215, front}));
    append_to(mesh, drawer, span_box({-0.27, -0.215, back}, {-0.255, 0.15, front}));
    append_to(mesh, drawer, span_box({0.255, -0.215, back}, {0.27, 0.15, front}));
    append_to(mesh, drawer, span_box({-0.255, -0.215, back}, {0.255, 0.15, back + 0.015}));
  }
  auto fx = finish(std::move(mesh), "body", std::move(body), "drawer", std::move(drawer));
  fx.origin = Vec3(0.0, 0.0, front + 0.01);
  fx.axis = Vec3::UnitZ();
  return fx;
}

ArticulatedFixture door_in_frame(double clearance_degrees, bool hinge_post) {
  TriMesh mesh;
  FaceSet frame, door;
  const Vec3 hinge(0.4, 0.0, 0.04);
  append_to(mesh, door, span_box({-0.4, 0.0, 0.0}, {0.4, 2.0, 0.04}));
  // Closing stop and the two hinge mounts.
  append_to(mesh, frame, span_box({-0.5, -0.05, -0.3}, {0.38, 2.05, -0.025}));
  append_to(mesh, frame, span_box({0.4, 0.10, -0.03}, {0.46, 0.25, 0.04}));
  append_to(mesh, frame, span_box({0.4, 1.75, -0.03}, {0.46, 1.90, 0.04}));
  // Opening stopper: its face is the door's front plane at the clearance
  // angle, covering 0.6 m to 1.0 m out from the hinge.
  const Mat3 rot = rotation_about(Vec3::UnitY(), clearance_degrees * M_PI / 180.0);
  const Vec3 out = rot * Vec3(-1.0, 0.0, 0.0);
  const Vec3 normal = rot * Vec3(0.0, 0.0, 1.0);
  Mat3 axes;
  axes.col(0) = out;
  axes.col(1) = Vec3::UnitY();
  axes.col(2) = -normal;
  append_to(mesh, frame,
            make_oriented_box(hinge + 0.8 * out + 0.15 * normal + Vec3(0.0, 1.0, 0.0), axes,
                              Vec3(0.4, 2.1, 0.3)));
  if (hinge_post) {
    append_to(mesh, frame, make_cylinder(Vec3(hinge.x(), -0.05, hinge.z()), Vec3::UnitY(), 0.01, 2.1, 32));
  }
  auto fx = finish(std::move(mesh), "frame", std::move(frame), "door", std::move(door));
  fx.origin = hinge;
  fx.axis = Vec3::UnitY();
  return fx;
}

ArticulatedFixture rotor_on_shaft() {
  TriMesh mesh;
  FaceSet housing, rotor;
  append_to(mesh, housing, span_box({-0.2, -0.2, -0.2}, {0.2, 0.2, -0.1}));
  append_to(mesh, housing, make_cylinder(Vec3(0.0, 0.0, -0.1), Vec3::UnitZ(), 0.01, 0.1, 24));
  append_to(mesh, rotor, make_cylinder(Vec3::Zero(), Vec3::UnitZ(), 0.15, 0.01, 48));
  auto fx = finish(std::move(mesh), "housing", std::move(housing), "rotor", std::move(rotor));
  fx.origin = Vec3::Zero();
  fx.axis = Vec3::UnitZ();
  return fx;
}

ArticulatedFixture push_button(double travel) {
  TriMesh mesh;
  FaceSet panel, button;
  append_to(mesh, panel, span_box({-0.03, -0.01, -0.03}, {0.03, 0.0, 0.03}));
  // Narrow rails touching the cap's side faces over their full height.
  append_to(mesh, panel, span_box({-0.015, 0.0, -0.002}, {-0.01, 0.03, 0.002}));
  append_to(mesh, panel, span_box({0.01, 0.0, -0.002}, {0.015, 0.03, 0.002}));
  append_to(mesh, button, span_box({-0.01, travel, -0.01}, {0.01, travel + 0.02, 0.01}));
  auto fx = finish(std::move(mesh), "panel", std::move(panel), "button", std::move(button));
  fx.origin = Vec3(0.0, travel + 0.01, 0.0);
  fx.axis = Vec3::UnitY();
  return fx;
}

ArticulatedFixture free_plate() {
  TriMesh mesh;
  FaceSet body, plate;
  append_to(mesh, body, span_box({-0.2, -0.2, -0.2}, {0.2, 0.2, 0.2}));
  append_to(mesh, plate, span_box({-0.1, 0.7, -0.1}, {0.1, 0.72, 0.1}));
  auto fx = finish(std::move(mesh), "body", std::move(body), "plate", std::move(plate));
  fx.origin = Vec3(0.0, 0.71, 0.0);
  fx.axis = Vec3::UnitY();
  return fx;
}

void transform_fixture(ArticulatedFixture& fx, const RigidTransform& pose) {
  transform_in_place(fx.mesh, pose);
  ClusteringParams params;
  for (auto& p : fx.parts.parts) describe_part(fx.mesh, p, params);
  fx.origin = pose * fx.origin;
  fx.axis = pose.linear() * fx.axis;
}

ApplianceFixture appliance(const std::string& category, bool with_door,
                           const std::vector<std::string>& extra) {
  struct Spec {
    Vec3 inner_max;
    const char* interior;
    const char* extra_entries;
  };
  static const std::map<std::string, Spec> kSpecs = {
      {"refrigerator", {{0.6, 1.75, 0.6}, R"({"affordances": ["shelf"]})",
                        R"({"name": "shelf", "kinematic": {"articulatable": false, "link_dependency": ["body"], "joint_type": []}})"}},
      {"wardrobe", {{1.0, 1.9, 0.55}, R"({"affordances": ["rail"]})",
                    R"({"name": "rail", "kinematic": {"articulatable": false, "link_dependency": ["body"], "joint_type": []}})"}},
      {"microwave", {{0.4, 0.25, 0.35}, R"({"articulated": ["turntable"]})",
                     R"({"name": "turntable", "kinematic": {"articulatable": true, "link_dependency": ["body"], "joint_type": ["continuous"]}})"}},
      {"dishwasher", {{0.55, 0.7, 0.55}, R"({"articulated": ["basket"]})",
                      R"({"name": "basket", "kinematic": {"articulatable": true, "link_dependency": ["body"], "joint_type": ["prismatic"]}})"}},
      {"pantry", {{0.8, 1.8, 0.4}, R"({"affordances": ["hook"]})",
                  R"({"name": "hook", "kinematic": {"articulatable": false, "link_dependency": ["body"], "joint_type": []}})"}},
  };
  const Spec& spec = kSpecs.at(category);
  const std::string doc = std::string(R"({"main_category": ")") + category + R"(", "content": [
      {"name": "body", "kinematic": {"articulatable": false, "link_dependency": [], "joint_type": []}},
      {"name": "door", "kinematic": {"articulatable": true, "link_dependency": ["body"], "joint_type": ["revolute"]}},
      )" + spec.extra_entries + R"(], "interior": )" + spec.interior + "}";

  ApplianceFixture fx;
  fx.tmpl = load_template_json(nlohmann::json::parse(doc));
  const Vec3 lo = Vec3::Zero(), hi = spec.inner_max;
  fx.inner.expand(lo);
  fx.inner.expand(hi);
  const double w = 0.05;
  TriMesh mesh;
  FaceSet body, door;
  append_to(mesh, body, span_box({lo.x() - w, lo.y() - w, lo.z() - w}, {lo.x(), hi.y() + w, hi.z()}));
  append_to(mesh, body, span_box({hi.x(), lo.y() - w, lo.z() - w}, {hi.x() + w, hi.y() + w, hi.z()}));
  append_to(mesh, body, span_box({lo.x(), lo.y() - w, lo.z() - w}, {hi.x(), lo.y(), hi.z()}));
  append_to(mesh, body, span_box({lo.x(), hi.y(), lo.z() - w}, {hi.x(), hi.y() + w, hi.z()}));
  append_to(mesh, body, span_box({lo.x(), lo.y(), lo.z() - w}, {hi.x(), hi.y(), lo.z()}));
  std::vector<std::pair<std::string, FaceSet>> parts = {{"body", body}};
  if (with_door) {
    append_to(mesh, door, span_box({lo.x() - w, lo.y() - w, hi.z()}, {hi.x() + w, hi.y() + w, hi.z() + 0.03}));
    parts.emplace_back("door", door);
  }
  for (std::size_t k = 0; k < extra.size(); ++k) {
    FaceSet piece;
    const Vec3 c = lo + (0.2 + 0.1 * static_cast<double>(k)) * (hi - lo);
    append_to(mesh, piece, box_at(c, Vec3::Constant(0.05)));
    parts.emplace_back(extra[k], piece);
  }
  fx.parts = make_part_set(mesh, parts);
  fx.mesh = std::move(mesh);
  return fx;
}

AnnotationDocument fixture_document(const ArticulatedFixture& fx, MotionType motion) {
  AnnotationDocument doc;
  doc.object.uuid = object_uuid("fixtures", "two_part");
  doc.object.source_dataset = "fixtures";
  doc.object.source_model_id = "two_part";
  doc.object.super_category = "furniture";
  doc.object.main_category = "fixture";
  doc.object.sub_category = "test";
  doc.object.bounds = fx.mesh.bounds();
  for (const auto& part : fx.parts.parts) {
    PartRecord rec;
    rec.id = part.id;
    rec.label = part.label;
    rec.segments = {part.id};
    PhysicalRecord phys;
    phys.part_id = part.id;
    phys.material = "wood";
    phys.resolution = "exact";
    phys.volume = closed_volume(fx.mesh, part.faces);
    phys.density = 700.0;
    phys.mass = phys.density * phys.volume;
    phys.seed = static_cast<std::uint64_t>(part.id);
    rec.physical = phys;
    if (part.id != fx.parts.parts.front().id) {
      JointProposal j;
      j.child = part.id;
      j.parent = fx.parts.parts.front().id;
      j.motion = motion;
      j.origin = fx.origin;
      j.axis = fx.axis;
      j.provenance = "fixture";
      if (motion == MotionType::kUniversal) j.axis2 = fx.axis.unitOrthogonal();
      if (has_rotation(motion) && motion != MotionType::kContinuous) j.limits.push_back({-0.5, 1.25});
      if (motion == MotionType::kUniversal) j.limits.push_back({-0.25, 0.75});
      if (has_translation(motion)) j.limits.push_back({0.0, 0.3});
      rec.joint = j;
    }
    doc.parts.push_back(std::move(rec));
  }
  return doc;
}

}  // namespace forge::testing
