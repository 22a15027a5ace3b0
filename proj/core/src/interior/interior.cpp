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
#include "forge/interior/interior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "forge/error.hpp"
#include "forge/mesh/bvh.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/mesh/parallel.hpp"
#include "forge/mesh/rng.hpp"

namespace forge {
namespace {

FaceSet faces_except(const PartSet& parts, std::int32_t skip) {
  FaceSet out;
  for (const auto& p : parts.parts) {
    if (p.id != skip) out.insert(out.end(), p.faces.begin(), p.faces.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Box spanning [lo, hi] in the frame (a, b, c), which must be right-handed.
TriMesh frame_box(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& lo, const Vec3& hi) {
  Mat3 axes;
  axes.col(0) = a;
  axes.col(1) = b;
  axes.col(2) = c;
  const Vec3 mid = 0.5 * (lo + hi);
  return make_oriented_box(axes * mid, axes, hi - lo);
}

std::uint64_t label_stream(const std::string& label) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

const std::array<Vec3, 6> kDirections = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(),
                                         -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};

}  // namespace

void CompletionParams::validate() const {
  if (!(panel_thickness > 0.0) || clearance < 0.0 || grid < 1 || !(percentile >= 0.0 && percentile <= 1.0) ||
      !(open_limit > 0.0 && open_limit <= 1.0) || !(complete_fraction > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid completion parameters");
  }
}

CavityProbe probe_cavity(const TriMesh& mesh, const PartSet& parts, std::int32_t part_id,
                         const JointProposal& joint, const CompletionParams& params) {
  params.validate();
  const PartInstance& part = parts.at(part_id);
  if (!has_translation(joint.motion)) {
    throw Error(ErrorCode::kInvalidArgument, "part " + std::to_string(part_id) + " has no translational DoF");
  }
  if (joint.axis.norm() < 1e-12) throw Error(ErrorCode::kInvalidArgument, "zero joint axis");
  CavityProbe probe;
  Vec3 axis = joint.axis.normalized();
  if (const PartInstance* parent = parts.find(joint.parent); parent != nullptr) {
    if ((part.samples.centroid() - parent->samples.centroid()).dot(axis) < 0.0) axis = -axis;
  }
  probe.outward = axis;
  Vec3 up = Vec3::UnitY() - Vec3::UnitY().dot(axis) * axis;
  if (up.norm() < 1e-6) up = Vec3::UnitZ() - Vec3::UnitZ().dot(axis) * axis;
  probe.up = up.normalized();
  probe.side = probe.up.cross(probe.outward).normalized();

  // The panel's back face: the largest inward-facing plane of the part.
  struct Facing {
    double offset;
    double area;
    std::int32_t face;
  };
  std::vector<Facing> facing;
  for (auto f : part.faces) {
    if (mesh.face_normal(f).dot(-axis) < 0.99) continue;
    facing.push_back({mesh.face_centroid(f).dot(axis), mesh.face_area(f), f});
  }
  if (facing.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "part " + std::to_string(part_id) + " has no face against its axis");
  }
  std::sort(facing.begin(), facing.end(), [](const Facing& a, const Facing& b) { return a.offset < b.offset; });
  std::size_t best_begin = 0, best_end = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < facing.size();) {
    std::size_t j = i;
    double area = 0.0;
    while (j < facing.size() && facing[j].offset - facing[i].offset <= 1e-6) area += facing[j++].area;
    if (area >= best_area) {
      best_area = area;
      best_begin = i;
      best_end = j;
    }
    i = j;
  }
  double s_lo = std::numeric_limits<double>::infinity(), s_hi = -s_lo;
  double u_lo = s_lo, u_hi = -s_lo;
  double weighted = 0.0;
  for (std::size_t k = best_begin; k < best_end; ++k) {
    weighted += facing[k].offset * facing[k].area;
    for (const Vec3& v : mesh.triangle(facing[k].face)) {
      s_lo = std::min(s_lo, v.dot(probe.side));
      s_hi = std::max(s_hi, v.dot(probe.side));
      u_lo = std::min(u_lo, v.dot(probe.up));
      u_hi = std::max(u_hi, v.dot(probe.up));
    }
  }
  probe.panel_plane = best_area > 0.0 ? weighted / best_area : facing[best_begin].offset;

  const FaceSet others = faces_except(parts, part_id);
  const TriangleBvh obstacles(mesh, others);
  auto at = [&](double s, double u, double c) { return s * probe.side + u * probe.up + c * probe.outward; };

  const int n = params.grid;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double s = s_lo + (i + 0.5) / n * (s_hi - s_lo);
      const double u = u_lo + (j + 0.5) / n * (u_hi - u_lo);
      probe.origins.push_back(at(s, u, probe.panel_plane));
    }
  }
  probe.hits.resize(probe.origins.size());
  parallel_for(std::size_t{0}, probe.origins.size(), [&](std::size_t k) {
    if (auto hit = obstacles.first_hit(probe.origins[k], -axis)) probe.hits[k] = hit->t;
  });

  std::vector<double> depths;
  for (const auto& h : probe.hits) {
    // A hit within one panel thickness is the rim the panel rests on.
    if (h && *h > params.panel_thickness) depths.push_back(*h);
  }
  probe.open_fraction = 1.0 - static_cast<double>(depths.size()) / static_cast<double>(probe.hits.size());
  if (depths.empty()) return probe;
  std::sort(depths.begin(), depths.end());
  probe.depth = depths[static_cast<std::size_t>(std::floor(params.percentile * static_cast<double>(depths.size() - 1)))];

  // Lateral walls, probed from the cavity's center line.
  const double s_mid = 0.5 * (s_lo + s_hi);
  const double u_mid = 0.5 * (u_lo + u_hi);
  std::array<double, 4> reach = {s_hi - s_mid, s_mid - s_lo, u_hi - u_mid, u_mid - u_lo};
  const std::array<Vec3, 4> lateral = {probe.side, -probe.side, probe.up, -probe.up};
  std::array<bool, 4> walled = {false, false, false, false};
  for (double f : {0.25, 0.5, 0.75}) {
    const Vec3 p = at(s_mid, u_mid, probe.panel_plane - f * probe.depth);
    for (std::size_t d = 0; d < 4; ++d) {
      if (auto hit = obstacles.first_hit(p, lateral[d])) {
        reach[d] = walled[d] ? std::min(reach[d], hit->t) : hit->t;
        walled[d] = true;
      }
    }
  }
  probe.side_range = {s_mid - reach[1], s_mid + reach[0]};
  probe.up_range = {u_mid - reach[3], u_mid + reach[2]};
  // Keep the cross-section inside the parent.
  if (const PartInstance* parent = parts.find(joint.parent); parent != nullptr) {
    double ps_lo = std::numeric_limits<double>::infinity(), ps_hi = -ps_lo, pu_lo = ps_lo, pu_hi = -ps_lo;
    for (auto f : parent->faces) {
      for (const Vec3& v : mesh.triangle(f)) {
        ps_lo = std::min(ps_lo, v.dot(probe.side));
        ps_hi = std::max(ps_hi, v.dot(probe.side));
        pu_lo = std::min(pu_lo, v.dot(probe.up));
        pu_hi = std::max(pu_hi, v.dot(probe.up));
      }
    }
    probe.side_range = {std::max(probe.side_range[0], ps_lo), std::min(probe.side_range[1], ps_hi)};
    probe.up_range = {std::max(probe.up_range[0], pu_lo), std::min(probe.up_range[1], pu_hi)};
  }
  return probe;
}

GeometryDelta complete_translational_part(const TriMesh& mesh, const PartSet& parts, std::int32_t part_id,
                                          const JointProposal& joint, const CompletionParams& params) {
  const CavityProbe probe = probe_cavity(mesh, parts, part_id, joint, params);
  const std::string who = "part " + std::to_string(part_id);
  if (probe.open_fraction >= params.open_limit) {
    throw Error(ErrorCode::kNoCavity, who + ": " + std::to_string(probe.open_fraction * 100.0) +
                                          "% of probe rays found no cavity");
  }
  const double t = params.panel_thickness;
  const double cl = params.clearance;
  const double depth = probe.depth - cl;
  const double width = probe.side_range[1] - probe.side_range[0] - 2.0 * cl;
  const double height = probe.up_range[1] - probe.up_range[0] - 2.0 * cl;
  if (depth <= 2.0 * t || width <= 2.0 * t || height <= t) {
    throw Error(ErrorCode::kNoCavity, who + ": cavity too small for panels");
  }
  double reach = 0.0;
  for (auto f : parts.at(part_id).faces) {
    for (const Vec3& v : mesh.triangle(f)) reach = std::max(reach, probe.panel_plane - v.dot(probe.outward));
  }
  if (reach > params.complete_fraction * probe.depth) {
    throw Error(ErrorCode::kAlreadyComplete, who + " already reaches " + std::to_string(reach) + " into the cavity");
  }

  const double x0 = probe.side_range[0] + cl, x1 = probe.side_range[1] - cl;
  const double y0 = probe.up_range[0] + cl, y1 = probe.up_range[1] - cl;
  const double c1 = probe.panel_plane, c0 = c1 - depth;
  const Vec3 &a = probe.side, &b = probe.up, &c = probe.outward;
  TriMesh panels;
  append(panels, frame_box(a, b, c, {x0, y0, c0}, {x1, y0 + t, c1}));          // bottom
  append(panels, frame_box(a, b, c, {x0, y0 + t, c0}, {x0 + t, y1, c1}));      // side
  append(panels, frame_box(a, b, c, {x1 - t, y0 + t, c0}, {x1, y1, c1}));      // side
  append(panels, frame_box(a, b, c, {x0 + t, y0 + t, c0}, {x1 - t, y1, c0 + t}));  // back
  append(panels, frame_box(a, b, c, {x0 + t, y0 + t, c1 - t}, {x1 - t, y1, c1}));  // inner front

  GeometryDelta delta;
  DeltaPart piece;
  piece.owner = part_id;
  piece.label = parts.at(part_id).label;
  piece.source = DeltaSource::kDrawerCompletion;
  piece.geometry = std::move(panels);
  delta.parts.push_back(std::move(piece));
  delta.flags.push_back("inherited_material");
  return delta;
}

BodyCavity probe_body_cavity(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl) {
  Aabb body;
  std::vector<std::int32_t> base;
  for (const auto& p : parts.parts) {
    if (tmpl.is_root_label(p.label)) {
      base.push_back(p.id);
      body.expand(mesh.bounds(p.faces));
    }
  }
  if (base.empty()) throw Error(ErrorCode::kNoCavity, "no base part to probe");
  FaceSet all;
  std::vector<std::int32_t> tags;
  for (const auto& p : parts.parts) {
    all.insert(all.end(), p.faces.begin(), p.faces.end());
    tags.insert(tags.end(), p.faces.size(), p.id);
  }
  const TriangleBvh obstacles(mesh, all, tags);
  const Vec3 start = body.center();
  BodyCavity cavity;
  cavity.bounds.expand(start);
  std::array<std::optional<TriangleBvh::RayHit>, 6> hits;
  int escaped = 0;
  for (std::size_t d = 0; d < 6; ++d) {
    hits[d] = obstacles.first_hit(start, kDirections[d]);
    if (hits[d] && mesh.face_normal(hits[d]->face).dot(kDirections[d]) > 0.0) {
      throw Error(ErrorCode::kNoCavity, "base parts are solid at their center");
    }
    Vec3 reach;
    if (hits[d]) {
      reach = start + hits[d]->t * kDirections[d];
    } else {
      ++escaped;
      reach = start;
      const int axis = static_cast<int>(d / 2);
      reach[axis] = d % 2 == 0 ? body.max[axis] : body.min[axis];
    }
    cavity.bounds.expand(reach);
  }
  if (escaped == 6) throw Error(ErrorCode::kNoCavity, "every probe ray escaped");
  auto is_base = [&](std::int32_t id) { return std::find(base.begin(), base.end(), id) != base.end(); };
  for (std::size_t d : {4u, 0u, 5u, 1u}) {
    if (!hits[d] || !is_base(hits[d]->tag)) {
      cavity.front = static_cast<int>(d);
      break;
    }
  }
  return cavity;
}

PlacementConfig PlacementConfig::for_category(const std::string& category) const {
  auto it = category_overrides.find(category);
  if (it == category_overrides.end()) return *this;
  nlohmann::json merged = to_json();
  for (const auto& [k, v] : it->second.items()) merged[k] = v;
  merged["category_overrides"] = nlohmann::json::object();
  return from_json(merged);
}

PlacementConfig PlacementConfig::from_json(const nlohmann::json& doc) {
  PlacementConfig c;
  try {
    c.shelf_spacing = doc.value("shelf_spacing", c.shelf_spacing);
    c.shelf_top_margin = doc.value("shelf_top_margin", c.shelf_top_margin);
    c.panel_thickness = doc.value("panel_thickness", c.panel_thickness);
    c.clearance = doc.value("clearance", c.clearance);
    c.rail_drop = doc.value("rail_drop", c.rail_drop);
    c.rail_radius = doc.value("rail_radius", c.rail_radius);
    if (doc.contains("category_overrides")) {
      for (const auto& [k, v] : doc["category_overrides"].items()) c.category_overrides[k] = v;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, std::string("placement config: ") + e.what());
  }
  if (!(c.shelf_spacing > 0.0) || !(c.panel_thickness > 0.0) || c.clearance < 0.0 || !(c.rail_radius > 0.0) ||
      c.rail_drop < 0.0 || c.shelf_top_margin < 0.0) {
    throw Error(ErrorCode::kConfigInvalid, "placement config values out of range");
  }
  return c;
}

nlohmann::json PlacementConfig::to_json() const {
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto& [k, v] : category_overrides) overrides[k] = v;
  return {{"shelf_spacing", shelf_spacing}, {"shelf_top_margin", shelf_top_margin},
          {"panel_thickness", panel_thickness}, {"clearance", clearance},
          {"rail_drop", rail_drop}, {"rail_radius", rail_radius},
          {"category_overrides", overrides}};
}

GeometryDelta insert_affordance_interiors(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl,
                                          const PlacementConfig& base_config) {
  GeometryDelta delta;
  std::vector<std::string> missing;
  for (const auto& label : tmpl.interior_affordances) {
    if (parts.ids_with_label(label).empty()) missing.push_back(label);
  }
  if (missing.empty()) return delta;
  const PlacementConfig cfg = base_config.for_category(tmpl.main_category);
  const BodyCavity cavity = probe_body_cavity(mesh, parts, tmpl);
  const Aabb& box = cavity.bounds;
  const double t = cfg.panel_thickness;
  const double cl = cfg.clearance;
  // Width runs across the opening; depth runs through it.
  int width_axis = 0;
  if (cavity.front >= 0) {
    width_axis = cavity.front / 2 == 2 ? 0 : 2;
  } else if (box.extent().z() > box.extent().x()) {
    width_axis = 2;
  }
  const int depth_axis = 2 - width_axis;
  std::int32_t next = parts.next_id();

  auto add_piece = [&](const std::string& label, DeltaSource source, TriMesh geometry) {
    DeltaPart piece;
    piece.owner = next++;
    piece.new_part = true;
    piece.label = label;
    piece.source = source;
    piece.geometry = std::move(geometry);
    delta.parts.push_back(std::move(piece));
  };

  for (const auto& label : missing) {
    if (label == "shelf" || label == "shelves" || label == "rack") {
      const double height = box.extent().y();
      for (int k = 1; k * cfg.shelf_spacing <= height - cfg.shelf_top_margin + 1e-12; ++k) {
        const double y = box.min.y() + k * cfg.shelf_spacing;
        Vec3 lo(box.min.x() + cl, y - 0.5 * t, box.min.z() + cl);
        Vec3 hi(box.max.x() - cl, y + 0.5 * t, box.max.z() - cl);
        add_piece(label, DeltaSource::kShelf, make_box(lo, hi));
      }
    } else if (label == "rail" || label == "rod") {
      Vec3 base = box.center();
      base.y() = box.max.y() - cfg.rail_drop;
      base[width_axis] = box.min[width_axis] + cl;
      const double length = box.extent()[width_axis] - 2.0 * cl;
      if (length <= 0.0) throw Error(ErrorCode::kNoCavity, "cavity too narrow for a rail");
      Vec3 dir = Vec3::Zero();
      dir[width_axis] = 1.0;
      add_piece(label, DeltaSource::kRail, make_cylinder(base, dir, cfg.rail_radius, length, 16));
    } else if (label == "divider") {
      Vec3 lo(box.min.x() + cl, box.min.y() + cl, box.min.z() + cl);
      Vec3 hi(box.max.x() - cl, box.max.y() - cl, box.max.z() - cl);
      const double mid = box.center()[width_axis];
      lo[width_axis] = mid - 0.5 * t;
      hi[width_axis] = mid + 0.5 * t;
      (void)depth_axis;
      add_piece(label, DeltaSource::kDivider, make_box(lo, hi));
    } else {
      delta.flags.push_back("no_generator:" + label);
    }
  }
  return delta;
}

std::vector<std::filesystem::path> ExemplarLibrary::candidates(const std::string& category,
                                                               const std::string& label) const {
  std::vector<std::filesystem::path> out;
  if (root_.empty()) return out;
  const auto dir = root_ / category / label;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".glb") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

TriMesh open_box(const Vec3& lo, const Vec3& hi, double t) {
  TriMesh out;
  append(out, make_box(lo, Vec3(hi.x(), lo.y() + t, hi.z())));
  append(out, make_box(Vec3(lo.x(), lo.y() + t, lo.z()), Vec3(lo.x() + t, hi.y(), hi.z())));
  append(out, make_box(Vec3(hi.x() - t, lo.y() + t, lo.z()), Vec3(hi.x(), hi.y(), hi.z())));
  append(out, make_box(Vec3(lo.x() + t, lo.y() + t, lo.z()), Vec3(hi.x() - t, hi.y(), lo.z() + t)));
  append(out, make_box(Vec3(lo.x() + t, lo.y() + t, hi.z() - t), Vec3(hi.x() - t, hi.y(), hi.z())));
  return out;
}

}  // namespace

ArticulatedInsertion insert_missing_articulated(const TriMesh& mesh, const PartSet& parts,
                                                const CategoryTemplate& tmpl, const ExemplarLibrary& library,
                                                std::uint64_t seed, const PlacementConfig& base_config) {
  ArticulatedInsertion out;
  std::vector<std::string> missing;
  for (const auto& label : tmpl.interior_articulated) {
    if (parts.ids_with_label(label).empty()) missing.push_back(label);
  }
  if (missing.empty()) return out;
  const PlacementConfig cfg = base_config.for_category(tmpl.main_category);
  const BodyCavity cavity = probe_body_cavity(mesh, parts, tmpl);
  const Aabb& box = cavity.bounds;
  std::int32_t root = -1;
  for (const auto& p : parts.parts) {
    if (tmpl.is_root_label(p.label) && (root < 0 || p.id < root)) root = p.id;
  }
  // Depth runs through the opening (z when unknown).
  const int depth_axis = cavity.front >= 0 ? cavity.front / 2 : 2;
  const double out_sign = cavity.front >= 0 && cavity.front % 2 == 1 ? -1.0 : 1.0;
  std::int32_t next = parts.next_id();

  for (const auto& label : missing) {
    const TemplateEntry* entry = tmpl.find(label);
    const MotionType motion =
        entry != nullptr && !entry->joint_types.empty() ? entry->joint_types.front() : MotionType::kFixed;
    DeltaPart piece;
    piece.owner = next;
    piece.new_part = true;
    piece.label = label;
    JointProposal joint;
    joint.child = next;
    joint.parent = root;
    joint.motion = motion;

    const auto files = library.candidates(tmpl.main_category, label);
    if (!files.empty()) {
      Rng rng(derive_seed(seed, label_stream(label)));
      const auto& file = files[static_cast<std::size_t>(rng.below(files.size()))];
      TriMesh exemplar = load_mesh_file(file);
      const Aabb eb = exemplar.bounds();
      double scale = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        if (eb.extent()[k] > 0.0) scale = std::min(scale, 0.95 * box.extent()[k] / eb.extent()[k]);
      }
      if (!std::isfinite(scale)) throw Error(ErrorCode::kEmptyGeometry, "exemplar " + file.string() + " is flat");
      const Vec3 anchor(eb.center().x(), eb.min.y(), eb.center().z());
      for (Vec3& v : exemplar.vertices) v = cavity.floor_center() + scale * (v - anchor);
      exemplar.face_material.clear();
      piece.source = DeltaSource::kExemplar;
      piece.geometry = std::move(exemplar);
      joint.provenance = "exemplar:" + file.filename().string();
    } else if (label == "turntable") {
      const double radius = 0.4 * std::min(box.extent().x(), box.extent().z());
      piece.source = DeltaSource::kParametricPart;
      piece.geometry = make_cylinder(cavity.floor_center(), Vec3::UnitY(), radius, 0.01, 48);
      joint.provenance = "parametric_part";
    } else if (label == "basket") {
      const Vec3 half = 0.45 * box.extent();
      Vec3 lo = box.center() - half, hi = box.center() + half;
      lo.y() = box.min.y();
      hi.y() = box.min.y() + 0.3 * box.extent().y();
      piece.source = DeltaSource::kParametricPart;
      piece.geometry = open_box(lo, hi, cfg.panel_thickness);
      joint.provenance = "parametric_part";
    } else {
      out.delta.flags.push_back("no_generator:" + label);
      continue;
    }

    const Aabb pb = piece.geometry.bounds();
    if (has_translation(motion) && !has_rotation(motion)) {
      Vec3 dir = Vec3::Zero();
      dir[depth_axis] = 1.0;
      joint.axis = canonical_direction(dir);
      joint.origin = pb.center();
      const double travel = 0.9 * pb.extent()[depth_axis];
      const double sign = out_sign * joint.axis[depth_axis];
      joint.limits = {sign > 0 ? JointLimits{0.0, travel} : JointLimits{-travel, 0.0}};
    } else if (motion != MotionType::kFixed) {
      joint.axis = Vec3::UnitY();
      joint.origin = Vec3(pb.center().x(), pb.min.y(), pb.center().z());
      if (motion == MotionType::kRevolute) joint.limits = {JointLimits{-std::numbers::pi, std::numbers::pi}};
      if (motion == MotionType::kCylindrical || motion == MotionType::kUniversal) {
        out.delta.flags.push_back("untyped_joint:" + label);
        joint.motion = MotionType::kContinuous;
      }
    } else {
      joint.origin = pb.center();
    }
    out.joints.push_back(std::move(joint));
    out.delta.parts.push_back(std::move(piece));
    ++next;
  }
  return out;
}

}  // namespace forge
