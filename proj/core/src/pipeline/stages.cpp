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

#include <algorithm>

#include "forge/articulation/axis.hpp"
#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/mesh/oversegment.hpp"
#include "forge/mesh/rng.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"
#include "forge/schema/urdf.hpp"
#include "forge/segmentation/raster.hpp"

namespace forge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t object_seed(const PipelineConfig& config, const Workspace& ws) {
  return derive_seed(config.seed, fnv1a(ws.meta.id));
}

ClusteringParams clustering_for(const PipelineConfig& config) {
  ClusteringParams p = config.clustering;
  p.seed = config.seed;
  return p;
}

}  // namespace

CategoryTemplate load_category_template(const PipelineConfig& config, const std::string& main_category) {
  const fs::path path = config.paths.templates / (main_category + ".json");
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kUnknownLabel, "no template for category '" + main_category + "'");
  }
  return load_template_file(path);
}

void run_segment(Workspace& ws, const PipelineConfig& config) {
  const fs::path dir = config.paths.rasters / ws.meta.id;
  json views_doc;
  try {
    views_doc = json::parse(read_text_file(dir / "views.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, (dir / "views.json").string() + ": " + e.what());
  }
  std::vector<ViewSpec> views = views_from_json(views_doc);
  const std::vector<std::string> vocabulary = read_vocabulary(dir / "vocabulary.txt");

  // Views were authored against the file's units; scaling the cameras with
  // the mesh leaves every image unchanged.
  for (auto& v : views) {
    v.eye *= ws.scale_factor;
    v.target *= ws.scale_factor;
    v.ortho_half_extent *= ws.scale_factor;
  }

  const OverSegmentation overseg = oversegment(ws.mesh);
  std::vector<IdRaster> segment_maps(views.size()), label_maps(views.size());
  for (std::size_t i = 0; i < views.size(); ++i) {
    label_maps[i] = read_raster(dir / "labels" / (views[i].view_id + ".irast"));
    segment_maps[i] = render_segment_ids(ws.mesh, overseg, views[i]);
  }
  std::vector<RasterPair> pairs;
  for (std::size_t i = 0; i < views.size(); ++i) pairs.push_back({&segment_maps[i], &label_maps[i]});

  const SegmentLabels voted = assign_semantic_labels(aggregate_votes(pairs), overseg);
  const SegmentLabels labels = propagate_unlabeled(ws.mesh, overseg, voted);
  ws.parts = cluster_instances(ws.mesh, overseg, labels, clustering_for(config), vocabulary);
  ws.graph.reset();
  ws.physical.clear();
  ws.generated_joints.clear();
  ws.part_flags.clear();
  ws.object_flags.clear();
  for (const auto& p : ws.parts.parts) {
    if (p.label.empty() || p.label_id < 0 || static_cast<std::size_t>(p.label_id) >= vocabulary.size()) {
      ws.flag_part(p.id, "label_outside_vocabulary");
    }
  }
}

void run_complete(Workspace& ws, const CategoryTemplate& tmpl, const PipelineConfig& config) {
  const ClusteringParams describe = clustering_for(config);

  // Translational parts first: their pull direction is all completion needs.
  const KinematicGraph draft = build_kinematic_graph(ws.parts, tmpl, ws.mesh, config.articulation.rules);
  for (const auto& [child, draft_joint] : draft.joints) {
    if (draft_joint.motion != MotionType::kPrismatic) continue;
    JointProposal joint = draft_joint;
    const AxisProposal axis = propose_axis(ws.parts.at(child), ws.parts.at(joint.parent), joint.motion,
                                           ContactRegion{}, ws.parts);
    joint.origin = axis.origin;
    joint.axis = axis.axis;
    try {
      const GeometryDelta delta = complete_translational_part(ws.mesh, ws.parts, child, joint, config.completion);
      const std::int32_t material = dominant_material(ws.mesh, ws.parts.at(child).faces);
      apply_delta(ws.mesh, ws.parts, delta, describe, material);
      ws.flag_part(child, "completed_interior");
      for (const auto& f : delta.flags) ws.flag_part(child, f);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNoCavity) {
        ws.flag_part(child, "no_cavity");
      } else if (e.code() != ErrorCode::kAlreadyComplete) {
        throw;
      }
    }
  }

  const std::string& category = ws.meta.main_category;
  const PlacementConfig placement = config.placement.for_category(category);
  auto note_new_parts = [&](const GeometryDelta& delta, const std::vector<std::int32_t>& created) {
    for (const auto& piece : delta.parts) {
      if (piece.new_part && std::find(created.begin(), created.end(), piece.owner) != created.end()) {
        ws.flag_part(piece.owner, "generated_" + std::string(to_string(piece.source)));
      }
    }
    for (const auto& f : delta.flags) ws.flag_object(f);
  };
  try {
    if (!tmpl.interior_affordances.empty()) {
      const GeometryDelta delta = insert_affordance_interiors(ws.mesh, ws.parts, tmpl, placement);
      note_new_parts(delta, apply_delta(ws.mesh, ws.parts, delta, describe));
    }
    if (!tmpl.interior_articulated.empty()) {
      const ExemplarLibrary library(config.paths.exemplars);
      const ArticulatedInsertion ins =
          insert_missing_articulated(ws.mesh, ws.parts, tmpl, library, object_seed(config, ws), placement);
      note_new_parts(ins.delta, apply_delta(ws.mesh, ws.parts, ins.delta, describe));
      for (const auto& joint : ins.joints) ws.generated_joints[joint.child] = joint;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoCavity) throw;
    ws.flag_object("no_body_cavity");
  }
}

void run_articulate(Workspace& ws, const CategoryTemplate& tmpl, const PipelineConfig& config) {
  KinematicGraph graph = articulate(ws.mesh, ws.parts, tmpl, config.articulation);
  for (const auto& [child, joint] : ws.generated_joints) {
    auto it = graph.joints.find(child);
    if (it == graph.joints.end()) continue;
    JointProposal generated = joint;
    generated.parent = it->second.parent;
    it->second = generated;
  }
  const ValidationReport report = validate_graph(graph, tmpl);
  if (!report.ok()) throw Error(ErrorCode::kUnvalidatedGraph, report.to_json().dump());
  ws.graph = std::move(graph);
}

void run_physics(Workspace& ws, const MaterialTable& table, const PipelineConfig& config) {
  ws.physical = estimate_physics(ws.mesh, ws.parts, ws.meta.main_category, table, object_seed(config, ws),
                                 config.voxel_resolution);
  for (const auto& r : ws.physical) {
    if (r.resolution != "exact") ws.flag_part(r.part_id, "material_" + r.resolution);
  }
}

AnnotationDocument build_document(const Workspace& ws, const CategoryTemplate& tmpl) {
  if (!ws.graph) throw Error(ErrorCode::kUnvalidatedGraph, "object '" + ws.meta.id + "' has no kinematic graph");
  AnnotationDocument doc;
  ObjectInfo& o = doc.object;
  o.uuid = object_uuid(ws.meta.dataset, ws.meta.id);
  o.source_dataset = ws.meta.dataset;
  o.source_model_id = ws.meta.id;
  o.super_category = ws.meta.super_category;
  o.main_category = ws.meta.main_category;
  o.sub_category = ws.meta.sub_category;
  o.unit_scale = ws.mesh.unit_scale;
  o.up = Vec3::UnitY();
  o.front = Vec3::UnitZ();
  try {
    static const Vec3 kDirections[6] = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(),
                                        -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};
    const BodyCavity cavity = probe_body_cavity(ws.mesh, ws.parts, tmpl);
    if (cavity.front >= 0) o.front = kDirections[cavity.front];
  } catch (const Error&) {
    // Solid or open bodies keep the +Z convention.
  }
  const Aabb bounds = ws.mesh.bounds();
  o.bounds.min = bounds.min * ws.mesh.unit_scale;
  o.bounds.max = bounds.max * ws.mesh.unit_scale;

  for (const auto& p : ws.parts.parts) {
    PartRecord rec;
    rec.id = p.id;
    rec.label = p.label;
    rec.segments = p.segments;
    if (auto it = ws.graph->joints.find(p.id); it != ws.graph->joints.end()) rec.joint = it->second;
    for (const auto& r : ws.physical) {
      if (r.part_id == p.id) rec.physical = r;
    }
    if (const TemplateEntry* entry = tmpl.find(p.label)) rec.affordances = entry->affordances;
    if (auto it = ws.part_flags.find(p.id); it != ws.part_flags.end()) rec.flags = it->second;
    doc.parts.push_back(std::move(rec));
  }
  return doc;
}

std::map<std::string, std::string> export_files(Workspace& ws, const CategoryTemplate& tmpl,
                                                const PipelineConfig& config) {
  std::map<std::string, std::string> files;
  const AnnotationDocument doc = build_document(ws, tmpl);
  files["annotation.json"] = export_annotation(doc);
  files["template.json"] = canonical_dump(template_to_json(tmpl));

  try {
    UrdfPackage urdf = export_urdf(doc, ws.mesh, ws.parts, config.urdf_limits);
    files["object.urdf"] = std::move(urdf.xml);
    for (auto& [path, obj] : urdf.meshes) files[path] = std::move(obj);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMissingPhysical) throw;
    ws.flag_object("urdf_skipped_missing_physical");
  }

  std::vector<GlbNode> nodes;
  for (const auto& p : ws.parts.parts) {
    GlbNode node;
    node.name = "part_" + std::to_string(p.id) + "_" + p.label;
    node.mesh = submesh(ws.mesh, p.faces);
    for (auto& v : node.mesh.vertices) v *= ws.mesh.unit_scale;
    nodes.push_back(std::move(node));
  }
  const auto glb = write_glb(nodes);
  files["mesh.glb"] = std::string(glb.begin(), glb.end());

  json part_flags = json::object();
  for (const auto& [id, flags] : ws.part_flags) part_flags[std::to_string(id)] = flags;
  json joint_flags = json::object();
  for (const auto& [child, joint] : ws.graph->joints) {
    if (!joint.flags.empty()) joint_flags[std::to_string(child)] = joint.flags;
  }
  files["flags.json"] = canonical_dump({{"object", ws.object_flags}, {"parts", part_flags}, {"joints", joint_flags}});
  return files;
}

}  // namespace forge
