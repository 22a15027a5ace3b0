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
#include <cctype>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"

namespace forge {

namespace fs = std::filesystem;
using nlohmann::json;

void Workspace::flag_part(std::int32_t id, const std::string& flag) {
  auto& list = part_flags[id];
  if (std::find(list.begin(), list.end(), flag) == list.end()) list.push_back(flag);
}

void Workspace::flag_object(const std::string& flag) {
  if (std::find(object_flags.begin(), object_flags.end(), flag) == object_flags.end()) {
    object_flags.push_back(flag);
  }
}

std::vector<std::string> Workspace::all_flags() const {
  std::vector<std::string> out = object_flags;
  for (const auto& [id, flags] : part_flags) {
    for (const auto& f : flags) out.push_back("part_" + std::to_string(id) + ":" + f);
  }
  if (graph) {
    for (const auto& [child, joint] : graph->joints) {
      for (const auto& f : joint.flags) out.push_back("joint_" + std::to_string(child) + ":" + f);
    }
  }
  return out;
}

namespace {

fs::path find_mesh(const fs::path& dir, const std::string& id) {
  for (const char* ext : {".glb", ".obj", ".GLB", ".OBJ"}) {
    fs::path p = dir / (id + ext);
    if (fs::is_regular_file(p)) return p;
  }
  throw Error(ErrorCode::kIo, "no .glb or .obj mesh for '" + id + "' in " + dir.string());
}


}  // namespace

Workspace load_workspace(const PipelineConfig& config, const std::string& id) {
  Workspace ws;
  const fs::path meta_path = config.paths.rasters / id / "object.json";
  json meta;
  try {
    meta = json::parse(read_text_file(meta_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, meta_path.string() + ": " + e.what());
  }
  ws.meta = ObjectMeta::from_json(meta, id);
  ws.mesh = load_mesh_file(find_mesh(config.paths.meshes, id));
  if (ws.meta.size) ws.scale_factor = apply_metric_scale(ws.mesh, *ws.meta.size).factor;
  return ws;
}

std::vector<std::uint8_t> encode_workspace(const Workspace& ws) {
  json doc;
  json meta = ws.meta.to_json();
  meta["id"] = ws.meta.id;
  doc["meta"] = meta;
  doc["scale_factor"] = ws.scale_factor;

  json vertices = json::array(), faces = json::array();
  for (const auto& v : ws.mesh.vertices) {
    vertices.push_back(v.x());
    vertices.push_back(v.y());
    vertices.push_back(v.z());
  }
  for (const auto& f : ws.mesh.faces) {
    for (auto i : f) faces.push_back(i);
  }
  doc["mesh"] = {{"vertices", vertices},
                 {"faces", faces},
                 {"face_material", ws.mesh.face_material},
                 {"unit_scale", ws.mesh.unit_scale}};

  json parts = json::array();
  for (const auto& p : ws.parts.parts) {
    parts.push_back({{"id", p.id}, {"label_id", p.label_id}, {"label", p.label}, {"segments", p.segments},
                     {"faces", p.faces}});
  }
  doc["parts"] = parts;

  json generated = json::array();
  for (const auto& [child, joint] : ws.generated_joints) {
    generated.push_back({{"child", child}, {"joint", joint_to_json(joint)}});
  }
  doc["generated_joints"] = generated;

  if (ws.graph) {
    json joints = json::array(), labels = json::array();
    for (const auto& [child, joint] : ws.graph->joints) {
      joints.push_back({{"child", child}, {"joint", joint_to_json(joint)}});
    }
    for (const auto& [id, label] : ws.graph->labels) labels.push_back({{"id", id}, {"label", label}});
    doc["graph"] = {{"nodes", ws.graph->nodes}, {"root", ws.graph->root}, {"joints", joints}, {"labels", labels}};
  } else {
    doc["graph"] = nullptr;
  }

  json physical = json::array();
  for (const auto& r : ws.physical) physical.push_back({{"part_id", r.part_id}, {"record", physical_to_json(r)}});
  doc["physical"] = physical;

  json part_flags = json::array();
  for (const auto& [id, flags] : ws.part_flags) part_flags.push_back({{"id", id}, {"flags", flags}});
  doc["part_flags"] = part_flags;
  doc["object_flags"] = ws.object_flags;
  return json::to_cbor(doc);
}

Workspace decode_workspace(std::span<const std::uint8_t> bytes, const ClusteringParams& clustering) {
  Workspace ws;
  try {
    const json doc = json::from_cbor(bytes.begin(), bytes.end());
    const json& meta = doc.at("meta");
    ws.meta = ObjectMeta::from_json(json{{"dataset", meta.at("dataset")}, {"category", meta.at("category")}},
                                    meta.at("id").get<std::string>());
    if (meta.contains("size")) ws.meta.size = SizeSpec::from_json(meta.at("size"));
    ws.scale_factor = doc.at("scale_factor").get<double>();

    const json& mesh = doc.at("mesh");
    const auto vertices = mesh.at("vertices").get<std::vector<double>>();
    const auto faces = mesh.at("faces").get<std::vector<std::int32_t>>();
    if (vertices.size() % 3 != 0 || faces.size() % 3 != 0) {
      throw Error(ErrorCode::kMalformedFile, "workspace mesh arrays are not triples");
    }
    for (std::size_t i = 0; i < vertices.size(); i += 3) {
      ws.mesh.vertices.emplace_back(vertices[i], vertices[i + 1], vertices[i + 2]);
    }
    for (std::size_t i = 0; i < faces.size(); i += 3) ws.mesh.faces.push_back({faces[i], faces[i + 1], faces[i + 2]});
    ws.mesh.face_material = mesh.at("face_material").get<std::vector<std::int32_t>>();
    ws.mesh.unit_scale = mesh.at("unit_scale").get<double>();
    ws.mesh.validate();

    for (const auto& p : doc.at("parts")) {
      PartInstance part;
      part.id = p.at("id").get<std::int32_t>();
      part.label_id = p.at("label_id").get<std::int32_t>();
      part.label = p.at("label").get<std::string>();
      part.segments = p.at("segments").get<std::vector<std::int32_t>>();
      part.faces = p.at("faces").get<FaceSet>();
      for (auto f : part.faces) {
        if (f < 0 || static_cast<std::size_t>(f) >= ws.mesh.face_count()) {
          throw Error(ErrorCode::kMalformedFile, "workspace part face out of range");
        }
      }
      describe_part(ws.mesh, part, clustering);
      ws.parts.parts.push_back(std::move(part));
    }
    for (const auto& g : doc.at("generated_joints")) {
      const auto child = g.at("child").get<std::int32_t>();
      ws.generated_joints[child] = joint_from_json(g.at("joint"), child);
    }
    if (!doc.at("graph").is_null()) {
      const json& g = doc.at("graph");
      KinematicGraph graph;
      graph.nodes = g.at("nodes").get<std::vector<std::int32_t>>();
      graph.root = g.at("root").get<std::int32_t>();
      for (const auto& j : g.at("joints")) {
        const auto child = j.at("child").get<std::int32_t>();
        graph.joints[child] = joint_from_json(j.at("joint"), child);
      }
      for (const auto& l : g.at("labels")) graph.labels[l.at("id").get<std::int32_t>()] = l.at("label");
      ws.graph = std::move(graph);
    }
    for (const auto& r : doc.at("physical")) {
      ws.physical.push_back(physical_from_json(r.at("record"), r.at("part_id").get<std::int32_t>()));
    }
    for (const auto& f : doc.at("part_flags")) {
      ws.part_flags[f.at("id").get<std::int32_t>()] = f.at("flags").get<std::vector<std::string>>();
    }
    ws.object_flags = doc.at("object_flags").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("workspace: ") + e.what());
  }
  return ws;
}

}  // namespace forge
