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
#include "forge/schema/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <boost/uuid/name_generator_sha1.hpp>
#include <boost/uuid/uuid_io.hpp>

#include "forge/error.hpp"

namespace forge {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::kSchemaViolation, msg); }

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) schema_error(std::string(what) + " must be a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void format_number(double v, std::string& out) {
  if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite number in annotation");
  if (v == 0.0) {
    out += '0';
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += buf;
}

bool scalar(const json& j) { return !j.is_object() && !j.is_array(); }

void dump_into(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + json(k).dump() + ": ";
        dump_into(v, out, indent + 2);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (std::all_of(j.begin(), j.end(), scalar)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(j[i], out, indent + 2);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      format_number(j.get<double>(), out);
      return;
    default:
      out += j.dump();
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    schema_error(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

const PartRecord* AnnotationDocument::find(std::int32_t id) const {
  for (const auto& p : parts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

PartRecord* AnnotationDocument::find(std::int32_t id) {
  return const_cast<PartRecord*>(static_cast<const AnnotationDocument*>(this)->find(id));
}

std::string object_uuid(const std::string& dataset, const std::string& model_id) {
  boost::uuids::name_generator_sha1 gen(boost::uuids::ns::url());
  return boost::uuids::to_string(gen("forge:" + dataset + "/" + model_id));
}

std::vector<std::string> document_problems(const AnnotationDocument& doc) {
  std::vector<std::string> out;
  std::set<std::int32_t> ids;
  int roots = 0;
  for (const auto& p : doc.parts) {
    if (!ids.insert(p.id).second) out.push_back("duplicate part id " + std::to_string(p.id));
    if (!p.joint) {
      ++roots;
    } else if (p.joint->child != p.id) {
      out.push_back("joint of part " + std::to_string(p.id) + " names child " + std::to_string(p.joint->child));
    }
  }
  if (roots != 1) out.push_back("expected exactly one root, found " + std::to_string(roots));
  for (const auto& p : doc.parts) {
    if (p.joint && !ids.contains(p.joint->parent)) {
      out.push_back("part " + std::to_string(p.id) + " has missing parent " + std::to_string(p.joint->parent));
    }
  }
  for (const auto& p : doc.parts) {
    std::set<std::int32_t> seen = {p.id};
    const PartRecord* cur = &p;
    while (cur != nullptr && cur->joint) {
      const std::int32_t up = cur->joint->parent;
      if (!seen.insert(up).second) {
        out.push_back("cycle through part " + std::to_string(p.id));
        break;
      }
      cur = doc.find(up);
    }
  }
  return out;
}

KinematicGraph to_graph(const AnnotationDocument& doc) {
  KinematicGraph g;
  for (const auto& p : doc.parts) {
    g.nodes.push_back(p.id);
    g.labels[p.id] = p.label;
    if (p.joint) {
      g.joints[p.id] = *p.joint;
    } else {
      g.root = p.id;
    }
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  return g;
}

json joint_to_json(const JointProposal& joint) {
  json j = {{"type", std::string(to_string(joint.motion))},
            {"parent", joint.parent},
            {"origin", vec_json(joint.origin)},
            {"axis", vec_json(joint.axis)},
            {"provenance", joint.provenance},
            {"flags", joint.flags}};
  if (joint.axis2) j["axis2"] = vec_json(*joint.axis2);
  json limits = json::array();
  for (const auto& l : joint.limits) limits.push_back({{"lower", l.lower}, {"upper", l.upper}});
  j["limits"] = limits;
  return j;
}

JointProposal joint_from_json(const json& j, std::int32_t child) {
  if (!j.is_object()) schema_error("joint must be an object");
  JointProposal out;
  out.child = child;
  out.motion = parse_motion_type(field<std::string>(j, "type"));
  out.parent = field<std::int32_t>(j, "parent");
  out.origin = vec_from(field<json>(j, "origin"), "joint origin");
  out.axis = vec_from(field<json>(j, "axis"), "joint axis");
  if (j.contains("axis2")) out.axis2 = vec_from(j["axis2"], "joint axis2");
  for (const auto& l : field<json>(j, "limits")) {
    out.limits.push_back({field<double>(l, "lower"), field<double>(l, "upper")});
  }
  out.provenance = j.value("provenance", std::string());
  out.flags = j.value("flags", std::vector<std::string>{});
  return out;
}

json physical_to_json(const PhysicalRecord& r) {
  return {{"material", r.material},
          {"material_resolution", r.resolution},
          {"density", r.density},
          {"volume", r.volume},
          {"mass", r.mass},
          {"solidity", std::string(to_string(r.solidity))},
          {"volume_method", std::string(to_string(r.method))},
          {"wall_thickness", r.wall_thickness},
          {"seed", r.seed}};
}

PhysicalRecord physical_from_json(const json& j, std::int32_t part_id) {
  if (!j.is_object()) schema_error("physical must be an object");
  PhysicalRecord r;
  r.part_id = part_id;
  r.material = field<std::string>(j, "material");
  r.resolution = j.value("material_resolution", std::string());
  r.density = field<double>(j, "density");
  r.volume = field<double>(j, "volume");
  r.mass = field<double>(j, "mass");
  r.solidity = parse_solidity(field<std::string>(j, "solidity"));
  r.method = parse_volume_method(field<std::string>(j, "volume_method"));
  r.wall_thickness = j.value("wall_thickness", 0.0);
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

json to_json(const AnnotationDocument& doc) {
  const ObjectInfo& o = doc.object;
  json object = {{"uuid", o.uuid},
                 {"source", {{"dataset", o.source_dataset}, {"model_id", o.source_model_id}}},
                 {"category", {{"super", o.super_category}, {"main", o.main_category}, {"sub", o.sub_category}}},
                 {"unit_scale", o.unit_scale},
                 {"up", vec_json(o.up)},
                 {"front", vec_json(o.front)},
                 {"bounds", {{"min", vec_json(o.bounds.min)}, {"max", vec_json(o.bounds.max)}}}};
  json parts = json::array();
  for (const auto& p : doc.parts) {
    parts.push_back({{"id", p.id},
                     {"label", p.label},
                     {"segments", p.segments},
                     {"joint", p.joint ? joint_to_json(*p.joint) : json(nullptr)},
                     {"physical", p.physical ? physical_to_json(*p.physical) : json(nullptr)},
                     {"affordances", p.affordances},
                     {"provenance", {{"human_corrected", p.human_corrected}, {"flags", p.flags}}}});
  }
  return {{"format", "forge-annotation"}, {"version", kAnnotationVersion}, {"object", object}, {"parts", parts}};
}

AnnotationDocument annotation_from_json(const json& j) {
  if (!j.is_object()) schema_error("annotation must be an object");
  if (j.value("format", std::string()) != "forge-annotation") schema_error("not a forge annotation");
  if (j.value("version", 0) != kAnnotationVersion) schema_error("unsupported annotation version");
  AnnotationDocument doc;
  const json& o = field<json>(j, "object");
  doc.object.uuid = field<std::string>(o, "uuid");
  const json src = field<json>(o, "source");
  doc.object.source_dataset = field<std::string>(src, "dataset");
  doc.object.source_model_id = field<std::string>(src, "model_id");
  const json cat = field<json>(o, "category");
  doc.object.super_category = field<std::string>(cat, "super");
  doc.object.main_category = field<std::string>(cat, "main");
  doc.object.sub_category = field<std::string>(cat, "sub");
  doc.object.unit_scale = field<double>(o, "unit_scale");
  doc.object.up = vec_from(field<json>(o, "up"), "up");
  doc.object.front = vec_from(field<json>(o, "front"), "front");
  const json b = field<json>(o, "bounds");
  doc.object.bounds.min = vec_from(field<json>(b, "min"), "bounds.min");
  doc.object.bounds.max = vec_from(field<json>(b, "max"), "bounds.max");
  for (const auto& pj : field<json>(j, "parts")) {
    PartRecord p;
    p.id = field<std::int32_t>(pj, "id");
    p.label = field<std::string>(pj, "label");
    p.segments = field<std::vector<std::int32_t>>(pj, "segments");
    if (pj.contains("joint") && !pj["joint"].is_null()) p.joint = joint_from_json(pj["joint"], p.id);
    if (pj.contains("physical") && !pj["physical"].is_null()) p.physical = physical_from_json(pj["physical"], p.id);
    p.affordances = pj.value("affordances", std::vector<std::string>{});
    if (pj.contains("provenance")) {
      p.human_corrected = pj["provenance"].value("human_corrected", false);
      p.flags = pj["provenance"].value("flags", std::vector<std::string>{});
    }
    doc.parts.push_back(std::move(p));
  }
  std::sort(doc.parts.begin(), doc.parts.end(), [](const PartRecord& a, const PartRecord& b) { return a.id < b.id; });
  return doc;
}

std::string canonical_dump(const json& doc) {
  std::string out;
  dump_into(doc, out, 0);
  out += '\n';
  return out;
}

std::string export_annotation(const AnnotationDocument& doc) {
  const auto problems = document_problems(doc);
  if (!problems.empty()) throw Error(ErrorCode::kUnvalidatedGraph, "annotation graph: " + problems.front());
  return canonical_dump(to_json(doc));
}

AnnotationDocument parse_annotation(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    schema_error(std::string("annotation is not JSON: ") + e.what());
  }
  try {
    return annotation_from_json(j);
  } catch (const json::exception& e) {
    schema_error(std::string("annotation: ") + e.what());
  }
}

}  // namespace forge
