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
#include "forge/schema/urdf.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace forge {
namespace {

std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string triple(const Vec3& v) { return num(v.x()) + " " + num(v.y()) + " " + num(v.z()); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string link_name(const PartRecord& p) {
  std::string out = "part_" + std::to_string(p.id) + "_";
  for (char c : p.label) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

/// URDF fixed-axis roll, pitch, yaw of a rotation matrix.
Vec3 rpy_of(const Mat3& r) {
  const Vec3 ypr = r.eulerAngles(2, 1, 0);
  return Vec3(ypr[2], ypr[1], ypr[0]);
}

}  // namespace

UrdfPackage export_urdf(const AnnotationDocument& doc, const TriMesh& mesh, const PartSet& parts,
                        const UrdfLimits& limits) {
  const auto problems = document_problems(doc);
  if (!problems.empty()) throw Error(ErrorCode::kUnvalidatedGraph, "urdf export: " + problems.front());
  const double s = mesh.unit_scale;
  std::map<std::int32_t, Vec3> frame;
  for (const auto& p : doc.parts) frame[p.id] = p.joint ? Vec3(s * p.joint->origin) : Vec3::Zero();

  UrdfPackage out;
  std::ostringstream x;
  const std::string robot = doc.object.main_category.empty() ? "object" : doc.object.main_category;
  x << "<?xml version=\"1.0\"?>\n";
  x << "<robot name=\"" << xml_escape(robot) << "\">\n";
  x << "  <!-- Cylindrical joints are a revolute + prismatic pair and universal joints two revolutes,\n"
       "       each through a massless intermediate link named *_mid. -->\n";

  for (const auto& p : doc.parts) {
    const std::string who = "part " + std::to_string(p.id);
    if (!p.physical || !(p.physical->mass > 0.0)) throw Error(ErrorCode::kMissingPhysical, who + " has no mass");
    const PartInstance* inst = parts.find(p.id);
    if (inst == nullptr) throw Error(ErrorCode::kInvalidArgument, who + " has no geometry");
    const Vec3 f = frame.at(p.id);
    TriMesh local = submesh(mesh, inst->faces);
    for (Vec3& v : local.vertices) v = s * v - f;
    local.unit_scale = 1.0;
    local.face_material.clear();
    const std::string file = "meshes/part_" + std::to_string(p.id) + ".obj";
    out.meshes[file] = write_obj(local);

    const double m = p.physical->mass;
    const Vec3 e = s * inst->box.extents;
    const Vec3 inertia(m / 12.0 * (e.y() * e.y() + e.z() * e.z()), m / 12.0 * (e.x() * e.x() + e.z() * e.z()),
                       m / 12.0 * (e.x() * e.x() + e.y() * e.y()));
    x << "  <link name=\"" << link_name(p) << "\">\n";
    x << "    <inertial>\n";
    x << "      <origin xyz=\"" << triple(s * inst->box.center - f) << "\" rpy=\"" << triple(rpy_of(inst->box.axes))
      << "\"/>\n";
    x << "      <mass value=\"" << num(m) << "\"/>\n";
    x << "      <inertia ixx=\"" << num(inertia.x()) << "\" ixy=\"0\" ixz=\"0\" iyy=\"" << num(inertia.y())
      << "\" iyz=\"0\" izz=\"" << num(inertia.z()) << "\"/>\n";
    x << "    </inertial>\n";
    for (const char* tag : {"visual", "collision"}) {
      x << "    <" << tag << ">\n      <geometry>\n        <mesh filename=\"" << file
        << "\"/>\n      </geometry>\n    </" << tag << ">\n";
    }
    x << "  </link>\n";
  }

  auto joint_xml = [&](const std::string& name, const char* type, const std::string& parent,
                       const std::string& child, const Vec3& origin, const Vec3* axis, const JointLimits* lim) {
    x << "  <joint name=\"" << name << "\" type=\"" << type << "\">\n";
    x << "    <parent link=\"" << parent << "\"/>\n";
    x << "    <child link=\"" << child << "\"/>\n";
    x << "    <origin xyz=\"" << triple(origin) << "\" rpy=\"0 0 0\"/>\n";
    if (axis != nullptr) x << "    <axis xyz=\"" << triple(*axis) << "\"/>\n";
    if (lim != nullptr) {
      x << "    <limit lower=\"" << num(lim->lower) << "\" upper=\"" << num(lim->upper) << "\" effort=\""
        << num(limits.effort) << "\" velocity=\"" << num(limits.velocity) << "\"/>\n";
    }
    x << "  </joint>\n";
  };

  for (const auto& p : doc.parts) {
    if (!p.joint) continue;
    const JointProposal& j = *p.joint;
    const PartRecord& parent = *doc.find(j.parent);
    const std::string who = "joint of part " + std::to_string(p.id);
    const std::string jn = "joint_" + std::to_string(p.id);
    const Vec3 offset = frame.at(p.id) - frame.at(j.parent);
    const Vec3 axis = j.axis.normalized();
    if (j.motion != MotionType::kFixed && !(j.axis.norm() > 0.0)) {
      throw Error(ErrorCode::kUntypedJoint, who + " has no axis");
    }
    const std::size_t dof = static_cast<std::size_t>(degrees_of_freedom(j.motion));
    const bool limited = j.motion != MotionType::kFixed && j.motion != MotionType::kContinuous;
    if (limited && j.limits.size() != dof) {
      throw Error(ErrorCode::kUntypedJoint, who + " lacks limits for its " + std::string(to_string(j.motion)) + " type");
    }
    // Prismatic limits are in meters; rotation limits are unit-free.
    auto scaled = [&](JointLimits l) { return JointLimits{l.lower * s, l.upper * s}; };
    const std::string pl = link_name(parent), cl = link_name(p);
    switch (j.motion) {
      case MotionType::kFixed:
        joint_xml(jn, "fixed", pl, cl, offset, nullptr, nullptr);
        break;
      case MotionType::kRevolute:
        joint_xml(jn, "revolute", pl, cl, offset, &axis, &j.limits[0]);
        break;
      case MotionType::kContinuous:
        joint_xml(jn, "continuous", pl, cl, offset, &axis, nullptr);
        break;
      case MotionType::kPrismatic: {
        const JointLimits l = scaled(j.limits[0]);
        joint_xml(jn, "prismatic", pl, cl, offset, &axis, &l);
        break;
      }
      case MotionType::kCylindrical: {
        const std::string mid = cl + "_mid";
        x << "  <link name=\"" << mid << "\"/>\n";
        const JointLimits l = scaled(j.limits[1]);
        joint_xml(jn + "_rot", "revolute", pl, mid, offset, &axis, &j.limits[0]);
        joint_xml(jn + "_slide", "prismatic", mid, cl, Vec3::Zero(), &axis, &l);
        break;
      }
      case MotionType::kUniversal: {
        if (!j.axis2 || !(j.axis2->norm() > 0.0)) throw Error(ErrorCode::kUntypedJoint, who + " has no second axis");
        const Vec3 axis2 = j.axis2->normalized();
        const std::string mid = cl + "_mid";
        x << "  <link name=\"" << mid << "\"/>\n";
        joint_xml(jn + "_a", "revolute", pl, mid, offset, &axis, &j.limits[0]);
        joint_xml(jn + "_b", "revolute", mid, cl, Vec3::Zero(), &axis2, &j.limits[1]);
        break;
      }
    }
  }
  x << "</robot>\n";
  out.xml = x.str();
  return out;
}

}  // namespace forge
