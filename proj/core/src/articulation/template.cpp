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

#include "forge/articulation/template.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"

namespace forge {

namespace {

constexpr std::pair<MotionType, std::string_view> kMotionNames[] = {
    {MotionType::kFixed, "fixed"},           {MotionType::kRevolute, "revolute"},
    {MotionType::kContinuous, "continuous"}, {MotionType::kPrismatic, "prismatic"},
    {MotionType::kCylindrical, "cylindrical"}, {MotionType::kUniversal, "universal"}};

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorCode::kSchemaViolation, msg); }

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) violation(what + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) violation(what + " must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void parse_entry(const nlohmann::json& j, const std::string& owner, std::vector<TemplateEntry>& out) {
  if (!j.is_object()) violation("template entry must be an object");
  TemplateEntry e;
  if (!j.contains("name") || !j["name"].is_string()) violation("template entry without a name");
  e.name = j["name"].get<std::string>();
  if (e.name.empty()) violation("template entry with an empty name");
  e.gloss = j.value("gloss", std::string());
  e.parent_entry = owner;
  if (j.contains("kinematic")) {
    const auto& k = j["kinematic"];
    if (!k.is_object()) violation("'" + e.name + "': kinematic must be an object");
    if (!k.contains("articulatable") || !k["articulatable"].is_boolean()) {
      violation("'" + e.name + "': kinematic.articulatable must be a boolean");
    }
    e.articulatable = k["articulatable"].get<bool>();
    e.link_dependency = string_list(k.value("link_dependency", nlohmann::json::array()),
                                    "'" + e.name + "': link_dependency");
    for (const auto& t : string_list(k.value("joint_type", nlohmann::json::array()),
                                     "'" + e.name + "': joint_type")) {
      e.joint_types.push_back(parse_motion_type(t));
    }
  } else if (!owner.empty()) {
    e.link_dependency = {owner};
    e.joint_types = {MotionType::kFixed};
  } else {
    violation("'" + e.name + "': top-level entry without a kinematic block");
  }
  if (j.contains("affordances")) e.affordances = string_list(j["affordances"], "'" + e.name + "': affordances");
  e.non_recessing = j.value("non_recessing", false);
  if (j.contains("functional")) e.functional = j["functional"];
  const std::string name = e.name;
  out.push_back(std::move(e));
  if (j.contains("parts")) {
    if (!j["parts"].is_array()) violation("'" + name + "': parts must be an array");
    for (const auto& child : j["parts"]) parse_entry(child, name, out);
  }
}

}  // namespace

std::string_view to_string(MotionType type) {
  for (const auto& [t, name] : kMotionNames) {
    if (t == type) return name;
  }
  return "?";
}

MotionType parse_motion_type(std::string_view name) {
  for (const auto& [t, n] : kMotionNames) {
    if (n == name) return t;
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown joint type '" + std::string(name) + "'");
}

int degrees_of_freedom(MotionType type) {
  switch (type) {
    case MotionType::kFixed: return 0;
    case MotionType::kCylindrical:
    case MotionType::kUniversal: return 2;
    default: return 1;
  }
}

bool has_rotation(MotionType type) {
  return type == MotionType::kRevolute || type == MotionType::kContinuous ||
         type == MotionType::kCylindrical || type == MotionType::kUniversal;
}

bool has_translation(MotionType type) {
  return type == MotionType::kPrismatic || type == MotionType::kCylindrical;
}

const TemplateEntry* CategoryTemplate::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<const TemplateEntry*> CategoryTemplate::root_entries() const {
  std::vector<const TemplateEntry*> out;
  for (const auto& e : entries) {
    if (e.articulatable) continue;
    const bool empty = e.link_dependency.empty();
    const bool to_root = std::find(e.link_dependency.begin(), e.link_dependency.end(),
                                   kRootDependency) != e.link_dependency.end();
    if (empty || (to_root && e.parent_entry.empty() && e.link_dependency.size() == 1)) out.push_back(&e);
  }
  return out;
}

bool CategoryTemplate::is_root_label(std::string_view name) const {
  for (const auto* e : root_entries()) {
    if (e->name == name) return true;
  }
  return false;
}

CategoryTemplate load_template_json(const nlohmann::json& doc) {
  if (!doc.is_object()) violation("template must be a JSON object");
  CategoryTemplate t;
  if (!doc.contains("main_category") || !doc["main_category"].is_string()) {
    violation("template without main_category");
  }
  t.main_category = doc["main_category"].get<std::string>();
  t.gloss = doc.value("gloss", std::string());
  if (!doc.contains("content") || !doc["content"].is_array()) violation("template without content[]");
  for (const auto& entry : doc["content"]) parse_entry(entry, "", t.entries);
  if (doc.contains("interior")) {
    const auto& in = doc["interior"];
    if (!in.is_object()) violation("interior must be an object");
    if (in.contains("affordances")) t.interior_affordances = string_list(in["affordances"], "interior.affordances");
    if (in.contains("articulated")) t.interior_articulated = string_list(in["articulated"], "interior.articulated");
  }

  std::set<std::string> names;
  for (const auto& e : t.entries) {
    if (!names.insert(e.name).second) violation("duplicate part name '" + e.name + "'");
  }
  for (const auto& e : t.entries) {
    if (e.articulatable && e.joint_types.empty()) {
      violation("'" + e.name + "' is articulatable but lists no joint_type");
    }
    for (const auto& dep : e.link_dependency) {
      if (dep != kRootDependency && !names.contains(dep)) {
        violation("'" + e.name + "' depends on unknown part '" + dep + "'");
      }
      if (dep == e.name) violation("'" + e.name + "' depends on itself");
    }
  }
  for (const auto& label : t.interior_affordances) {
    if (!names.contains(label)) violation("interior affordance '" + label + "' is not a template part");
  }
  for (const auto& label : t.interior_articulated) {
    if (!names.contains(label)) violation("interior articulated part '" + label + "' is not a template part");
  }
  return t;
}

CategoryTemplate load_template(std::span<const std::uint8_t> bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("template is not valid JSON: ") + e.what());
  }
  return load_template_json(doc);
}

CategoryTemplate load_template_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return load_template(bytes);
}

nlohmann::json template_to_json(const CategoryTemplate& tmpl) {
  nlohmann::json doc;
  doc["main_category"] = tmpl.main_category;
  doc["gloss"] = tmpl.gloss;
  // Re-nest flattened entries under their owners.
  std::function<nlohmann::json(const TemplateEntry&)> emit = [&](const TemplateEntry& e) {
    nlohmann::json j;
    j["name"] = e.name;
    j["gloss"] = e.gloss;
    nlohmann::json types = nlohmann::json::array();
    for (auto t : e.joint_types) types.push_back(std::string(to_string(t)));
    j["kinematic"] = {{"articulatable", e.articulatable},
                      {"link_dependency", e.link_dependency},
                      {"joint_type", types}};
    if (!e.affordances.empty()) j["affordances"] = e.affordances;
    if (e.non_recessing) j["non_recessing"] = true;
    if (!e.functional.is_null()) j["functional"] = e.functional;
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& c : tmpl.entries) {
      if (c.parent_entry == e.name) parts.push_back(emit(c));
    }
    if (!parts.empty()) j["parts"] = parts;
    return j;
  };
  nlohmann::json content = nlohmann::json::array();
  for (const auto& e : tmpl.entries) {
    if (e.parent_entry.empty()) content.push_back(emit(e));
  }
  doc["content"] = content;
  if (!tmpl.interior_affordances.empty() || !tmpl.interior_articulated.empty()) {
    doc["interior"] = {{"affordances", tmpl.interior_affordances},
                       {"articulated", tmpl.interior_articulated}};
  }
  return doc;
}

}  // namespace forge
