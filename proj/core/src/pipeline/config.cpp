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

#include "forge/pipeline/config.hpp"

#include <charconv>
#include <cstdlib>
#include <set>

#include "forge/error.hpp"
#include "forge/pipeline/files.hpp"

namespace forge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::kConfigInvalid, msg); }

/// Reads known keys out of one JSON object and rejects the rest.
class Section {
 public:
  Section(const json& doc, std::string name) : doc_(doc), name_(std::move(name)) {
    if (!doc_.is_object()) invalid("'" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    used_.insert(key);
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      invalid("'" + name_ + "." + key + "' has the wrong type");
    }
  }

  const json* child(const char* key) {
    used_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [k, v] : doc_.items()) {
      if (!used_.count(k)) invalid("unknown key '" + name_ + "." + k + "'");
    }
  }

 private:
  const json& doc_;
  std::string name_;
  std::set<std::string> used_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void require_dir(const fs::path& p, const char* what) {
  if (p.empty()) invalid(std::string("paths.") + what + " is required");
  if (!fs::is_directory(p)) invalid(std::string("paths.") + what + " is not a directory: " + p.string());
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) invalid(std::string("paths.") + what + " is required");
  if (!fs::is_regular_file(p)) invalid(std::string("paths.") + what + " is not a file: " + p.string());
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc, const fs::path& base_dir) {
  PipelineConfig c;
  Section top(doc, "config");
  if (const json* s = top.child("stages")) {
    Section sec(*s, "stages");
    sec.get("segment", c.stages.segment);
    sec.get("complete", c.stages.complete);
    sec.get("articulate", c.stages.articulate);
    sec.get("physics", c.stages.physics);
    sec.get("export", c.stages.export_outputs);
    sec.finish();
  }
  if (const json* s = top.child("paths")) {
    Section sec(*s, "paths");
    std::string meshes, rasters, templates, materials, exemplars, output;
    sec.get("meshes", meshes);
    sec.get("rasters", rasters);
    sec.get("templates", templates);
    sec.get("materials", materials);
    sec.get("exemplars", exemplars);
    sec.get("output", output);
    sec.finish();
    c.paths = {resolve(base_dir, meshes),    resolve(base_dir, rasters),   resolve(base_dir, templates),
               resolve(base_dir, materials), resolve(base_dir, exemplars), resolve(base_dir, output)};
  }
  top.get("seed", c.seed);
  top.get("objects", c.objects);
  top.get("workers", c.workers);
  if (const json* s = top.child("clustering")) {
    Section sec(*s, "clustering");
    sec.get("connect_threshold", c.clustering.connect_threshold);
    sec.get("samples_per_part", c.clustering.samples_per_part);
    sec.get("gobb_tolerance", c.clustering.gobb_tolerance);
    sec.finish();
  }
  if (const json* s = top.child("sweep")) {
    SweepParams& p = c.articulation.sweep;
    Section sec(*s, "sweep");
    sec.get("angular_step_degrees", p.angular_step_degrees);
    sec.get("linear_step_fraction", p.linear_step_fraction);
    sec.get("ramp_window", p.ramp_window);
    sec.get("threshold_factor", p.threshold_factor);
    sec.get("absolute_floor", p.absolute_floor);
    sec.get("safe_fraction", p.safe_fraction);
    sec.get("collision_epsilon", p.collision_epsilon);
    sec.get("epsilon_fraction", p.epsilon_fraction);
    sec.get("samples_per_part", p.samples_per_part);
    sec.get("retention", p.retention);
    sec.get("max_travel_factor", p.max_travel_factor);
    sec.get("max_angle_degrees", p.max_angle_degrees);
    sec.get("rest_snap_degrees", p.rest_snap_degrees);
    sec.get("rest_snap_fraction", p.rest_snap_fraction);
    sec.finish();
  }
  if (const json* s = top.child("articulation")) {
    Section sec(*s, "articulation");
    sec.get("contact_threshold", c.articulation.contact_threshold);
    sec.get("contact_fraction", c.articulation.contact_fraction);
    sec.get("retention", c.articulation.retention_overrides);
    sec.finish();
  }
  if (const json* s = top.child("completion")) {
    Section sec(*s, "completion");
    sec.get("panel_thickness", c.completion.panel_thickness);
    sec.get("clearance", c.completion.clearance);
    sec.get("grid", c.completion.grid);
    sec.get("percentile", c.completion.percentile);
    sec.get("open_limit", c.completion.open_limit);
    sec.get("complete_fraction", c.completion.complete_fraction);
    sec.finish();
  }
  if (const json* s = top.child("placement")) c.placement = PlacementConfig::from_json(*s);
  if (const json* s = top.child("physics")) {
    Section sec(*s, "physics");
    sec.get("voxel_resolution", c.voxel_resolution);
    sec.finish();
  }
  if (const json* s = top.child("urdf")) {
    Section sec(*s, "urdf");
    sec.get("effort", c.urdf_limits.effort);
    sec.get("velocity", c.urdf_limits.velocity);
    sec.finish();
  }
  top.finish();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& file) {
  json doc;
  try {
    doc = json::parse(read_text_file(file));
  } catch (const json::exception& e) {
    invalid("cannot parse " + file.string() + ": " + e.what());
  } catch (const Error& e) {
    invalid(e.what());
  }
  PipelineConfig c = from_json(doc, file.parent_path());
  c.apply_env_overrides();
  return c;
}

void PipelineConfig::apply_env_overrides() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    invalid(std::string(kSeedEnv) + " is not an unsigned integer: " + std::string(text));
  }
  seed = value;
}

json PipelineConfig::to_json() const {
  const SweepParams& p = articulation.sweep;
  json retention = json::object();
  for (const auto& [k, v] : articulation.retention_overrides) retention[k] = v;
  return {
      {"stages",
       {{"segment", stages.segment},
        {"complete", stages.complete},
        {"articulate", stages.articulate},
        {"physics", stages.physics},
        {"export", stages.export_outputs}}},
      {"seed", seed},
      {"clustering",
       {{"connect_threshold", clustering.connect_threshold},
        {"samples_per_part", clustering.samples_per_part},
        {"gobb_tolerance", clustering.gobb_tolerance}}},
      {"sweep",
       {{"angular_step_degrees", p.angular_step_degrees},
        {"linear_step_fraction", p.linear_step_fraction},
        {"ramp_window", p.ramp_window},
        {"threshold_factor", p.threshold_factor},
        {"absolute_floor", p.absolute_floor},
        {"safe_fraction", p.safe_fraction},
        {"collision_epsilon", p.collision_epsilon},
        {"epsilon_fraction", p.epsilon_fraction},
        {"samples_per_part", p.samples_per_part},
        {"retention", p.retention},
        {"max_travel_factor", p.max_travel_factor},
        {"max_angle_degrees", p.max_angle_degrees},
        {"rest_snap_degrees", p.rest_snap_degrees},
        {"rest_snap_fraction", p.rest_snap_fraction}}},
      {"articulation",
       {{"contact_threshold", articulation.contact_threshold},
        {"contact_fraction", articulation.contact_fraction},
        {"retention", retention}}},
      {"completion",
       {{"panel_thickness", completion.panel_thickness},
        {"clearance", completion.clearance},
        {"grid", completion.grid},
        {"percentile", completion.percentile},
        {"open_limit", completion.open_limit},
        {"complete_fraction", completion.complete_fraction}}},
      {"placement", placement.to_json()},
      {"physics", {{"voxel_resolution", voxel_resolution}}},
      {"urdf", {{"effort", urdf_limits.effort}, {"velocity", urdf_limits.velocity}}},
  };
}

void PipelineConfig::validate() const {
  try {
    clustering.validate();
    articulation.sweep.validate();
    completion.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
  if (articulation.contact_threshold < 0.0 || !(articulation.contact_fraction > 0.0)) {
    invalid("articulation contact band must be positive");
  }
  for (const auto& [label, r] : articulation.retention_overrides) {
    if (!(r > 0.0 && r <= 1.0)) invalid("retention for '" + label + "' must be in (0, 1]");
  }
  if (voxel_resolution < 4) invalid("physics.voxel_resolution must be at least 4");
  if (!(urdf_limits.effort > 0.0) || !(urdf_limits.velocity > 0.0)) invalid("urdf limits must be positive");

  if (paths.output.empty()) invalid("paths.output is required");
  if (stages.segment) {
    require_dir(paths.meshes, "meshes");
    require_dir(paths.rasters, "rasters");
  }
  if (stages.complete || stages.articulate || stages.export_outputs || stages.segment) {
    require_dir(paths.templates, "templates");
  }
  if (stages.physics) require_file(paths.materials, "materials");
  if (!paths.exemplars.empty()) require_dir(paths.exemplars, "exemplars");
}

ObjectMeta ObjectMeta::from_json(const json& doc, const std::string& id) {
  ObjectMeta m;
  m.id = id;
  try {
    Section top(doc, "object");
    top.get("dataset", m.dataset);
    if (const json* cat = top.child("category")) {
      Section sec(*cat, "category");
      sec.get("super", m.super_category);
      sec.get("main", m.main_category);
      sec.get("sub", m.sub_category);
      sec.finish();
    }
    if (const json* size = top.child("size")) m.size = SizeSpec::from_json(*size);
    top.finish();
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaViolation, "object metadata for '" + id + "': " + e.what());
  }
  if (m.main_category.empty()) {
    throw Error(ErrorCode::kSchemaViolation, "object metadata for '" + id + "' lacks category.main");
  }
  return m;
}

json ObjectMeta::to_json() const {
  json doc = {{"dataset", dataset},
              {"category", {{"super", super_category}, {"main", main_category}, {"sub", sub_category}}}};
  if (size) doc["size"] = size->to_json();
  return doc;
}

}  // namespace forge
