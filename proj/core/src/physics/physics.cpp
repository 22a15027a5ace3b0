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
#include "forge/physics/physics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "forge/error.hpp"
#include "forge/mesh/bvh.hpp"
#include "forge/mesh/parallel.hpp"
#include "forge/mesh/rng.hpp"

namespace forge {
namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfigInvalid, msg); }

int parse_axis(const nlohmann::json& v) {
  if (v.is_number_integer()) {
    const int a = v.get<int>();
    if (a >= 0 && a <= 2) return a;
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "x") return 0;
    if (s == "y") return 1;
    if (s == "z") return 2;
  }
  throw Error(ErrorCode::kInvalidArgument, "size axis must be x, y, z or 0..2");
}

/// Triangle against the cube of half side `h` centered at the origin
/// (separating axis test, boundary contact counts as overlap).
bool triangle_meets_cube(const std::array<Vec3, 3>& v, double h) {
  const double slack = 1e-12 * std::max(1.0, h);
  for (int k = 0; k < 3; ++k) {
    const double lo = std::min({v[0][k], v[1][k], v[2][k]});
    const double hi = std::max({v[0][k], v[1][k], v[2][k]});
    if (lo > h + slack || hi < -h - slack) return false;
  }
  const Vec3 n = (v[1] - v[0]).cross(v[2] - v[1]);
  if (std::abs(n.dot(v[0])) > h * n.cwiseAbs().sum() + slack) return false;
  const std::array<Vec3, 3> edges = {v[1] - v[0], v[2] - v[1], v[0] - v[2]};
  for (const Vec3& e : edges) {
    for (int k = 0; k < 3; ++k) {
      const Vec3 a = e.cross(Vec3::Unit(k));
      if (a.squaredNorm() < 1e-30) continue;
      const double p0 = a.dot(v[0]), p1 = a.dot(v[1]), p2 = a.dot(v[2]);
      const double r = h * a.cwiseAbs().sum();
      if (std::min({p0, p1, p2}) > r + slack || std::max({p0, p1, p2}) < -r - slack) return false;
    }
  }
  return true;
}

}  // namespace

void SizeSpec::validate() const {
  if (axis < 0 || axis > 2) throw Error(ErrorCode::kInvalidArgument, "size axis out of range");
  if (known) {
    if (!(*known > 0.0)) throw Error(ErrorCode::kInvalidArgument, "known dimension must be positive");
  } else if (!(min > 0.0) || !(min <= max)) {
    throw Error(ErrorCode::kInvalidArgument, "size range needs 0 < min <= max");
  }
}

SizeSpec SizeSpec::from_json(const nlohmann::json& doc) {
  SizeSpec s;
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidArgument, "size spec must be an object");
  try {
    if (doc.contains("axis")) s.axis = parse_axis(doc["axis"]);
    if (doc.contains("meters")) {
      s.known = doc["meters"].get<double>();
    } else {
      s.min = doc.at("min").get<double>();
      s.max = doc.at("max").get<double>();
    }
    s.seed = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("size spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::json SizeSpec::to_json() const {
  nlohmann::json doc = {{"axis", std::string(1, "xyz"[axis])}, {"seed", seed}};
  if (known) {
    doc["meters"] = *known;
  } else {
    doc["min"] = min;
    doc["max"] = max;
  }
  return doc;
}

double SizeSpec::target() const {
  validate();
  if (known) return *known;
  Rng rng(seed);
  return rng.uniform(min, max);
}

MetricScale apply_metric_scale(TriMesh& mesh, const SizeSpec& spec) {
  const double target = spec.target();
  const double extent = mesh.bounds().extent()[spec.axis];
  if (mesh.empty() || !(extent > 0.0)) {
    throw Error(ErrorCode::kZeroExtent, std::string("mesh has no extent along ") + "xyz"[spec.axis]);
  }
  MetricScale out{target / extent, target};
  for (Vec3& v : mesh.vertices) v *= out.factor;
  mesh.unit_scale = 1.0;
  return out;
}

std::string_view to_string(Solidity s) { return s == Solidity::kSolid ? "solid" : "hollow"; }

std::string_view to_string(VolumeMethod m) {
  switch (m) {
    case VolumeMethod::kClosedForm:
      return "closed_form";
    case VolumeMethod::kVoxelFallback:
      return "voxel_fallback";
    case VolumeMethod::kShellOffset:
      return "shell_offset";
  }
  return "closed_form";
}

Solidity parse_solidity(std::string_view name) {
  if (name == "solid") return Solidity::kSolid;
  if (name == "hollow") return Solidity::kHollow;
  throw Error(ErrorCode::kSchemaViolation, "unknown solidity '" + std::string(name) + "'");
}

VolumeMethod parse_volume_method(std::string_view name) {
  for (auto m : {VolumeMethod::kClosedForm, VolumeMethod::kVoxelFallback, VolumeMethod::kShellOffset}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown volume method '" + std::string(name) + "'");
}

double closed_volume(const TriMesh& mesh, std::span<const std::int32_t> faces) {
  // Reference point at the selection center keeps the sum well conditioned.
  const Vec3 ref = mesh.bounds(faces).center();
  double six = 0.0;
  for (auto f : faces) {
    const auto t = mesh.triangle(f);
    six += (t[0] - ref).dot((t[1] - ref).cross(t[2] - ref));
  }
  return std::abs(six) / 6.0;
}

double voxel_volume(const TriMesh& mesh, std::span<const std::int32_t> faces, int resolution) {
  if (resolution < 1) throw Error(ErrorCode::kInvalidArgument, "voxel resolution must be positive");
  const Aabb box = mesh.bounds(faces);
  const Vec3 ext = box.extent();
  const double h = std::max(ext.minCoeff() / resolution, ext.maxCoeff() / (4.0 * resolution));
  if (faces.empty() || !(h > 0.0)) throw Error(ErrorCode::kDegeneratePart, "selection has no extent to voxelize");
  std::array<int, 3> n;
  Vec3 origin;
  for (int k = 0; k < 3; ++k) {
    n[k] = static_cast<int>(std::ceil(ext[k] / h - 1e-9)) + 4;
    origin[k] = box.center()[k] - 0.5 * n[k] * h;
  }
  const auto index = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * n[1] + j) * n[0] + i;
  };
  const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  // 0 = free, 1 = surface, 2 = outside
  std::vector<std::uint8_t> cell(total, 0);
  for (auto f : faces) {
    const auto tri = mesh.triangle(f);
    std::array<int, 3> lo, hi;
    for (int k = 0; k < 3; ++k) {
      const double a = std::min({tri[0][k], tri[1][k], tri[2][k]});
      const double b = std::max({tri[0][k], tri[1][k], tri[2][k]});
      lo[k] = std::clamp(static_cast<int>(std::floor((a - origin[k]) / h)) - 1, 0, n[k] - 1);
      hi[k] = std::clamp(static_cast<int>(std::floor((b - origin[k]) / h)) + 1, 0, n[k] - 1);
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          std::uint8_t& c = cell[index(i, j, k)];
          if (c) continue;
          const Vec3 center = origin + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
          const std::array<Vec3, 3> local = {tri[0] - center, tri[1] - center, tri[2] - center};
          if (triangle_meets_cube(local, 0.5 * h)) c = 1;
        }
      }
    }
  }
  std::deque<std::array<int, 3>> queue;
  auto visit = [&](int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i >= n[0] || j >= n[1] || k >= n[2]) return;
    std::uint8_t& c = cell[index(i, j, k)];
    if (c != 0) return;
    c = 2;
    queue.push_back({i, j, k});
  };
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        if (i == 0 || j == 0 || k == 0 || i == n[0] - 1 || j == n[1] - 1 || k == n[2] - 1) visit(i, j, k);
      }
    }
  }
  while (!queue.empty()) {
    const auto [i, j, k] = queue.front();
    queue.pop_front();
    visit(i + 1, j, k);
    visit(i - 1, j, k);
    visit(i, j + 1, k);
    visit(i, j - 1, k);
    visit(i, j, k + 1);
    visit(i, j, k - 1);
  }
  double count = 0.0;
  for (auto c : cell) {
    if (c == 0) count += 1.0;
    if (c == 1) count += 0.5;
  }
  return count * h * h * h;
}

double shell_volume(const TriMesh& mesh, std::span<const std::int32_t> faces, double wall) {
  if (!(wall > 0.0)) throw Error(ErrorCode::kInvalidArgument, "wall thickness must be positive");
  const TriangleBvh bvh(mesh, faces);
  const double nudge = 1e-9 * std::max(1.0, mesh.bounds(faces).diagonal());
  std::vector<double> slab(faces.size(), 0.0);
  parallel_for(std::size_t{0}, faces.size(), [&](std::size_t i) {
    const auto f = faces[i];
    const double area = mesh.face_area(f);
    if (area <= 0.0) return;
    const Vec3 n = mesh.face_normal(f);
    double offset = wall;
    // Opposite walls each get half of the gap between them.
    if (auto hit = bvh.first_hit(mesh.face_centroid(f) - nudge * n, -n)) offset = std::min(offset, 0.5 * (hit->t + nudge));
    slab[i] = area * offset;
  });
  double sum = 0.0;
  for (double s : slab) sum += s;
  if (is_closed(mesh, faces)) sum = std::min(sum, closed_volume(mesh, faces));
  return sum;
}

double default_wall_thickness(const PartInstance& part, double unit_scale) {
  return std::clamp(0.02 * part.box.extents.minCoeff() * unit_scale, 0.002, 0.02);
}

VolumeEstimate estimate_volume(const TriMesh& mesh, const PartInstance& part, Solidity solidity,
                               double wall_thickness, int voxel_resolution) {
  const std::string who = "part " + std::to_string(part.id);
  if (part.faces.empty() || total_area(mesh, part.faces) <= 0.0) {
    throw Error(ErrorCode::kDegeneratePart, who + " has zero surface area");
  }
  const double s = mesh.unit_scale;
  const double cube = s * s * s;
  VolumeEstimate out;
  if (solidity == Solidity::kHollow) {
    out.method = VolumeMethod::kShellOffset;
    out.volume = shell_volume(mesh, part.faces, wall_thickness / s) * cube;
  } else if (is_closed(mesh, part.faces) && closed_volume(mesh, part.faces) > 0.0) {
    out.method = VolumeMethod::kClosedForm;
    out.volume = closed_volume(mesh, part.faces) * cube;
  } else {
    out.method = VolumeMethod::kVoxelFallback;
    out.volume = voxel_volume(mesh, part.faces, voxel_resolution) * cube;
  }
  if (!(out.volume > 0.0)) throw Error(ErrorCode::kDegeneratePart, who + " encloses no volume");
  return out;
}

void MaterialTable::validate() const {
  for (const auto& [name, r] : materials) {
    if (!(r.min > 0.0) || !(r.min <= r.max)) config_error("material '" + name + "' needs 0 < min <= max");
  }
  auto known = [&](const std::string& m, const std::string& where) {
    if (!materials.contains(m)) config_error(where + " names unknown material '" + m + "'");
  };
  for (const auto& [cat, labels] : parts) {
    for (const auto& [label, m] : labels) known(m, cat + "/" + label);
  }
  for (const auto& [cat, m] : category_defaults) known(m, "default for " + cat);
  if (global_default) known(*global_default, "global default");
  for (const auto& [label, t] : wall_thickness) {
    if (!(t > 0.0)) config_error("wall thickness for '" + label + "' must be positive");
  }
}

MaterialTable MaterialTable::from_json(const nlohmann::json& doc) {
  MaterialTable t;
  if (!doc.is_object()) config_error("material table must be an object");
  const auto section = [&](const char* key) { return doc.value(key, nlohmann::json::object()); };
  try {
    const nlohmann::json materials = section("materials"), parts = section("parts"),
                         defaults = section("category_defaults"), solidity = section("solidity"),
                         walls = section("wall_thickness");
    for (const auto& [name, r] : materials.items()) {
      t.materials[name] = {r.at("min").get<double>(), r.at("max").get<double>()};
    }
    for (const auto& [cat, labels] : parts.items()) {
      for (const auto& [label, m] : labels.items()) t.parts[cat][label] = m.get<std::string>();
    }
    for (const auto& [cat, m] : defaults.items()) {
      t.category_defaults[cat] = m.get<std::string>();
    }
    if (doc.contains("default") && !doc["default"].is_null()) t.global_default = doc["default"].get<std::string>();
    for (const auto& [label, s] : solidity.items()) {
      t.solidity[label] = parse_solidity(s.get<std::string>());
    }
    if (doc.contains("default_solidity")) t.default_solidity = parse_solidity(doc["default_solidity"].get<std::string>());
    for (const auto& [label, w] : walls.items()) {
      t.wall_thickness[label] = w.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("material table: ") + e.what());
  } catch (const Error& e) {
    config_error(std::string("material table: ") + e.what());
  }
  t.validate();
  return t;
}

nlohmann::json MaterialTable::to_json() const {
  nlohmann::json doc;
  doc["materials"] = nlohmann::json::object();
  for (const auto& [name, r] : materials) doc["materials"][name] = {{"min", r.min}, {"max", r.max}};
  doc["parts"] = parts;
  doc["category_defaults"] = category_defaults;
  doc["default"] = global_default ? nlohmann::json(*global_default) : nlohmann::json(nullptr);
  doc["solidity"] = nlohmann::json::object();
  for (const auto& [label, s] : solidity) doc["solidity"][label] = to_string(s);
  doc["default_solidity"] = to_string(default_solidity);
  doc["wall_thickness"] = wall_thickness;
  return doc;
}

Solidity MaterialTable::solidity_for(const std::string& label) const {
  auto it = solidity.find(label);
  return it == solidity.end() ? default_solidity : it->second;
}

MaterialAssignment assign_material(const std::string& category, const std::string& label,
                                   const MaterialTable& table) {
  auto make = [&](const std::string& m, const char* how) {
    auto it = table.materials.find(m);
    if (it == table.materials.end()) {
      throw Error(ErrorCode::kUnresolvable, "material '" + m + "' has no density range");
    }
    return MaterialAssignment{m, it->second, how};
  };
  if (auto c = table.parts.find(category); c != table.parts.end()) {
    if (auto l = c->second.find(label); l != c->second.end()) return make(l->second, "exact");
  }
  if (auto d = table.category_defaults.find(category); d != table.category_defaults.end()) {
    return make(d->second, "category_default");
  }
  if (table.global_default) return make(*table.global_default, "global_default");
  throw Error(ErrorCode::kUnresolvable, "no material for " + category + "/" + label);
}

MassSample compute_mass(double volume, const DensityRange& range, std::uint64_t seed) {
  if (!(volume > 0.0)) throw Error(ErrorCode::kInvalidArgument, "volume must be positive");
  if (!(range.min > 0.0) || !(range.min <= range.max)) {
    throw Error(ErrorCode::kInvalidArgument, "density range needs 0 < min <= max");
  }
  Rng rng(seed);
  const double density = range.min == range.max ? range.min : rng.uniform(range.min, range.max);
  return {density, density * volume};
}

std::vector<PhysicalRecord> estimate_physics(const TriMesh& mesh, const PartSet& parts,
                                             const std::string& category, const MaterialTable& table,
                                             std::uint64_t seed, int voxel_resolution) {
  std::vector<PhysicalRecord> out(parts.parts.size());
  parallel_for(std::size_t{0}, parts.parts.size(), [&](std::size_t i) {
    const PartInstance& part = parts.parts[i];
    PhysicalRecord& r = out[i];
    r.part_id = part.id;
    r.solidity = table.solidity_for(part.label);
    auto wt = table.wall_thickness.find(part.label);
    r.wall_thickness = wt != table.wall_thickness.end() ? wt->second : default_wall_thickness(part, mesh.unit_scale);
    const VolumeEstimate v = estimate_volume(mesh, part, r.solidity, r.wall_thickness, voxel_resolution);
    r.volume = v.volume;
    r.method = v.method;
    const MaterialAssignment m = assign_material(category, part.label, table);
    r.material = m.material;
    r.resolution = m.resolution;
    r.seed = derive_seed(seed, static_cast<std::uint64_t>(part.id));
    const MassSample s = compute_mass(r.volume, m.density, r.seed);
    r.density = s.density;
    r.mass = s.mass;
  });
  return out;
}

void reassign_material(PhysicalRecord& record, const std::string& material, const MaterialTable& table) {
  auto it = table.materials.find(material);
  if (it == table.materials.end()) throw Error(ErrorCode::kUnresolvable, "unknown material '" + material + "'");
  const MassSample s = compute_mass(record.volume, it->second, record.seed);
  record.material = material;
  record.resolution = "manual";
  record.density = s.density;
  record.mass = s.mass;
}

}  // namespace forge
