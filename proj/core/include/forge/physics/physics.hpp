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
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/mesh/trimesh.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

/// Target size along one world axis: a known dimension or a seeded draw from
/// [min, max], in meters.
struct SizeSpec {
  int axis = 1;
  std::optional<double> known;
  double min = 0.0;
  double max = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument.
  void validate() const;
  /// {"axis": "y"|0..2, "meters": x} or {"axis", "min", "max"}; optional "seed".
  static SizeSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  /// The dimension this spec asks for (draws for ranges).
  double target() const;
};

struct MetricScale {
  double factor = 1.0;
  double target = 0.0;
};

/// Scales `mesh` uniformly about the origin so the extent along `spec.axis`
/// equals the target in meters. Positions are in meters afterwards, so
/// `unit_scale` becomes 1. Throws ZeroExtent.
MetricScale apply_metric_scale(TriMesh& mesh, const SizeSpec& spec);

enum class Solidity { kSolid, kHollow };
enum class VolumeMethod { kClosedForm, kVoxelFallback, kShellOffset };

std::string_view to_string(Solidity s);
std::string_view to_string(VolumeMethod m);
/// Throws SchemaViolation.
Solidity parse_solidity(std::string_view name);
VolumeMethod parse_volume_method(std::string_view name);

struct VolumeEstimate {
  /// Cubic meters.
  double volume = 0.0;
  VolumeMethod method = VolumeMethod::kClosedForm;
};

/// Signed-tetrahedron volume of a closed selection (absolute value, model
/// units cubed).
double closed_volume(const TriMesh& mesh, std::span<const std::int32_t> faces);

/// Voxel count of the region not reachable from outside, surface voxels
/// weighted 1/2. Voxel size is min(extent) / resolution, floored at
/// max(extent) / (4 * resolution). Model units cubed.
double voxel_volume(const TriMesh& mesh, std::span<const std::int32_t> faces, int resolution = 64);

/// Inward-offset shell: sum over faces of area * min(wall, half the free
/// distance behind the face), capped by the enclosed volume when closed.
/// `wall` in model units.
double shell_volume(const TriMesh& mesh, std::span<const std::int32_t> faces, double wall);

/// 2% of the smallest descriptor-box extent, clamped to [2 mm, 2 cm].
double default_wall_thickness(const PartInstance& part, double unit_scale = 1.0);

/// Solid parts: closed form when closed, voxels otherwise. Hollow parts:
/// shell offset. `wall_thickness` in meters. Throws DegeneratePart.
VolumeEstimate estimate_volume(const TriMesh& mesh, const PartInstance& part, Solidity solidity,
                               double wall_thickness, int voxel_resolution = 64);

struct DensityRange {
  double min = 0.0;
  double max = 0.0;
};

/// Operator-supplied materials, densities (kg/m^3) and per-label defaults.
struct MaterialTable {
  std::map<std::string, DensityRange> materials;
  /// category -> part label -> material.
  std::map<std::string, std::map<std::string, std::string>> parts;
  std::map<std::string, std::string> category_defaults;
  std::optional<std::string> global_default;
  /// By part label.
  std::map<std::string, Solidity> solidity;
  Solidity default_solidity = Solidity::kSolid;
  /// Hollow wall thickness by part label, meters.
  std::map<std::string, double> wall_thickness;

  /// Throws ConfigInvalid.
  void validate() const;
  static MaterialTable from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  Solidity solidity_for(const std::string& label) const;
};

struct MaterialAssignment {
  std::string material;
  DensityRange density;
  /// "exact", "category_default" or "global_default".
  std::string resolution;
};

/// Exact (category, label) entry, else the category default, else the
/// global default. Throws Unresolvable.
MaterialAssignment assign_material(const std::string& category, const std::string& label,
                                   const MaterialTable& table);

struct MassSample {
  double density = 0.0;
  double mass = 0.0;
};

/// Density uniform in [min, max] from `seed`; mass = density * volume.
/// Throws InvalidArgument for non-positive volume or an invalid range.
MassSample compute_mass(double volume, const DensityRange& range, std::uint64_t seed);

struct PhysicalRecord {
  std::int32_t part_id = -1;
  std::string material;
  std::string resolution;
  double density = 0.0;
  double volume = 0.0;
  double mass = 0.0;
  Solidity solidity = Solidity::kSolid;
  VolumeMethod method = VolumeMethod::kClosedForm;
  double wall_thickness = 0.0;
  /// Density draw seed; kept so a material change re-derives the same draw.
  std::uint64_t seed = 0;
};

/// Records for every part, in part order; parts run in parallel. Part seeds
/// are derive_seed(seed, part id).
std::vector<PhysicalRecord> estimate_physics(const TriMesh& mesh, const PartSet& parts,
                                             const std::string& category, const MaterialTable& table,
                                             std::uint64_t seed, int voxel_resolution = 64);

/// Switches `record` to `material` and recomputes density and mass from its
/// stored seed. Throws Unresolvable for unknown materials.
void reassign_material(PhysicalRecord& record, const std::string& material, const MaterialTable& table);

}  // namespace forge
