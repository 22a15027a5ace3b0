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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/articulation/joint.hpp"
#include "forge/articulation/template.hpp"
#include "forge/interior/delta.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

/// Rays cast behind a translational part's front panel.
struct CavityProbe {
  /// Outward pull direction of the part (unit).
  Vec3 outward = Vec3::UnitZ();
  /// In-plane axes: `up` is the one closest to world +Y.
  Vec3 up = Vec3::UnitY();
  Vec3 side = Vec3::UnitX();
  /// Offset of the panel's back face along `outward`.
  double panel_plane = 0.0;
  std::vector<Vec3> origins;
  /// Hit distance per ray; nullopt when the ray escapes.
  std::vector<std::optional<double>> hits;
  /// Fraction of rays that escaped or hit at the panel itself.
  double open_fraction = 0.0;
  /// Robust (10th percentile) hit distance; zero when no cavity.
  double depth = 0.0;
  /// Cavity cross-section along `side` and `up`, as offsets.
  std::array<double, 2> side_range{0.0, 0.0};
  std::array<double, 2> up_range{0.0, 0.0};
};

struct CompletionParams {
  double panel_thickness = 0.015;
  double clearance = 0.003;
  /// Rays per side of the probe grid.
  int grid = 10;
  double percentile = 0.10;
  /// NoCavity when at least this fraction of rays is open.
  double open_limit = 0.8;
  /// AlreadyComplete when the part already reaches this fraction of the depth.
  double complete_fraction = 0.5;

  void validate() const;
};

/// Probes the cavity behind `part_id`'s front panel along the joint axis.
/// Does not throw for missing cavities; check `depth` and `open_fraction`.
CavityProbe probe_cavity(const TriMesh& mesh, const PartSet& parts, std::int32_t part_id,
                         const JointProposal& joint, const CompletionParams& params);

/// Side, bottom, back and inner front panels filling the probed cavity,
/// inset by the clearance and owned by the part. Throws NoCavity,
/// AlreadyComplete, InvalidArgument (no prismatic DoF).
GeometryDelta complete_translational_part(const TriMesh& mesh, const PartSet& parts, std::int32_t part_id,
                                          const JointProposal& joint,
                                          const CompletionParams& params = {});

/// Axis-aligned hollow interior of the base parts, probed from their center.
struct BodyCavity {
  Aabb bounds;
  /// Direction index (0..5 = +x,-x,+y,-y,+z,-z) of the opening or door side;
  /// -1 when closed on every horizontal side by the base itself.
  int front = -1;
  Vec3 floor_center() const { return Vec3(bounds.center().x(), bounds.min.y(), bounds.center().z()); }
};

/// Throws NoCavity when the probe starts inside solid material or every
/// ray escapes.
BodyCavity probe_body_cavity(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl);

struct PlacementConfig {
  double shelf_spacing = 0.35;
  /// Shelves stop this far below the cavity top.
  double shelf_top_margin = 0.10;
  double panel_thickness = 0.015;
  double clearance = 0.003;
  double rail_drop = 0.05;
  double rail_radius = 0.0125;
  /// Per-category overrides of the fields above, keyed by field name.
  std::map<std::string, nlohmann::json> category_overrides;

  /// This config with the overrides for `category` applied.
  PlacementConfig for_category(const std::string& category) const;
  static PlacementConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// Shelves, rails and dividers for interior affordance labels the template
/// expects but the part set lacks. Each becomes a new part.
GeometryDelta insert_affordance_interiors(const TriMesh& mesh, const PartSet& parts, const CategoryTemplate& tmpl,
                                          const PlacementConfig& config = {});

/// Exemplar meshes laid out as `<root>/<category>/<label>/<n>.glb`.
class ExemplarLibrary {
 public:
  ExemplarLibrary() = default;
  explicit ExemplarLibrary(std::filesystem::path root) : root_(std::move(root)) {}

  /// Candidate files sorted by name; empty when missing.
  std::vector<std::filesystem::path> candidates(const std::string& category, const std::string& label) const;

 private:
  std::filesystem::path root_;
};

struct ArticulatedInsertion {
  GeometryDelta delta;
  /// One joint per new part, parented to the root base part.
  std::vector<JointProposal> joints;
};

/// Inserts missing interior articulated parts from the library, or the
/// parametric turntable/basket when the library has none. Labels with
/// neither are flagged "no_generator:<label>". Throws NoCavity.
ArticulatedInsertion insert_missing_articulated(const TriMesh& mesh, const PartSet& parts,
                                                const CategoryTemplate& tmpl, const ExemplarLibrary& library,
                                                std::uint64_t seed, const PlacementConfig& config = {});

}  // namespace forge
