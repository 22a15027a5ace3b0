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
#include <string>
#include <vector>

#include "forge/articulation/template.hpp"
#include "forge/mesh/trimesh.hpp"
#include "forge/schema/annotation.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge::testing {

/// Icosphere built by repeated midpoint subdivision of an icosahedron.
TriMesh icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());

/// Appends `src` to `dst` and returns the face indices that were added.
FaceSet add_part(TriMesh& dst, const TriMesh& src);

/// Axis-aligned box given by center and full extents.
TriMesh box_at(const Vec3& center, const Vec3& extents);

Mat3 rotation_about(const Vec3& axis, double radians);

/// Small boxes in short chains with gaps straddling a 1 mm threshold, each box
/// one segment, labels drawn from {0, 1, 2}.
struct ClusterFixture {
  TriMesh mesh;
  std::vector<std::int32_t> label_of_box;
};
ClusterFixture random_cluster_fixture(std::uint64_t seed, int max_boxes = 50);

/// Reference clustering: exhaustive triangle-pair distances, union-find over
/// same-label pairs strictly below the threshold. Returns sorted segment sets.
std::vector<std::vector<std::int32_t>> brute_force_clusters(
    const TriMesh& mesh, const std::vector<FaceSet>& segments,
    const std::vector<std::int32_t>& label_of_segment, double threshold);

/// Parts built directly from face sets; ids follow list order.
PartSet make_part_set(const TriMesh& mesh, const std::vector<std::pair<std::string, FaceSet>>& parts,
                      std::size_t samples = 2048, std::uint64_t seed = 0);

/// Template covering every fixture below: body/frame/housing/panel roots,
/// drawer (prismatic, non-recessing), door (revolute), rotor
/// (revolute or continuous), button and plate (prismatic).
CategoryTemplate fixture_template();

/// Part 0 is the static parent, part 1 the moving child. `origin`/`axis`
/// give the true joint.
struct ArticulatedFixture {
  TriMesh mesh;
  PartSet parts;
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitY();
};

/// Cabinet whose open-front compartment is 0.40 m deep (front plane z =
/// 0.225, floor top y = -0.23, inner walls x = +-0.28, ceiling y = 0.23).
/// The full drawer box fills the depth and rests on the floor; otherwise only
/// the front panel is present.
inline constexpr double kCabinetDepth = 0.40;
ArticulatedFixture cabinet_with_drawer(bool full_drawer = true);

/// 0.8 x 2.0 x 0.04 door on a vertical hinge at its front right edge. Closing
/// is blocked by a wall 25 mm behind it; opening by a stopper at
/// `clearance_degrees`. `hinge_post` adds a post coaxial with the hinge that
/// the door's edge penetrates at every angle.
ArticulatedFixture door_in_frame(double clearance_degrees = 110.0, bool hinge_post = false);

/// Disc on a shaft, rotating about +Z through the origin.
ArticulatedFixture rotor_on_shaft();

/// 2 cm cap sliding along +Y in rails, `travel` above the base plate.
ArticulatedFixture push_button(double travel = 0.005);

/// Plate floating 0.5 m away from a body.
ArticulatedFixture free_plate();

/// Hollow appliance body (part 0, label "body") open toward +Z with an
/// optional closed door (part 1) over the opening. `inner` is the empty
/// interior; walls are 0.05 m thick.
struct ApplianceFixture {
  TriMesh mesh;
  PartSet parts;
  CategoryTemplate tmpl;
  Aabb inner;
};

/// Categories: "refrigerator" (shelf), "wardrobe" (rail), "microwave"
/// (turntable), "dishwasher" (basket), "pantry" (hook, no generator).
/// `extra` labels get a small box each, inside the cavity.
ApplianceFixture appliance(const std::string& category, bool with_door = true,
                           const std::vector<std::string>& extra = {});

/// Annotation for a two-part fixture: part 1 hangs off part 0 by `motion`
/// at the fixture's true origin and axis, with plausible limits per degree of
/// freedom and a physical record on every part.
AnnotationDocument fixture_document(const ArticulatedFixture& fx, MotionType motion);

/// Applies `pose` to the mesh and the true joint, redescribing every part.
void transform_fixture(ArticulatedFixture& fx, const RigidTransform& pose);

}  // namespace forge::testing
