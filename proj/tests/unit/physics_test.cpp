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
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "forge/error.hpp"
#include "forge/mesh/rng.hpp"
#include "forge/physics/physics.hpp"

namespace forge {
namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: nothing thrown
}

PartInstance whole(const TriMesh& mesh, const std::string& label = "body") {
  return testing::make_part_set(mesh, {{label, all_faces(mesh)}}).parts.front();
}

TriMesh scaled(TriMesh mesh, double s) {
  for (Vec3& v : mesh.vertices) v *= s;
  return mesh;
}

TriMesh open_box() {
  TriMesh box = make_box(Vec3::Zero(), Vec3::Ones());
  // Drop the two triangles of the +Y face.
  TriMesh out;
  out.vertices = box.vertices;
  for (std::int32_t f = 0; f < static_cast<std::int32_t>(box.face_count()); ++f) {
    if (box.face_normal(f).y() < 0.5) out.faces.push_back(box.faces[static_cast<std::size_t>(f)]);
  }
  return out;
}

TriMesh unit_panel() {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}};
  m.faces = {{0, 2, 1}, {0, 3, 2}};
  return m;
}

// ------------------------------------------------------------- metric scale

TEST(MetricScale, KnownDimension) {
  TriMesh m = make_box(Vec3::Zero(), Vec3(0.4, 1.5, 0.3));
  SizeSpec spec;
  spec.known = 0.75;
  const MetricScale s = apply_metric_scale(m, spec);
  EXPECT_DOUBLE_EQ(s.factor, 0.5);
  EXPECT_NEAR(m.bounds().extent().y(), 0.75, 1e-15);
  EXPECT_DOUBLE_EQ(m.unit_scale, 1.0);
}

TEST(MetricScale, SeededRangeIsReproducible) {
  const TriMesh base = make_box(Vec3::Zero(), Vec3(2.0, 3.0, 1.0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SizeSpec spec;
    spec.min = 0.7;
    spec.max = 0.9;
    spec.seed = seed;
    TriMesh a = base, b = base;
    apply_metric_scale(a, spec);
    apply_metric_scale(b, spec);
    const double h = a.bounds().extent().y();
    EXPECT_GE(h, 0.7 - 1e-12);
    EXPECT_LE(h, 0.9 + 1e-12);
    EXPECT_EQ(a.vertices, b.vertices);
  }
  SizeSpec fixed;
  fixed.min = fixed.max = 0.8;
  TriMesh m = base;
  apply_metric_scale(m, fixed);
  EXPECT_NEAR(m.bounds().extent().y(), 0.8, 1e-15);
}

TEST(MetricScale, ErrorsAndJson) {
  TriMesh flat = unit_panel();
  SizeSpec spec;
  spec.known = 1.0;
  EXPECT_EQ(code_of([&] { apply_metric_scale(flat, spec); }), ErrorCode::kZeroExtent);
  spec.axis = 0;
  EXPECT_NO_THROW(apply_metric_scale(flat, spec));
  const SizeSpec parsed = SizeSpec::from_json(nlohmann::json::parse(R"({"axis": "z", "min": 1, "max": 2, "seed": 3})"));
  EXPECT_EQ(parsed.axis, 2);
  EXPECT_EQ(parsed.seed, 3u);
  EXPECT_EQ(SizeSpec::from_json(parsed.to_json()).to_json(), parsed.to_json());
  EXPECT_EQ(code_of([] { SizeSpec::from_json(nlohmann::json::parse(R"({"min": 2, "max": 1})")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { SizeSpec::from_json(nlohmann::json::parse(R"({"meters": 0})")); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { SizeSpec::from_json(nlohmann::json::parse(R"({"axis": "w", "meters": 1})")); }),
            ErrorCode::kInvalidArgument);
}

// ----------------------------------------------------------------- volume

TEST(Volume, ClosedUnitCube) {
  const TriMesh cube = make_box(Vec3::Zero(), Vec3::Ones());
  const VolumeEstimate v = estimate_volume(cube, whole(cube), Solidity::kSolid, 0.01);
  EXPECT_EQ(v.method, VolumeMethod::kClosedForm);
  EXPECT_NEAR(v.volume, 1.0, 1e-9);
}

TEST(Volume, IcosphereNearAnalyticSphere) {
  const TriMesh ball = testing::icosphere(0.5, 3);
  const VolumeEstimate v = estimate_volume(ball, whole(ball), Solidity::kSolid, 0.01);
  EXPECT_EQ(v.method, VolumeMethod::kClosedForm);
  const double sphere = 4.0 / 3.0 * std::numbers::pi * 0.125;
  EXPECT_NEAR(v.volume, sphere, 0.02 * sphere);
  EXPECT_LT(v.volume, sphere);  // inscribed polyhedron
}

TEST(Volume, HollowPanelIsAreaTimesThickness) {
  const TriMesh panel = unit_panel();
  const VolumeEstimate v = estimate_volume(panel, whole(panel), Solidity::kHollow, 0.01);
  EXPECT_EQ(v.method, VolumeMethod::kShellOffset);
  EXPECT_NEAR(v.volume, 0.01, 0.05 * 0.01);
}

TEST(Volume, OpenSolidFallsBackToVoxels) {
  const TriMesh box = open_box();
  const VolumeEstimate v = estimate_volume(box, whole(box), Solidity::kSolid, 0.01);
  EXPECT_EQ(v.method, VolumeMethod::kVoxelFallback);
  EXPECT_GT(v.volume, 0.0);
}

TEST(Volume, VoxelsAgreeWithClosedForm) {
  Rng rng(5);
  std::vector<TriMesh> shapes = {make_box(Vec3::Zero(), Vec3::Ones()), testing::icosphere(0.5, 3),
                                 make_box(Vec3(-0.2, 0.0, 0.1), Vec3(0.3, 0.2, 0.6))};
  Mat3 axes = testing::rotation_about(Vec3(1, 2, 3).normalized(), 0.7);
  shapes.push_back(make_oriented_box(Vec3(0.1, 0.2, 0.3), axes, Vec3(0.5, 0.3, 0.2)));
  for (const auto& m : shapes) {
    const FaceSet faces = all_faces(m);
    const double exact = closed_volume(m, faces);
    EXPECT_NEAR(voxel_volume(m, faces, 64), exact, 0.03 * exact);
  }
}

TEST(Volume, ScaleCubesVolume) {
  Rng rng(9);
  const std::vector<TriMesh> shapes = {testing::icosphere(0.5, 2), open_box(),
                                       make_box(Vec3::Zero(), Vec3(1.0, 0.3, 0.2))};
  for (const auto& m : shapes) {
    for (int trial = 0; trial < 3; ++trial) {
      const double s = rng.uniform(0.2, 5.0);
      const TriMesh big = scaled(m, s);
      const auto a = estimate_volume(m, whole(m), Solidity::kSolid, 0.01);
      const auto b = estimate_volume(big, whole(big), Solidity::kSolid, 0.01);
      EXPECT_EQ(a.method, b.method);
      EXPECT_NEAR(b.volume, s * s * s * a.volume, 0.01 * s * s * s * a.volume) << to_string(a.method);
    }
  }
}

TEST(Volume, UnitScaleConvertsToCubicMeters) {
  TriMesh cm = make_box(Vec3::Zero(), Vec3::Constant(100.0));
  cm.unit_scale = 0.01;
  EXPECT_NEAR(estimate_volume(cm, whole(cm), Solidity::kSolid, 0.01).volume, 1.0, 1e-9);
  TriMesh panel = scaled(unit_panel(), 100.0);
  panel.unit_scale = 0.01;
  EXPECT_NEAR(estimate_volume(panel, whole(panel), Solidity::kHollow, 0.01).volume, 0.01, 1e-9);
}

TEST(Volume, ShellNeverExceedsEnclosedVolume) {
  Rng rng(2);
  std::vector<TriMesh> shapes = {make_box(Vec3::Zero(), Vec3::Ones()), testing::icosphere(0.05, 2),
                                 make_box(Vec3::Zero(), Vec3(1.0, 1.0, 0.01))};
  for (const auto& m : shapes) {
    const FaceSet faces = all_faces(m);
    const double enclosed = closed_volume(m, faces);
    for (double wall : {0.001, 0.01, 0.05, 0.5}) EXPECT_LE(shell_volume(m, faces, wall), enclosed + 1e-12);
  }
  // A thin closed slab's shell is its own volume once the wall exceeds it.
  const TriMesh slab = make_box(Vec3::Zero(), Vec3(1.0, 1.0, 0.01));
  EXPECT_NEAR(shell_volume(slab, all_faces(slab), 0.02), 0.01, 1e-9);
}

TEST(Volume, ShellOfCubeMatchesOffsetOracle) {
  // Independent oracle: 6 faces * area * wall overcounts the 12 edge strips
  // and 8 corners; the true shell is 1 - (1 - 2w)^3.
  const TriMesh cube = make_box(Vec3::Zero(), Vec3::Ones());
  const double w = 0.01;
  const double shell = shell_volume(cube, all_faces(cube), w);
  EXPECT_NEAR(shell, 6.0 * w, 1e-12);
  EXPECT_GE(shell, 1.0 - std::pow(1.0 - 2.0 * w, 3));
}

TEST(Volume, DegeneratePart) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  m.faces = {{0, 1, 2}};
  PartInstance p;
  p.id = 0;
  p.faces = {0};
  EXPECT_EQ(code_of([&] { estimate_volume(m, p, Solidity::kSolid, 0.01); }), ErrorCode::kDegeneratePart);
  p.faces.clear();
  EXPECT_EQ(code_of([&] { estimate_volume(m, p, Solidity::kHollow, 0.01); }), ErrorCode::kDegeneratePart);
}

TEST(Volume, DefaultWallThickness) {
  PartInstance p;
  p.box.extents = Vec3(1.0, 0.5, 0.4);
  EXPECT_NEAR(default_wall_thickness(p), 0.008, 1e-15);
  p.box.extents = Vec3(1.0, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(default_wall_thickness(p), 0.002);
  p.box.extents = Vec3(3.0, 3.0, 2.0);
  EXPECT_DOUBLE_EQ(default_wall_thickness(p), 0.02);
  p.box.extents = Vec3(100.0, 50.0, 40.0);
  EXPECT_NEAR(default_wall_thickness(p, 0.01), 0.008, 1e-15);
}

// ------------------------------------------------------------- materials

MaterialTable sample_table() {
  return MaterialTable::from_json(nlohmann::json::parse(R"({
    "materials": {"wood": {"min": 600, "max": 800}, "steel": {"min": 7850, "max": 7850},
                  "plastic": {"min": 900, "max": 1400}},
    "parts": {"wardrobe": {"shelf": "wood", "rail": "steel"}},
    "category_defaults": {"wardrobe": "wood"},
    "default": "plastic",
    "solidity": {"door": "hollow"},
    "wall_thickness": {"door": 0.01}
  })"));
}

TEST(Material, ResolutionOrder) {
  const MaterialTable t = sample_table();
  const auto exact = assign_material("wardrobe", "rail", t);
  EXPECT_EQ(exact.material, "steel");
  EXPECT_EQ(exact.resolution, "exact");
  EXPECT_DOUBLE_EQ(exact.density.min, 7850.0);
  const auto cat = assign_material("wardrobe", "unknown_widget", t);
  EXPECT_EQ(cat.material, "wood");
  EXPECT_EQ(cat.resolution, "category_default");
  const auto global = assign_material("kettle", "lid", t);
  EXPECT_EQ(global.material, "plastic");
  EXPECT_EQ(global.resolution, "global_default");
  EXPECT_EQ(code_of([] { assign_material("wardrobe", "shelf", MaterialTable{}); }), ErrorCode::kUnresolvable);
  EXPECT_EQ(t.solidity_for("door"), Solidity::kHollow);
  EXPECT_EQ(t.solidity_for("shelf"), Solidity::kSolid);
}

TEST(Material, TableJsonRoundTripAndValidation) {
  const MaterialTable t = sample_table();
  EXPECT_EQ(MaterialTable::from_json(t.to_json()).to_json(), t.to_json());
  EXPECT_NO_THROW(MaterialTable::from_json(nlohmann::json::object()));
  for (const char* bad : {R"({"materials": {"x": {"min": 0, "max": 1}}})",
                          R"({"materials": {"x": {"min": 5, "max": 1}}})",
                          R"({"parts": {"c": {"l": "nope"}}})", R"({"default": "nope"})",
                          R"({"solidity": {"door": "squishy"}})", R"({"materials": {"x": 3}})",
                          R"({"wall_thickness": {"door": -1}})"}) {
    EXPECT_EQ(code_of([&] { MaterialTable::from_json(nlohmann::json::parse(bad)); }), ErrorCode::kConfigInvalid)
        << bad;
  }
}

// ----------------------------------------------------------------- mass

TEST(Mass, Examples) {
  EXPECT_NEAR(compute_mass(0.001, {700, 700}, 0).mass, 0.7, 1e-12);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const MassSample m = compute_mass(0.002, {500, 1000}, seed);
    EXPECT_GE(m.mass, 1.0);
    EXPECT_LE(m.mass, 2.0);
    EXPECT_EQ(m.mass, m.density * 0.002);
    EXPECT_EQ(compute_mass(0.002, {500, 1000}, seed).mass, m.mass);
  }
  EXPECT_EQ(code_of([] { compute_mass(0.0, {1, 2}, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { compute_mass(1.0, {2, 1}, 0); }), ErrorCode::kInvalidArgument);
}

TEST(Physics, RecordsForEveryPart) {
  const auto fx = testing::appliance("wardrobe", true, {"rail"});
  const MaterialTable t = sample_table();
  const auto a = estimate_physics(fx.mesh, fx.parts, "wardrobe", t, 42);
  const auto b = estimate_physics(fx.mesh, fx.parts, "wardrobe", t, 42);
  ASSERT_EQ(a.size(), fx.parts.parts.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& r = a[i];
    EXPECT_EQ(r.part_id, fx.parts.parts[i].id);
    EXPECT_GT(r.volume, 0.0);
    EXPECT_GT(r.mass, 0.0);
    EXPECT_EQ(r.mass, r.density * r.volume);
    EXPECT_EQ(r.mass, b[i].mass);
    EXPECT_EQ(r.seed, derive_seed(42, static_cast<std::uint64_t>(r.part_id)));
  }
  EXPECT_EQ(a[1].solidity, Solidity::kHollow);  // door
  EXPECT_EQ(a[1].method, VolumeMethod::kShellOffset);
  EXPECT_DOUBLE_EQ(a[1].wall_thickness, 0.01);
  EXPECT_EQ(a[2].material, "steel");
  EXPECT_DOUBLE_EQ(a[2].density, 7850.0);
}

TEST(Physics, MaterialChangeReusesTheSeed) {
  const auto fx = testing::appliance("wardrobe");
  const MaterialTable t = sample_table();
  auto records = estimate_physics(fx.mesh, fx.parts, "wardrobe", t, 7);
  PhysicalRecord r = records[0];
  reassign_material(r, "plastic", t);
  EXPECT_EQ(r.material, "plastic");
  EXPECT_EQ(r.density, compute_mass(r.volume, {900, 1400}, r.seed).density);
  EXPECT_EQ(r.mass, r.density * r.volume);
  PhysicalRecord again = records[0];
  reassign_material(again, "plastic", t);
  EXPECT_EQ(again.mass, r.mass);
  EXPECT_EQ(code_of([&] { reassign_material(r, "unobtainium", t); }), ErrorCode::kUnresolvable);
}

}  // namespace
}  // namespace forge
