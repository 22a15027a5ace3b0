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

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <regex>
#include <thread>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"
#include "forge/pipeline/service.hpp"
#include "pipeline_fixtures.hpp"

#include <httplib.h>

namespace forge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch_root() { return fs::temp_directory_path() / ("forge_pipeline_" + std::to_string(::getpid())); }

class ScratchCleanup : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(scratch_root()); }
};
[[maybe_unused]] ::testing::Environment* const kCleanup = ::testing::AddGlobalTestEnvironment(new ScratchCleanup);

fs::path scratch(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  }
  return out;
}

const ObjectOutcome& outcome(const RunManifest& m, const std::string& id) {
  for (const auto& o : m.objects) {
    if (o.id == id) return o;
  }
  throw std::runtime_error("no outcome for " + id);
}

/// One full run over the fixture tree, shared by every suite that reads it.
struct SharedRun {
  PipelineConfig config;
  RunManifest manifest;
};

const SharedRun& shared_run() {
  static const SharedRun run = [] {
    SharedRun r{testing::fixture_pipeline(scratch("first")), {}};
    r.manifest = run_pipeline(r.config);
    return r;
  }();
  return run;
}

class PipelineRun : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = &shared_run().config;
    manifest_ = &shared_run().manifest;
  }
  AnnotationDocument annotation(const std::string& id) const {
    return parse_annotation(read_text_file(config_->paths.output / id / "annotation.json"));
  }

  const PipelineConfig* config_ = nullptr;
  const RunManifest* manifest_ = nullptr;
};

TEST(PipelineConfig, ParsesSectionsAndResolvesRelativePaths) {
  const json doc = {{"stages", {{"physics", false}}},
                    {"paths", {{"meshes", "in/meshes"}, {"output", "/abs/out"}}},
                    {"seed", 11},
                    {"sweep", {{"angular_step_degrees", 0.5}}},
                    {"articulation", {{"retention", {{"drawer", 0.8}}}}},
                    {"placement", {{"shelf_spacing", 0.3}}}};
  const PipelineConfig c = PipelineConfig::from_json(doc, "/base");
  EXPECT_FALSE(c.stages.physics);
  EXPECT_TRUE(c.stages.segment);
  EXPECT_EQ(c.paths.meshes, fs::path("/base/in/meshes"));
  EXPECT_EQ(c.paths.output, fs::path("/abs/out"));
  EXPECT_EQ(c.seed, 11u);
  EXPECT_DOUBLE_EQ(c.articulation.sweep.angular_step_degrees, 0.5);
  EXPECT_DOUBLE_EQ(c.articulation.retention_overrides.at("drawer"), 0.8);
  EXPECT_DOUBLE_EQ(c.placement.shelf_spacing, 0.3);
  // The snapshot carries parameters, never paths.
  const json snap = c.to_json();
  EXPECT_FALSE(snap.contains("paths"));
  EXPECT_EQ(snap["sweep"]["angular_step_degrees"], 0.5);
  EXPECT_EQ(PipelineConfig::from_json(snap).to_json(), snap);
}

TEST(PipelineConfig, RejectsUnknownKeysAndWrongTypes) {
  auto code_of = [](const json& doc) {
    try {
      PipelineConfig::from_json(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of({{"sed", 1}}), ErrorCode::kConfigInvalid);
  EXPECT_EQ(code_of({{"sweep", {{"ramp_windw", 3}}}}), ErrorCode::kConfigInvalid);
  EXPECT_EQ(code_of({{"seed", "seven"}}), ErrorCode::kConfigInvalid);
  EXPECT_EQ(code_of({{"stages", true}}), ErrorCode::kConfigInvalid);
}

TEST(PipelineConfig, SeedEnvironmentOverride) {
  const fs::path dir = scratch("env");
  {
    std::ofstream(dir / "config.json") << R"({"seed": 3, "paths": {"output": "out"}})";
  }
  ::unsetenv(kSeedEnv);
  EXPECT_EQ(PipelineConfig::load(dir / "config.json").seed, 3u);
  ::setenv(kSeedEnv, "99", 1);
  EXPECT_EQ(PipelineConfig::load(dir / "config.json").seed, 99u);
  EXPECT_EQ(PipelineConfig::load(dir / "config.json").paths.output, dir / "out");
  ::setenv(kSeedEnv, "9x", 1);
  EXPECT_THROW(PipelineConfig::load(dir / "config.json"), Error);
  ::unsetenv(kSeedEnv);
}

TEST(PipelineConfig, MissingPathsAbortBeforeAnyObject) {
  const fs::path root = scratch("missing");
  PipelineConfig c;
  c.paths.output = root / "out";
  c.paths.meshes = root / "nope";
  try {
    run_pipeline(c);
    FAIL() << "expected ConfigInvalid";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigInvalid);
  }
  EXPECT_FALSE(fs::exists(c.paths.output));

  c = testing::fixture_pipeline(root);
  c.articulation.sweep.ramp_window = 0;
  EXPECT_THROW(run_pipeline(c), Error);
  c = testing::fixture_pipeline(root);
  fs::remove(c.paths.materials);
  EXPECT_THROW(c.validate(), Error);
  c.stages.physics = false;
  EXPECT_NO_THROW(c.validate());
}

TEST(Files, AtomicWriteReplacesWholeFile) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "a.txt", std::string_view("first version, longer"));
  write_file_atomic(dir / "a.txt", std::string_view("second"));
  EXPECT_EQ(read_text_file(dir / "a.txt"), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);

  fs::create_directories(dir / "stage");
  write_file_atomic(dir / "stage" / "x", std::string_view("new"));
  fs::create_directories(dir / "target");
  write_file_atomic(dir / "target" / "old", std::string_view("old"));
  replace_directory(dir / "stage", dir / "target");
  EXPECT_TRUE(fs::exists(dir / "target" / "x"));
  EXPECT_FALSE(fs::exists(dir / "target" / "old"));
  EXPECT_FALSE(fs::exists(dir / "stage"));
}

TEST_F(PipelineRun, EveryObjectSucceedsAndExports) {
  ASSERT_EQ(manifest_->objects.size(), 3u);
  EXPECT_EQ(manifest_->count(ObjectStatus::kError), 0u);
  for (const auto& o : manifest_->objects) {
    SCOPED_TRACE(o.id + ": " + o.error_message.value_or(""));
    EXPECT_NE(o.status, ObjectStatus::kError);
    for (const auto& [stage, state] : o.stages) EXPECT_EQ(state, "ok") << stage;
    for (const char* f : {"annotation.json", "object.urdf", "mesh.glb", "flags.json", "work.cbor", "template.json"}) {
      EXPECT_TRUE(fs::is_regular_file(config_->paths.output / o.id / f)) << f;
    }
    EXPECT_FALSE(fs::exists(config_->paths.output / o.id / "meshes" / "nothing"));
  }
  const json manifest = json::parse(read_text_file(config_->paths.output / "manifest.json"));
  EXPECT_EQ(manifest["summary"]["total"], 3);
  EXPECT_EQ(manifest["tool_version"], kToolVersion);
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_FALSE(manifest.dump().find("timings") != std::string::npos);
  const json timings = json::parse(read_text_file(config_->paths.output / "timings.json"));
  EXPECT_TRUE(timings["cabinet"].contains("articulate"));
  EXPECT_FALSE(fs::exists(config_->paths.output / ".staging"));
}

TEST_F(PipelineRun, CabinetDrawerIsCompletedThenArticulated) {
  const AnnotationDocument doc = annotation("cabinet");
  ASSERT_EQ(doc.parts.size(), 2u);
  const PartRecord* drawer = nullptr;
  for (const auto& p : doc.parts) {
    if (p.label == "drawer") drawer = &p;
  }
  ASSERT_NE(drawer, nullptr);
  EXPECT_NE(std::find(drawer->flags.begin(), drawer->flags.end(), "completed_interior"), drawer->flags.end());
  EXPECT_NE(std::find(drawer->flags.begin(), drawer->flags.end(), "inherited_material"), drawer->flags.end());
  ASSERT_TRUE(drawer->joint.has_value());
  EXPECT_EQ(drawer->joint->motion, MotionType::kPrismatic);
  EXPECT_NEAR(std::abs(drawer->joint->axis.z()), 1.0, 1e-9);
  ASSERT_EQ(drawer->joint->limits.size(), 1u);
  // Completed box is 0.40 - clearance deep; 0.9 retention of the detachment.
  EXPECT_NEAR(drawer->joint->limits[0].lower, 0.0, 1e-9);
  EXPECT_NEAR(drawer->joint->limits[0].upper, 0.9 * 0.40, 0.02);
  ASSERT_TRUE(drawer->physical.has_value());
  EXPECT_EQ(drawer->physical->material, "wood");
  EXPECT_GT(drawer->physical->mass, 0.0);
}

TEST_F(PipelineRun, DoorIsConvertedToMeters) {
  const AnnotationDocument doc = annotation("door");
  EXPECT_DOUBLE_EQ(doc.object.unit_scale, 1.0);
  const testing::ArticulatedFixture truth = testing::door_in_frame();
  const Vec3 want = truth.mesh.bounds().extent();
  const Vec3 got = doc.object.bounds.max - doc.object.bounds.min;
  EXPECT_NEAR((got - want).norm(), 0.0, 1e-4);
  const PartRecord* door = nullptr;
  for (const auto& p : doc.parts) {
    if (p.label == "door") door = &p;
  }
  ASSERT_NE(door, nullptr);
  ASSERT_TRUE(door->joint.has_value());
  EXPECT_EQ(door->joint->motion, MotionType::kRevolute);
  EXPECT_NEAR(std::abs(door->joint->axis.y()), 1.0, 1e-2);
  ASSERT_EQ(door->joint->limits.size(), 1u);
  EXPECT_GT(door->joint->limits[0].upper - door->joint->limits[0].lower, 1.0);
}

TEST_F(PipelineRun, MicrowaveGainsAContinuousTurntable) {
  const AnnotationDocument doc = annotation("microwave");
  const PartRecord* turntable = nullptr;
  for (const auto& p : doc.parts) {
    if (p.label == "turntable") turntable = &p;
  }
  ASSERT_NE(turntable, nullptr);
  ASSERT_TRUE(turntable->joint.has_value());
  EXPECT_EQ(turntable->joint->motion, MotionType::kContinuous);
  EXPECT_NEAR(std::abs(turntable->joint->axis.y()), 1.0, 1e-12);
  EXPECT_NE(std::find(turntable->flags.begin(), turntable->flags.end(), "generated_parametric_part"),
            turntable->flags.end());
  const auto& o = outcome(*manifest_, "microwave");
  EXPECT_EQ(o.status, ObjectStatus::kFlagged);
}

TEST_F(PipelineRun, ExportedAnnotationsAreCanonicalAndValid) {
  for (const auto& o : manifest_->objects) {
    const std::string text = read_text_file(config_->paths.output / o.id / "annotation.json");
    const AnnotationDocument doc = parse_annotation(text);
    EXPECT_EQ(export_annotation(doc), text) << o.id;
    EXPECT_TRUE(document_problems(doc).empty()) << o.id;
    const CategoryTemplate tmpl = load_category_template(*config_, doc.object.main_category);
    EXPECT_TRUE(validate_graph(to_graph(doc), tmpl).ok()) << o.id;
    EXPECT_EQ(doc.object.uuid, object_uuid("fixtures", o.id));
    const TriMesh glb = load_mesh_file(config_->paths.output / o.id / "mesh.glb");
    EXPECT_GT(glb.face_count(), 0u);
  }
}

TEST_F(PipelineRun, SecondRunIsByteIdentical) {
  PipelineConfig again = testing::fixture_pipeline(scratch("second"));
  again.workers = 1;
  run_pipeline(again);
  auto a = read_tree(config_->paths.output);
  auto b = read_tree(again.paths.output);
  a.erase("timings.json");
  b.erase("timings.json");
  ASSERT_EQ(a.size(), b.size());
  for (const auto& [name, bytes] : a) {
    ASSERT_TRUE(b.count(name)) << name;
    EXPECT_TRUE(b.at(name) == bytes) << name;
  }
}

TEST_F(PipelineRun, LaterStagesResumeFromTheSavedWorkspace) {
  const fs::path root = scratch("resume");
  fs::copy(config_->paths.output, root / "out", fs::copy_options::recursive);
  PipelineConfig c = *config_;
  c.paths.output = root / "out";
  c.stages = {false, false, false, false, true};
  c.objects = {"cabinet"};
  const RunManifest m = run_pipeline(c);
  ASSERT_EQ(m.objects.size(), 1u);
  EXPECT_NE(m.objects[0].status, ObjectStatus::kError) << m.objects[0].error_message.value_or("");
  EXPECT_EQ(m.objects[0].stages.at("segment"), "skipped");
  EXPECT_EQ(m.objects[0].stages.at("export"), "ok");
  EXPECT_EQ(read_text_file(c.paths.output / "cabinet" / "annotation.json"),
            read_text_file(config_->paths.output / "cabinet" / "annotation.json"));
  EXPECT_EQ(read_text_file(c.paths.output / "cabinet" / "object.urdf"),
            read_text_file(config_->paths.output / "cabinet" / "object.urdf"));

  c.objects = {"never_ran"};
  const RunManifest missing = run_pipeline(c);
  EXPECT_EQ(missing.count(ObjectStatus::kError), 1u);
}

TEST(Workspace, CborRoundTripIsStable) {
  const fs::path root = scratch("workspace");
  PipelineConfig c = testing::fixture_pipeline(root);
  Workspace ws = load_workspace(c, "cabinet");
  run_segment(ws, c);
  ws.flag_part(0, "example");
  ws.flag_object("object_note");
  const auto bytes = encode_workspace(ws);
  const Workspace back = decode_workspace(bytes, ClusteringParams{.seed = c.seed});
  EXPECT_EQ(encode_workspace(back), bytes);
  ASSERT_EQ(back.parts.size(), ws.parts.size());
  for (std::size_t i = 0; i < ws.parts.size(); ++i) {
    EXPECT_EQ(back.parts.parts[i].faces, ws.parts.parts[i].faces);
    EXPECT_NEAR((back.parts.parts[i].box.center - ws.parts.parts[i].box.center).norm(), 0.0, 1e-12);
  }
  std::vector<std::uint8_t> junk(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() / 2));
  EXPECT_THROW(decode_workspace(junk, ClusteringParams{}), Error);
}

TEST(Workspace, SegmentationRecoversTheTrueParts) {
  const fs::path root = scratch("segment");
  PipelineConfig c = testing::fixture_pipeline(root);
  Workspace ws = load_workspace(c, "cabinet");
  run_segment(ws, c);
  ASSERT_EQ(ws.parts.size(), 2u);
  const testing::ArticulatedFixture truth = testing::cabinet_with_drawer(false);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(ws.parts.parts[i].label, truth.parts.parts[i].label);
    EXPECT_EQ(ws.parts.parts[i].faces.size(), truth.parts.parts[i].faces.size());
  }
}

TEST(PipelineBatch, MalformedMeshIsRecordedNotFatal) {
  const fs::path root = scratch("malformed");
  PipelineConfig c = testing::fixture_pipeline(root);
  testing::write_malformed_object(c, "broken");
  c.objects = {"broken", "cabinet", "microwave"};
  const RunManifest m = run_pipeline(c);
  ASSERT_EQ(m.objects.size(), 3u);
  EXPECT_EQ(m.count(ObjectStatus::kError), 1u);
  EXPECT_EQ(m.count(ObjectStatus::kOk) + m.count(ObjectStatus::kFlagged), 2u);
  const auto& bad = outcome(m, "broken");
  EXPECT_EQ(bad.error_code.value_or(""), "MalformedFile");
  EXPECT_EQ(bad.stages.at("segment"), "skipped");
  EXPECT_TRUE(bad.outputs.empty());
  EXPECT_FALSE(fs::exists(c.paths.output / "broken"));
  const json manifest = json::parse(read_text_file(c.paths.output / "manifest.json"));
  EXPECT_EQ(manifest["summary"]["error"], 1);
  EXPECT_EQ(manifest["objects"][0]["id"], "broken");
  EXPECT_TRUE(manifest["objects"][0].contains("error"));
}

/// Service tests run against a private copy of one pipeline output.
class ServiceTest : public PipelineRun {
 protected:
  void SetUp() override {
    PipelineRun::SetUp();
    dir_ = scratch("service");
    fs::copy(config_->paths.output, dir_, fs::copy_options::recursive);
    service_ = std::make_unique<AnnotationService>(dir_);
  }
  std::string annotation_text(const std::string& id) { return read_text_file(dir_ / id / "annotation.json"); }

  fs::path dir_;
  std::unique_ptr<AnnotationService> service_;
};

TEST_F(ServiceTest, UnknownIdsAre404) {
  EXPECT_EQ(service_->get_annotation("nope").status, 404);
  EXPECT_EQ(service_->get_mesh("nope").status, 404);
  EXPECT_EQ(service_->get_flags("nope").status, 404);
  EXPECT_EQ(service_->put_annotation("nope", "{}", "\"1\"").status, 404);
  EXPECT_EQ(service_->get_annotation("../out").status, 404);
  EXPECT_EQ(service_->get_annotation(".staging").status, 404);
}

TEST_F(ServiceTest, ListsObjectsWithFlagsAndVersions) {
  const HttpResponse r = service_->list_objects();
  ASSERT_EQ(r.status, 200);
  const json list = json::parse(r.body);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0]["id"], "cabinet");
  EXPECT_EQ(list[0]["version"], 1);
  EXPECT_TRUE(list[2]["flags"].contains("parts"));
  EXPECT_EQ(service_->get_mesh("cabinet").content_type, "model/gltf-binary");
  EXPECT_EQ(json::parse(service_->get_flags("microwave").body)["parts"].size(),
            json::parse(read_text_file(dir_ / "microwave" / "flags.json"))["parts"].size());
}

TEST_F(ServiceTest, PutFollowsTheVersionContract) {
  const HttpResponse get = service_->get_annotation("cabinet");
  ASSERT_EQ(get.status, 200);
  EXPECT_EQ(get.headers.at("ETag"), "\"1\"");
  AnnotationDocument doc = parse_annotation(get.body);
  doc.parts[1].human_corrected = true;
  doc.parts[1].joint->limits[0].upper = 0.3;
  const std::string body = export_annotation(doc);

  EXPECT_EQ(service_->put_annotation("cabinet", body, std::nullopt).status, 428);
  EXPECT_EQ(service_->put_annotation("cabinet", body, "\"2\"").status, 409);
  const HttpResponse ok = service_->put_annotation("cabinet", body, "\"1\"");
  ASSERT_EQ(ok.status, 200) << ok.body;
  EXPECT_EQ(ok.headers.at("ETag"), "\"2\"");
  EXPECT_EQ(json::parse(ok.body)["urdf"], "regenerated");
  EXPECT_EQ(service_->version("cabinet"), 2u);
  EXPECT_EQ(annotation_text("cabinet"), body);
  EXPECT_NE(read_text_file(dir_ / "cabinet" / "object.urdf").find("upper=\"0.3\""), std::string::npos);
  // The old token is now stale.
  EXPECT_EQ(service_->put_annotation("cabinet", body, "\"1\"").status, 409);
}

TEST_F(ServiceTest, CyclicGraphIsRejectedWithReport) {
  AnnotationDocument doc = parse_annotation(annotation_text("cabinet"));
  // Root hangs off the drawer while the drawer hangs off the root.
  JointProposal back = *doc.parts[1].joint;
  back.child = doc.parts[0].id;
  back.parent = doc.parts[1].id;
  back.motion = MotionType::kFixed;
  back.limits.clear();
  doc.parts[0].joint = back;
  const std::string before = annotation_text("cabinet");
  const HttpResponse r = service_->put_annotation("cabinet", canonical_dump(to_json(doc)), "\"1\"");
  EXPECT_EQ(r.status, 422);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["error"], "invalid_graph");
  EXPECT_NE(body.dump().find("cycle"), std::string::npos);
  EXPECT_EQ(annotation_text("cabinet"), before);
  EXPECT_EQ(service_->version("cabinet"), 1u);
}

TEST_F(ServiceTest, SchemaViolationsAre422) {
  EXPECT_EQ(service_->put_annotation("cabinet", "{not json", "\"1\"").status, 422);
  EXPECT_EQ(service_->put_annotation("cabinet", R"({"format": "other"})", "\"1\"").status, 422);
  AnnotationDocument doc = parse_annotation(annotation_text("cabinet"));
  doc.object.uuid = object_uuid("fixtures", "door");
  EXPECT_EQ(service_->put_annotation("cabinet", export_annotation(doc), "\"1\"").status, 422);
}

TEST_F(ServiceTest, TemplateViolationsAre422) {
  AnnotationDocument doc = parse_annotation(annotation_text("cabinet"));
  doc.parts[1].joint->motion = MotionType::kRevolute;  // drawers only slide
  const HttpResponse r = service_->put_annotation("cabinet", export_annotation(doc), "\"1\"");
  EXPECT_EQ(r.status, 422);
  EXPECT_NE(r.body.find("motion_type"), std::string::npos) << r.body;
}

TEST_F(ServiceTest, InvalidStoredAnnotationIsNeverServed) {
  AnnotationDocument doc = parse_annotation(annotation_text("cabinet"));
  doc.parts[1].joint->motion = MotionType::kRevolute;
  write_file_atomic(dir_ / "cabinet" / "annotation.json", export_annotation(doc));
  EXPECT_EQ(service_->get_annotation("cabinet").status, 422);
}

TEST_F(ServiceTest, SimilarPartsShareALabel) {
  const HttpResponse r = service_->similar_parts("microwave", 0);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["same_label"].size(), 0u);
  EXPECT_EQ(service_->similar_parts("microwave", 99).status, 404);
}

TEST_F(ServiceTest, ConcurrentPutsWithOneVersionOverHttp) {
  AnnotationServer server(dir_);
  const int port = server.bind("127.0.0.1", 0);
  std::thread loop([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  EXPECT_EQ(client.Get("/objects/unknown/annotation")->status, 404);
  auto listing = client.Get("/objects");
  ASSERT_TRUE(listing);
  EXPECT_EQ(json::parse(listing->body).size(), 3u);
  auto mesh = client.Get("/objects/door/mesh.glb");
  ASSERT_TRUE(mesh);
  EXPECT_EQ(mesh->get_header_value("Content-Type"), "model/gltf-binary");
  auto got = client.Get("/objects/cabinet/annotation");
  ASSERT_TRUE(got);
  EXPECT_EQ(got->get_header_value("ETag"), "\"1\"");
  EXPECT_EQ(client.Put("/objects/cabinet/annotation", got->body, "application/json")->status, 428);

  for (int round = 0; round < 5; ++round) {
    const std::string token = "\"" + std::to_string(round + 1) + "\"";
    auto put = [&]() {
      httplib::Client c("127.0.0.1", port);
      httplib::Headers headers = {{"If-Match", token}};
      auto res = c.Put("/objects/cabinet/annotation", headers, got->body, "application/json");
      return res ? res->status : -1;
    };
    auto a = std::async(std::launch::async, put);
    auto b = std::async(std::launch::async, put);
    std::vector<int> codes = {a.get(), b.get()};
    std::sort(codes.begin(), codes.end());
    EXPECT_EQ(codes, (std::vector<int>{200, 409})) << "round " << round;
  }
  EXPECT_EQ(service_->version("cabinet"), 6u);

  server.stop();
  loop.join();
}

}  // namespace
}  // namespace forge
