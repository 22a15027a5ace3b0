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

// Writes the sample data used by the CLI and Python checks:
//   <dir>/pipeline/   meshes, rasters, templates, materials, config.json,
//                     config_broken.json (adds an unparsable mesh)
//   <dir>/urdf/<type>/ annotation.json + URDF package of a two-part fixture
//   <dir>/embeddings.csv with exactly one near-duplicate pair

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "forge/schema/urdf.hpp"
#include "pipeline_fixtures.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

json config_json(const forge::PipelineConfig& c, const std::string& output) {
  return {{"seed", c.seed},
          {"paths",
           {{"meshes", "meshes"},
            {"rasters", "rasters"},
            {"templates", "templates"},
            {"materials", "materials.json"},
            {"output", output}}}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: forge_sample_data <dir>\n";
    return 2;
  }
  const fs::path root = argv[1];
  fs::remove_all(root);

  const fs::path pipeline = root / "pipeline";
  const forge::PipelineConfig c = forge::testing::fixture_pipeline(pipeline);
  write(pipeline / "config.json", config_json(c, "out").dump(2));
  forge::testing::write_malformed_object(c, "broken");
  json broken = config_json(c, "out_broken");
  broken["objects"] = {"broken", "cabinet", "microwave"};
  write(pipeline / "config_broken.json", broken.dump(2));
  // The default config runs only the three good objects.
  json good = config_json(c, "out");
  good["objects"] = {"cabinet", "door", "microwave"};
  write(pipeline / "config.json", good.dump(2));

  using forge::MotionType;
  const auto fx = forge::testing::door_in_frame();
  for (MotionType m : {MotionType::kFixed, MotionType::kRevolute, MotionType::kContinuous, MotionType::kPrismatic,
                       MotionType::kCylindrical, MotionType::kUniversal}) {
    const forge::AnnotationDocument doc = forge::testing::fixture_document(fx, m);
    const fs::path dir = root / "urdf" / std::string(forge::to_string(m));
    write(dir / "annotation.json", forge::export_annotation(doc));
    const forge::UrdfPackage pkg = forge::export_urdf(doc, fx.mesh, fx.parts);
    write(dir / "object.urdf", pkg.xml);
    for (const auto& [path, obj] : pkg.meshes) write(dir / path, obj);
  }

  write(root / "embeddings.csv",
        "# id,values\n"
        "chair_a,1,0,0,0\n"
        "chair_b,0.995,0.0998749,0,0\n"
        "table,0,1,0,0\n"
        "lamp,0,0,1,0\n");
  std::cout << "sample data in " << root.string() << "\n";
  return 0;
}
