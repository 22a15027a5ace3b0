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

#include <algorithm>
#include <chrono>
#include <set>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/mesh/parallel.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"

namespace forge {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kSegment: return "segment";
    case Stage::kComplete: return "complete";
    case Stage::kArticulate: return "articulate";
    case Stage::kPhysics: return "physics";
    case Stage::kExport: return "export";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (Stage s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(name) + "'");
}

std::string_view to_string(ObjectStatus status) {
  switch (status) {
    case ObjectStatus::kOk: return "ok";
    case ObjectStatus::kFlagged: return "flagged";
    case ObjectStatus::kError: return "error";
  }
  return "?";
}

std::size_t RunManifest::count(ObjectStatus status) const {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [&](const ObjectOutcome& o) { return o.status == status; }));
}

json RunManifest::to_json() const {
  json objs = json::array();
  for (const auto& o : objects) {
    json entry = {{"id", o.id},
                  {"status", std::string(forge::to_string(o.status))},
                  {"stages", o.stages},
                  {"flags", o.flags},
                  {"outputs", o.outputs}};
    if (o.error_code) entry["error"] = {{"code", *o.error_code}, {"message", o.error_message.value_or("")}};
    objs.push_back(std::move(entry));
  }
  return {{"tool_version", tool_version},
          {"seed", seed},
          {"parameters", parameters},
          {"summary",
           {{"total", objects.size()},
            {"ok", count(ObjectStatus::kOk)},
            {"flagged", count(ObjectStatus::kFlagged)},
            {"error", count(ObjectStatus::kError)}}},
          {"objects", objs}};
}

json RunManifest::timings_json() const {
  json out = json::object();
  for (const auto& o : objects) out[o.id] = o.timings_ms;
  return out;
}

namespace {

class StageClock {
 public:
  explicit StageClock(double& slot) : slot_(slot), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    slot_ += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double& slot_;
  std::chrono::steady_clock::time_point start_;
};

bool enabled(const StageToggles& t, Stage s) {
  switch (s) {
    case Stage::kSegment: return t.segment;
    case Stage::kComplete: return t.complete;
    case Stage::kArticulate: return t.articulate;
    case Stage::kPhysics: return t.physics;
    case Stage::kExport: return t.export_outputs;
  }
  return false;
}

ClusteringParams clustering_for(const PipelineConfig& config) {
  ClusteringParams p = config.clustering;
  p.seed = config.seed;
  return p;
}

MaterialTable load_material_table(const fs::path& path) {
  try {
    return MaterialTable::from_json(json::parse(read_text_file(path)));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid, path.string() + ": " + e.what());
  }
}

std::vector<std::string> list_files(const fs::path& root) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ObjectOutcome run_object(const PipelineConfig& config, const std::string& id) {
  ObjectOutcome out;
  out.id = id;
  for (Stage s : kAllStages) out.stages[std::string(to_string(s))] = "skipped";
  const fs::path object_dir = config.paths.output / id;
  const fs::path staging_root = config.paths.output / ".staging";
  std::string current = "load";
  fs::path staging;
  try {
    Workspace ws;
    {
      StageClock clock(out.timings_ms["load"]);
      if (config.stages.segment) {
        ws = load_workspace(config, id);
      } else {
        const fs::path saved = object_dir / "work.cbor";
        if (!fs::is_regular_file(saved)) {
          throw Error(ErrorCode::kIo, "segmentation is off and no saved workspace exists at " + saved.string());
        }
        ws = decode_workspace(read_file_bytes(saved), clustering_for(config));
      }
    }
    std::optional<CategoryTemplate> tmpl;
    auto category_template = [&]() -> const CategoryTemplate& {
      if (!tmpl) tmpl = load_category_template(config, ws.meta.main_category);
      return *tmpl;
    };
    std::map<std::string, std::string> files;
    for (Stage s : kAllStages) {
      if (!enabled(config.stages, s)) continue;
      current = std::string(to_string(s));
      StageClock clock(out.timings_ms[current]);
      switch (s) {
        case Stage::kSegment: run_segment(ws, config); break;
        case Stage::kComplete: run_complete(ws, category_template(), config); break;
        case Stage::kArticulate: run_articulate(ws, category_template(), config); break;
        case Stage::kPhysics: run_physics(ws, load_material_table(config.paths.materials), config); break;
        case Stage::kExport: files = export_files(ws, category_template(), config); break;
      }
      out.stages[current] = "ok";
    }
    current = "write";
    {
      StageClock clock(out.timings_ms["write"]);
      const auto work = encode_workspace(ws);
      files["work.cbor"] = std::string(work.begin(), work.end());

      fs::create_directories(staging_root);
      staging = staging_root / (id + "." + std::to_string(std::hash<std::string>{}(id)));
      fs::remove_all(staging);
      if (fs::is_directory(object_dir)) {
        fs::copy(object_dir, staging, fs::copy_options::recursive);
      } else {
        fs::create_directories(staging);
      }
      for (const auto& [name, bytes] : files) {
        const fs::path p = staging / name;
        fs::create_directories(p.parent_path());
        write_file_atomic(p, bytes);
      }
      for (const auto& f : list_files(staging)) out.outputs.push_back(id + "/" + f);
      replace_directory(staging, object_dir);
      staging.clear();
    }
    out.flags = ws.all_flags();
    out.status = out.flags.empty() ? ObjectStatus::kOk : ObjectStatus::kFlagged;
  } catch (const Error& e) {
    out.status = ObjectStatus::kError;
    out.error_code = std::string(to_string(e.code()));
    out.error_message = e.what();
  } catch (const std::exception& e) {
    out.status = ObjectStatus::kError;
    out.error_code = "internal";
    out.error_message = e.what();
  }
  if (out.status == ObjectStatus::kError) {
    if (out.stages.count(current)) out.stages[current] = "error";
    out.outputs.clear();
    std::error_code ec;
    if (!staging.empty()) fs::remove_all(staging, ec);
  }
  return out;
}

std::vector<std::string> discover_objects(const PipelineConfig& config) {
  if (!config.objects.empty()) return config.objects;
  std::set<std::string> ids;
  if (fs::is_directory(config.paths.meshes)) {
    for (const auto& e : fs::directory_iterator(config.paths.meshes)) {
      if (!e.is_regular_file()) continue;
      std::string ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".glb" || ext == ".obj") ids.insert(e.path().stem().string());
    }
  } else if (fs::is_directory(config.paths.output)) {
    // Later-stage reruns work from saved workspaces.
    for (const auto& e : fs::directory_iterator(config.paths.output)) {
      if (e.is_directory() && fs::is_regular_file(e.path() / "work.cbor")) ids.insert(e.path().filename().string());
    }
  }
  return {ids.begin(), ids.end()};
}

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  if (config.stages.physics) load_material_table(config.paths.materials).validate();
  std::error_code ec;
  fs::create_directories(config.paths.output, ec);
  if (ec) throw Error(ErrorCode::kConfigInvalid, "cannot create output dir " + config.paths.output.string());

  RunManifest manifest;
  manifest.seed = config.seed;
  manifest.parameters = config.to_json();
  const std::vector<std::string> ids = discover_objects(config);
  manifest.objects.resize(ids.size());
  parallel_for(
      0, ids.size(), [&](std::size_t i) { manifest.objects[i] = run_object(config, ids[i]); }, config.workers);
  fs::remove_all(config.paths.output / ".staging", ec);

  write_file_atomic(config.paths.output / "manifest.json", canonical_dump(manifest.to_json()));
  write_file_atomic(config.paths.output / "timings.json", canonical_dump(manifest.timings_json()));
  return manifest;
}

}  // namespace forge
