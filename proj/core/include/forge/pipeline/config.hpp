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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/articulation/kinematic_graph.hpp"
#include "forge/interior/interior.hpp"
#include "forge/physics/physics.hpp"
#include "forge/schema/urdf.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

inline constexpr const char* kToolVersion = "forge 0.1.0";
/// Environment variable that replaces the configured seed.
inline constexpr const char* kSeedEnv = "FORGE_SEED";

struct StageToggles {
  bool segment = true;
  bool complete = true;
  bool articulate = true;
  bool physics = true;
  bool export_outputs = true;
};

struct PipelinePaths {
  std::filesystem::path meshes;
  /// Per-object inputs: `<rasters>/<id>/{object.json, views.json,
  /// vocabulary.txt, labels/<view_id>.irast}`.
  std::filesystem::path rasters;
  /// `<templates>/<main_category>.json`.
  std::filesystem::path templates;
  std::filesystem::path materials;
  /// Optional.
  std::filesystem::path exemplars;
  std::filesystem::path output;
};

struct PipelineConfig {
  StageToggles stages;
  PipelinePaths paths;
  std::uint64_t seed = 0;
  /// Object ids to run; empty runs every mesh in `paths.meshes`.
  std::vector<std::string> objects;
  /// Concurrent objects; 0 = hardware concurrency.
  std::size_t workers = 0;

  ClusteringParams clustering;
  ArticulationParams articulation;
  CompletionParams completion;
  PlacementConfig placement;
  int voxel_resolution = 64;
  UrdfLimits urdf_limits;

  /// Relative paths resolve against `base_dir`. Unknown keys and bad values
  /// throw ConfigInvalid. Does not check the file system.
  static PipelineConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  /// Reads a config file and applies the FORGE_SEED override.
  static PipelineConfig load(const std::filesystem::path& file);
  /// Parameter snapshot; paths are written as given.
  nlohmann::json to_json() const;

  /// Parameter ranges plus existence of every path the enabled stages read.
  /// Throws ConfigInvalid.
  void validate() const;
  /// Replaces the seed when FORGE_SEED is set. Throws ConfigInvalid when it
  /// is not an unsigned integer.
  void apply_env_overrides();
};

/// Contents of `<rasters>/<id>/object.json`.
struct ObjectMeta {
  std::string id;
  std::string dataset = "local";
  std::string super_category;
  std::string main_category;
  std::string sub_category;
  /// Real-world size used to convert the mesh to meters; absent keeps the
  /// file's units.
  std::optional<SizeSpec> size;

  static ObjectMeta from_json(const nlohmann::json& doc, const std::string& id);
  nlohmann::json to_json() const;
};

}  // namespace forge
