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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/pipeline/config.hpp"
#include "forge/schema/annotation.hpp"

namespace forge {

enum class Stage { kSegment, kComplete, kArticulate, kPhysics, kExport };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);
inline constexpr Stage kAllStages[] = {Stage::kSegment, Stage::kComplete, Stage::kArticulate, Stage::kPhysics,
                                       Stage::kExport};

/// Everything one object accumulates between stages. Saved as
/// `<output>/<id>/work.cbor` so single stages can run on their own.
struct Workspace {
  ObjectMeta meta;
  TriMesh mesh;
  /// Conversion applied at load; factor 1 when the mesh kept its units.
  double scale_factor = 1.0;
  PartSet parts;
  /// Joints of generated interior parts; they replace estimated ones.
  std::map<std::int32_t, JointProposal> generated_joints;
  std::optional<KinematicGraph> graph;
  std::vector<PhysicalRecord> physical;
  /// Verification flags per part id, and for the whole object.
  std::map<std::int32_t, std::vector<std::string>> part_flags;
  std::vector<std::string> object_flags;

  void flag_part(std::int32_t id, const std::string& flag);
  void flag_object(const std::string& flag);
  /// Object flags, part flags and joint flags, prefixed by part.
  std::vector<std::string> all_flags() const;
};

/// Loads the mesh and metadata of `id` and converts the mesh to meters.
/// Throws MalformedFile, EmptyGeometry, SchemaViolation, Io.
Workspace load_workspace(const PipelineConfig& config, const std::string& id);

/// Byte-stable binary snapshot (CBOR). Boxes and samples are recomputed on
/// read from `clustering`.
std::vector<std::uint8_t> encode_workspace(const Workspace& ws);
Workspace decode_workspace(std::span<const std::uint8_t> bytes, const ClusteringParams& clustering);

CategoryTemplate load_category_template(const PipelineConfig& config, const std::string& main_category);

/// Label votes from the object's rasters, propagation and instance
/// clustering. Throws NoLabeledSegments, DimensionMismatch, Io.
void run_segment(Workspace& ws, const PipelineConfig& config);
/// Drawer completion, interior affordances and missing interior articulated
/// parts. Missing cavities and generators become flags.
void run_complete(Workspace& ws, const CategoryTemplate& tmpl, const PipelineConfig& config);
void run_articulate(Workspace& ws, const CategoryTemplate& tmpl, const PipelineConfig& config);
void run_physics(Workspace& ws, const MaterialTable& table, const PipelineConfig& config);

AnnotationDocument build_document(const Workspace& ws, const CategoryTemplate& tmpl);

/// File name -> bytes of everything `export` writes for one object. A URDF
/// skipped for lack of physical records is flagged on `ws`.
std::map<std::string, std::string> export_files(Workspace& ws, const CategoryTemplate& tmpl,
                                                const PipelineConfig& config);

enum class ObjectStatus { kOk, kFlagged, kError };
std::string_view to_string(ObjectStatus status);

struct ObjectOutcome {
  std::string id;
  ObjectStatus status = ObjectStatus::kOk;
  /// Stage name -> "ok", "skipped" or "error".
  std::map<std::string, std::string> stages;
  std::vector<std::string> flags;
  std::optional<std::string> error_code;
  std::optional<std::string> error_message;
  /// Relative to the output directory, sorted.
  std::vector<std::string> outputs;
  /// Stage name -> wall milliseconds.
  std::map<std::string, double> timings_ms;
};

struct RunManifest {
  std::string tool_version = kToolVersion;
  std::uint64_t seed = 0;
  nlohmann::json parameters;
  /// Input order.
  std::vector<ObjectOutcome> objects;

  std::size_t count(ObjectStatus status) const;
  /// Everything except timings.
  nlohmann::json to_json() const;
  nlohmann::json timings_json() const;
};

/// Runs the enabled stages on one object, starting from its saved workspace
/// when segmentation is off, and writes its output directory atomically.
/// Never throws for object-level failures; they land in the outcome.
ObjectOutcome run_object(const PipelineConfig& config, const std::string& id);

/// Object ids from the config, or the stems of every .glb/.obj mesh, sorted.
std::vector<std::string> discover_objects(const PipelineConfig& config);

/// Validates the config (ConfigInvalid aborts before any object runs), then
/// runs objects on a bounded pool. Writes `manifest.json` and `timings.json`
/// atomically into the output directory.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace forge
