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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/articulation/joint.hpp"
#include "forge/articulation/kinematic_graph.hpp"
#include "forge/mesh/geometry.hpp"
#include "forge/physics/physics.hpp"

namespace forge {

inline constexpr int kAnnotationVersion = 1;

struct ObjectInfo {
  std::string uuid;
  std::string source_dataset;
  std::string source_model_id;
  std::string super_category;
  std::string main_category;
  std::string sub_category;
  double unit_scale = 1.0;
  Vec3 up = Vec3::UnitY();
  Vec3 front = Vec3::UnitZ();
  /// Meters.
  Aabb bounds;
};

struct PartRecord {
  std::int32_t id = -1;
  std::string label;
  std::vector<std::int32_t> segments;
  /// Joint to the parent; absent only for the root.
  std::optional<JointProposal> joint;
  std::optional<PhysicalRecord> physical;
  std::vector<std::string> affordances;
  bool human_corrected = false;
  /// Provenance and verification flags.
  std::vector<std::string> flags;
};

struct AnnotationDocument {
  ObjectInfo object;
  /// Sorted by id.
  std::vector<PartRecord> parts;

  const PartRecord* find(std::int32_t id) const;
  PartRecord* find(std::int32_t id);
};

/// Deterministic name-based (SHA-1) UUID for a source model.
std::string object_uuid(const std::string& dataset, const std::string& model_id);

/// Structural problems: duplicate ids, root count, dangling parents, joints
/// whose child is not their part, cycles. Empty when valid.
std::vector<std::string> document_problems(const AnnotationDocument& doc);

KinematicGraph to_graph(const AnnotationDocument& doc);

nlohmann::json to_json(const AnnotationDocument& doc);
/// Throws SchemaViolation.
AnnotationDocument annotation_from_json(const nlohmann::json& doc);

/// Sorted keys, two-space indent, floats at 9 significant digits, scalar
/// arrays on one line. Throws InvalidArgument for non-finite numbers.
std::string canonical_dump(const nlohmann::json& doc);

/// Canonical JSON bytes. Throws UnvalidatedGraph when document_problems is
/// nonempty.
std::string export_annotation(const AnnotationDocument& doc);
/// Throws SchemaViolation.
AnnotationDocument parse_annotation(std::string_view text);

nlohmann::json joint_to_json(const JointProposal& joint);
/// `child` fills the joint's child id. Throws SchemaViolation.
JointProposal joint_from_json(const nlohmann::json& doc, std::int32_t child);
nlohmann::json physical_to_json(const PhysicalRecord& record);
PhysicalRecord physical_from_json(const nlohmann::json& doc, std::int32_t part_id);

}  // namespace forge
