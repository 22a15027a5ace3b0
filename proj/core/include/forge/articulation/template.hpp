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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

enum class MotionType { kFixed, kRevolute, kContinuous, kPrismatic, kCylindrical, kUniversal };

std::string_view to_string(MotionType type);
/// Throws SchemaViolation for unknown names.
MotionType parse_motion_type(std::string_view name);
int degrees_of_freedom(MotionType type);
bool has_rotation(MotionType type);
bool has_translation(MotionType type);

/// Label that may appear in `link_dependency` to attach directly to the root.
inline constexpr std::string_view kRootDependency = "root";

struct TemplateEntry {
  std::string name;
  std::string gloss;
  bool articulatable = false;
  std::vector<std::string> link_dependency;
  /// Priority ordered: the first type is the expected default.
  std::vector<MotionType> joint_types;
  /// Owning entry for flattened nested sub-parts; empty at top level.
  std::string parent_entry;
  std::vector<std::string> affordances;
  /// Translational parts that never travel below their rest pose.
  bool non_recessing = false;
  /// Opaque functional-dependency metadata, carried but never interpreted.
  nlohmann::json functional;
};

struct CategoryTemplate {
  std::string main_category;
  std::string gloss;
  std::vector<TemplateEntry> entries;
  /// Interior affordance labels expected inside the body cavity.
  std::vector<std::string> interior_affordances;
  /// Interior articulated labels expected inside the body cavity.
  std::vector<std::string> interior_articulated;

  const TemplateEntry* find(std::string_view name) const;
  /// Entries that form the base of the kinematic tree.
  std::vector<const TemplateEntry*> root_entries() const;
  bool is_root_label(std::string_view name) const;
};

/// Parses and validates a template document. Nested `parts[]` are flattened;
/// a nested entry without its own `kinematic` block is fixed to its owner.
CategoryTemplate load_template(std::span<const std::uint8_t> bytes);
CategoryTemplate load_template_json(const nlohmann::json& doc);
CategoryTemplate load_template_file(const std::filesystem::path& path);

nlohmann::json template_to_json(const CategoryTemplate& tmpl);

}  // namespace forge
