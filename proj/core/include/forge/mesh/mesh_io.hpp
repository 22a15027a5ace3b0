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
#include <span>
#include <string>
#include <vector>

#include "forge/mesh/trimesh.hpp"

namespace forge {

enum class MeshFormat { kGlb, kObj };

/// Guesses the format from a file extension (".glb" / ".obj", case
/// insensitive). Throws MalformedFile for anything else.
MeshFormat format_from_path(const std::filesystem::path& path);

/// Parses mesh bytes into a single indexed triangle mesh: sub-meshes are
/// merged, node transforms flattened, polygons fan-triangulated, faces with a
/// repeated vertex index dropped, and the result recentered on its bounds.
TriMesh load_mesh(std::span<const std::uint8_t> bytes, MeshFormat format);
TriMesh load_mesh_file(const std::filesystem::path& path);

/// One named node of a GLB scene written by `write_glb`.
struct GlbNode {
  std::string name;
  TriMesh mesh;
  Vec3 translation = Vec3::Zero();
};

/// Minimal glTF 2.0 binary writer: one mesh/primitive per node, float32
/// positions and uint32 indices.
std::vector<std::uint8_t> write_glb(std::span<const GlbNode> nodes);
std::string write_obj(const TriMesh& mesh);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace forge
