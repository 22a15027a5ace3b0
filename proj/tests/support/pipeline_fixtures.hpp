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

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/pipeline/pipeline.hpp"

namespace forge::testing {

/// Lays out one pipeline input: `<meshes>/<id>.glb` and, under
/// `<rasters>/<id>/`, object.json, views.json, vocabulary.txt and one label
/// raster per view rendered from the true part labels. Label ids index
/// `vocabulary`.
void write_pipeline_object(const std::filesystem::path& meshes, const std::filesystem::path& rasters,
                           const std::string& id, const TriMesh& mesh, const PartSet& parts,
                           const std::vector<std::string>& vocabulary, const nlohmann::json& meta,
                           int azimuths = 8, int resolution = 192);

/// Input tree under `root` with three objects: "cabinet" (drawer front panel
/// only, so completion runs), "door" (stored in centimeters with a 2 m size
/// spec) and "microwave" (no turntable, so one is generated). Templates and
/// a material table are included. Cabinet drawer and microwave door are
/// inset 3 mm so they do not share mesh edges with the body. Output goes to `root/out`.
PipelineConfig fixture_pipeline(const std::filesystem::path& root);

/// A mesh file that fails to parse.
void write_malformed_object(const PipelineConfig& config, const std::string& id);

}  // namespace forge::testing
