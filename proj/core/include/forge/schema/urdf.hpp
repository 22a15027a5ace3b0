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

#include <map>
#include <string>

#include "forge/mesh/trimesh.hpp"
#include "forge/schema/annotation.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {

struct UrdfPackage {
  std::string xml;
  /// Relative path (as referenced from the URDF) -> OBJ text.
  std::map<std::string, std::string> meshes;
};

/// Effort and velocity written into every <limit>; URDF requires them and
/// the annotation does not estimate them.
struct UrdfLimits {
  double effort = 10.0;
  double velocity = 1.0;
};

/// One link per part with mass and a box-approximated diagonal inertia;
/// cylindrical and universal joints expand through a massless intermediate
/// link. Link frames sit at their joint origins, unrotated. Throws
/// UnvalidatedGraph, MissingPhysical, UntypedJoint, InvalidArgument (part
/// missing from `parts`).
UrdfPackage export_urdf(const AnnotationDocument& doc, const TriMesh& mesh, const PartSet& parts,
                        const UrdfLimits& limits = {});

}  // namespace forge
