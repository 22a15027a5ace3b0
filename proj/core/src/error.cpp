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

#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kEmptyGeometry: return "EmptyGeometry";
    case ErrorCode::kNonTriangulatable: return "NonTriangulatable";
    case ErrorCode::kZeroArea: return "ZeroArea";
    case ErrorCode::kDegenerateSpread: return "DegenerateSpread";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoLabeledSegments: return "NoLabeledSegments";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kNoContact: return "NoContact";
    case ErrorCode::kAmbiguousAxis: return "AmbiguousAxis";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kNoDetachment: return "NoDetachment";
    case ErrorCode::kNoValidParent: return "NoValidParent";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kNoCavity: return "NoCavity";
    case ErrorCode::kAlreadyComplete: return "AlreadyComplete";
    case ErrorCode::kNoGenerator: return "NoGenerator";
    case ErrorCode::kZeroExtent: return "ZeroExtent";
    case ErrorCode::kDegeneratePart: return "DegeneratePart";
    case ErrorCode::kUnresolvable: return "Unresolvable";
    case ErrorCode::kUnvalidatedGraph: return "UnvalidatedGraph";
    case ErrorCode::kMissingPhysical: return "MissingPhysical";
    case ErrorCode::kUntypedJoint: return "UntypedJoint";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace forge
