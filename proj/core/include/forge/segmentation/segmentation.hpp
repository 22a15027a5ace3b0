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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forge/mesh/bounding_box.hpp"
#include "forge/mesh/oversegment.hpp"
#include "forge/mesh/sampling.hpp"
#include "forge/segmentation/raster.hpp"

namespace forge {

/// segment id -> label id -> covered pixel count.
using VoteTable = std::map<std::int32_t, std::map<std::int32_t, std::int64_t>>;

/// segment id -> label id.
using SegmentLabels = std::map<std::int32_t, std::int32_t>;

struct RasterPair {
  const IdRaster* segments = nullptr;
  const IdRaster* labels = nullptr;
};

/// Sums, over every pixel where both rasters are non-negative, one vote for
/// (segment, label). Throws DimensionMismatch when a pair differs in size.
VoteTable aggregate_votes(std::span<const RasterPair> pairs);

/// Argmax label per voted segment; ties go to the smaller label id.
SegmentLabels assign_semantic_labels(const VoteTable& votes, const OverSegmentation& overseg);

/// Gives every unlabeled segment the label of its nearest labeled segment.
/// Segments are resolved in order of increasing distance, so a resolved
/// segment can pass its label on. Throws NoLabeledSegments.
SegmentLabels propagate_unlabeled(const TriMesh& mesh, const OverSegmentation& overseg,
                                  const SegmentLabels& labels);

struct ClusteringParams {
  /// Same-label segments closer than this are merged into one instance.
  double connect_threshold = 0.001;
  std::size_t samples_per_part = 2048;
  std::uint64_t seed = 0;
  double gobb_tolerance = 0.05;

  void validate() const;
};

struct PartInstance {
  std::int32_t id = -1;
  std::int32_t label_id = -1;
  std::string label;
  std::vector<std::int32_t> segments;
  FaceSet faces;
  OrientedBox box;
  PointSet samples;
};

struct PartSet {
  std::vector<PartInstance> parts;

  std::size_t size() const { return parts.size(); }
  const PartInstance& at(std::int32_t id) const;
  PartInstance& at(std::int32_t id);
  const PartInstance* find(std::int32_t id) const;
  std::vector<std::int32_t> ids_with_label(const std::string& label) const;
  std::int32_t next_id() const;
};

/// Populates descriptor box and surface samples of `part` from its faces.
void describe_part(const TriMesh& mesh, PartInstance& part, const ClusteringParams& params);

/// Union-find over same-label segments whose minimum distance is below the
/// threshold. Instance ids follow the smallest contained face index. Label
/// names come from `vocabulary` when it covers the label id.
PartSet cluster_instances(const TriMesh& mesh, const OverSegmentation& overseg,
                          const SegmentLabels& labels, const ClusteringParams& params,
                          std::span<const std::string> vocabulary = {});

}  // namespace forge
