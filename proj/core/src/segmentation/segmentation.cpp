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

#include "forge/segmentation/segmentation.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "forge/error.hpp"
#include "forge/mesh/distance.hpp"
#include "forge/mesh/parallel.hpp"
#include "forge/mesh/rng.hpp"
#include "forge/mesh/union_find.hpp"

namespace forge {

VoteTable aggregate_votes(std::span<const RasterPair> pairs) {
  VoteTable votes;
  for (const auto& pair : pairs) {
    if (pair.segments == nullptr || pair.labels == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "raster pair is missing a raster");
    }
    const IdRaster& s = *pair.segments;
    const IdRaster& l = *pair.labels;
    if (s.width != l.width || s.height != l.height) {
      throw Error(ErrorCode::kDimensionMismatch,
                  std::to_string(s.width) + "x" + std::to_string(s.height) + " vs " +
                      std::to_string(l.width) + "x" + std::to_string(l.height));
    }
    for (std::size_t k = 0; k < s.pixels.size(); ++k) {
      if (s.pixels[k] >= 0 && l.pixels[k] >= 0) ++votes[s.pixels[k]][l.pixels[k]];
    }
  }
  return votes;
}

SegmentLabels assign_semantic_labels(const VoteTable& votes, const OverSegmentation& overseg) {
  SegmentLabels out;
  for (const auto& [segment, counts] : votes) {
    if (segment < 0 || static_cast<std::size_t>(segment) >= overseg.size()) {
      throw Error(ErrorCode::kInvalidArgument, "vote for unknown segment " + std::to_string(segment));
    }
    std::int32_t best = -1;
    std::int64_t best_count = 0;
    // Map iteration is by ascending label id, so strict > keeps the smaller id.
    for (const auto& [label, count] : counts) {
      if (count > best_count) {
        best = label;
        best_count = count;
      }
    }
    if (best >= 0) out[segment] = best;
  }
  return out;
}

SegmentLabels propagate_unlabeled(const TriMesh& mesh, const OverSegmentation& overseg,
                                  const SegmentLabels& labels) {
  if (labels.empty()) throw Error(ErrorCode::kNoLabeledSegments, "no segment carries a label");
  const std::size_t n = overseg.size();
  SegmentLabels out = labels;
  if (out.size() == n) return out;

  SegmentDistanceCache cache(mesh, overseg);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  struct Best {
    double distance = kInf;
    std::int32_t source = -1;
  };
  std::vector<Best> best(n);
  std::vector<char> done(n, 0);
  for (const auto& [s, l] : labels) done[static_cast<std::size_t>(s)] = 1;

  auto relax = [&](std::int32_t source) {
    for (std::size_t u = 0; u < n; ++u) {
      if (done[u]) continue;
      Best& b = best[u];
      const double box_sq = cache.bounds(static_cast<std::int32_t>(u)).squared_distance(cache.bounds(source));
      if (box_sq > b.distance * b.distance) continue;
      const double d = cache.distance(static_cast<std::int32_t>(u), source);
      if (d < b.distance || (d == b.distance && source < b.source)) b = {d, source};
    }
  };
  for (const auto& [s, l] : labels) relax(s);

  for (std::size_t resolved = labels.size(); resolved < n; ++resolved) {
    std::int32_t pick = -1;
    for (std::size_t u = 0; u < n; ++u) {
      if (done[u]) continue;
      if (pick < 0 || best[u].distance < best[static_cast<std::size_t>(pick)].distance) {
        pick = static_cast<std::int32_t>(u);
      }
    }
    const auto p = static_cast<std::size_t>(pick);
    out[pick] = out.at(best[p].source);
    done[p] = 1;
    relax(pick);
  }
  return out;
}

void ClusteringParams::validate() const {
  if (!(connect_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "connect_threshold must be positive");
  }
  if (samples_per_part == 0) throw Error(ErrorCode::kInvalidArgument, "samples_per_part must be positive");
}

const PartInstance* PartSet::find(std::int32_t id) const {
  for (const auto& p : parts) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const PartInstance& PartSet::at(std::int32_t id) const {
  const PartInstance* p = find(id);
  if (p == nullptr) throw Error(ErrorCode::kInvalidArgument, "unknown part id " + std::to_string(id));
  return *p;
}

PartInstance& PartSet::at(std::int32_t id) {
  return const_cast<PartInstance&>(static_cast<const PartSet&>(*this).at(id));
}

std::vector<std::int32_t> PartSet::ids_with_label(const std::string& label) const {
  std::vector<std::int32_t> out;
  for (const auto& p : parts) {
    if (p.label == label) out.push_back(p.id);
  }
  return out;
}

std::int32_t PartSet::next_id() const {
  std::int32_t next = 0;
  for (const auto& p : parts) next = std::max(next, p.id + 1);
  return next;
}

void describe_part(const TriMesh& mesh, PartInstance& part, const ClusteringParams& params) {
  part.box = select_descriptor_box(mesh, part.faces, params.gobb_tolerance);
  const std::uint64_t seed = derive_seed(params.seed, static_cast<std::uint64_t>(part.faces.front()));
  part.samples = sample_surface(mesh, part.faces, params.samples_per_part, seed);
}

PartSet cluster_instances(const TriMesh& mesh, const OverSegmentation& overseg,
                          const SegmentLabels& labels, const ClusteringParams& params,
                          std::span<const std::string> vocabulary) {
  params.validate();
  const std::size_t n = overseg.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (!labels.contains(static_cast<std::int32_t>(s))) {
      throw Error(ErrorCode::kInvalidArgument, "segment " + std::to_string(s) + " has no label");
    }
  }
  SegmentDistanceCache cache(mesh, overseg);
  UnionFind uf(n);
  std::map<std::int32_t, std::vector<std::int32_t>> by_label;
  for (std::size_t s = 0; s < n; ++s) by_label[labels.at(static_cast<std::int32_t>(s))].push_back(static_cast<std::int32_t>(s));
  const double thr_sq = params.connect_threshold * params.connect_threshold;
  for (const auto& [label, members] : by_label) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto a = members[i], b = members[j];
        if (uf.find(a) == uf.find(b)) continue;
        if (cache.bounds(a).squared_distance(cache.bounds(b)) >= thr_sq) continue;
        if (cache.closer_than(a, b, params.connect_threshold)) uf.unite(a, b);
      }
    }
  }

  // Segments are ordered by smallest face, so the first segment of each set
  // also carries the set's smallest face.
  std::map<std::size_t, std::size_t> part_of_root;
  PartSet out;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t root = uf.find(s);
    auto [it, inserted] = part_of_root.emplace(root, out.parts.size());
    if (inserted) {
      PartInstance part;
      part.id = static_cast<std::int32_t>(out.parts.size());
      part.label_id = labels.at(static_cast<std::int32_t>(s));
      part.label = part.label_id >= 0 && static_cast<std::size_t>(part.label_id) < vocabulary.size()
                       ? vocabulary[static_cast<std::size_t>(part.label_id)]
                       : std::to_string(part.label_id);
      out.parts.push_back(std::move(part));
    }
    PartInstance& part = out.parts[it->second];
    part.segments.push_back(static_cast<std::int32_t>(s));
    part.faces.insert(part.faces.end(), overseg.segments[s].begin(), overseg.segments[s].end());
  }
  parallel_for(0, out.parts.size(), [&](std::size_t i) {
    auto& part = out.parts[i];
    std::sort(part.faces.begin(), part.faces.end());
    describe_part(mesh, part, params);
  });
  return out;
}

}  // namespace forge
