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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "forge/error.hpp"
#include "forge/mesh/distance.hpp"
#include "forge/mesh/rng.hpp"
#include "forge/segmentation/segmentation.hpp"

namespace forge {
namespace {

using testing::add_part;
using testing::box_at;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

ViewSpec front_view(int w, int h) {
  ViewSpec v;
  v.view_id = "front";
  v.eye = {0, 0, 5};
  v.target = Vec3::Zero();
  v.ortho_half_extent = 1.0;
  v.width = w;
  v.height = h;
  return v;
}

TEST(Raster, EmptyMeshIsBackground) {
  const TriMesh mesh;
  const auto r = render_segment_ids(mesh, oversegment(mesh), front_view(8, 8));
  EXPECT_TRUE(std::all_of(r.pixels.begin(), r.pixels.end(), [](int v) { return v == -1; }));
}

TEST(Raster, LowerLeftHalfTriangleMatchesHalfPlaneOracle) {
  for (auto [w, h] : {std::pair{16, 16}, std::pair{37, 23}}) {
    const double aspect = static_cast<double>(w) / h;
    TriMesh mesh;
    mesh.vertices = {{-aspect, -1, 0}, {aspect, -1, 0}, {-aspect, 1, 0}};
    mesh.faces = {{0, 1, 2}};
    const auto r = render_segment_ids(mesh, oversegment(mesh), front_view(w, h));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        // Normalized device coordinates of the pixel center.
        const double u = (x + 0.5) / w * 2.0 - 1.0;
        const double v = 1.0 - (y + 0.5) / h * 2.0;
        const int expected = u + v <= 0.0 ? 0 : -1;
        ASSERT_EQ(r.at(x, y), expected) << x << "," << y;
      }
    }
  }
}

TEST(Raster, NearerQuadOccludes) {
  TriMesh mesh;
  add_part(mesh, box_at({0, 0, -0.5}, {1, 1, 0.01}));
  add_part(mesh, box_at({0, 0, 0.5}, {1.2, 1.2, 0.01}));
  const auto seg = oversegment(mesh);
  ASSERT_EQ(seg.size(), 2u);
  const auto r = render_segment_ids(mesh, seg, front_view(32, 32));
  EXPECT_EQ(std::count(r.pixels.begin(), r.pixels.end(), 0), 0);
  EXPECT_GT(std::count(r.pixels.begin(), r.pixels.end(), 1), 0);
}

TEST(Raster, DepthTieKeepsLowerFace) {
  TriMesh mesh;
  mesh.vertices = {{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}};
  mesh.faces = {{0, 1, 2}, {2, 1, 0}};
  const auto r = render_face_ids(mesh, front_view(8, 8));
  EXPECT_EQ(std::count(r.pixels.begin(), r.pixels.end(), 1), 0);
  EXPECT_GT(std::count(r.pixels.begin(), r.pixels.end(), 0), 0);
}

TEST(Raster, PerspectiveSeesTheSameSilhouetteCenter) {
  TriMesh mesh = box_at(Vec3::Zero(), Vec3::Constant(0.5));
  ViewSpec v = front_view(33, 33);
  v.projection = Projection::kPerspective;
  v.fov_y_degrees = 40;
  const auto r = render_segment_ids(mesh, oversegment(mesh), v);
  EXPECT_EQ(r.at(16, 16), 0);
  EXPECT_EQ(r.at(0, 0), -1);
}

TEST(Raster, IrastRoundTripAndLayout) {
  IdRaster r(3, 2);
  r.pixels = {-1, 0, 1, 256, -1, 70000};
  const auto bytes = encode_raster(r);
  const std::string header = "IRAST 3 2\n";
  ASSERT_EQ(bytes.size(), header.size() + 24);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  // 256 little-endian at pixel 3.
  EXPECT_EQ(bytes[header.size() + 12], 0);
  EXPECT_EQ(bytes[header.size() + 13], 1);
  // -1 is all ones.
  EXPECT_EQ(bytes[header.size()], 0xFF);
  EXPECT_EQ(decode_raster(bytes), r);

  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_EQ(code_of([&] { decode_raster(truncated); }), ErrorCode::kMalformedFile);
  auto below = bytes;
  below[header.size()] = 0xFE;  // -2
  EXPECT_EQ(code_of([&] { decode_raster(below); }), ErrorCode::kMalformedFile);
}

TEST(Raster, ViewsJsonRoundTripAndDefaults) {
  Aabb bounds;
  bounds.expand(Vec3(-1, -1, -1));
  bounds.expand(Vec3(1, 1, 1));
  const auto views = default_views(bounds);
  ASSERT_EQ(views.size(), 16u);
  for (const auto& v : views) {
    EXPECT_EQ(v.width, 512);
    v.validate();
  }
  const auto back = views_from_json(views_to_json(views));
  ASSERT_EQ(back.size(), views.size());
  for (std::size_t i = 0; i < views.size(); ++i) {
    EXPECT_EQ(back[i].view_id, views[i].view_id);
    EXPECT_NEAR((back[i].eye - views[i].eye).norm(), 0.0, 1e-12);
  }
  EXPECT_EQ(parse_vocabulary("body\ndoor\r\nhandle\n"), (std::vector<std::string>{"body", "door", "handle"}));
}

IdRaster filled(int w, int h, std::int32_t v, int count) {
  IdRaster r(w, h);
  std::fill_n(r.pixels.begin(), count, v);
  return r;
}

TEST(Votes, Examples) {
  const IdRaster seg = filled(4, 4, 0, 10);
  const IdRaster lab = filled(4, 4, 3, 16);
  RasterPair one{&seg, &lab};
  EXPECT_EQ(aggregate_votes(std::span(&one, 1)), (VoteTable{{0, {{3, 10}}}}));

  const IdRaster seg7 = filled(4, 4, 0, 7);
  const std::vector<RasterPair> two = {{&seg, &lab}, {&seg7, &lab}};
  EXPECT_EQ(aggregate_votes(two).at(0).at(3), 17);

  const IdRaster background(4, 4, -1);
  RasterPair none{&seg, &background};
  EXPECT_TRUE(aggregate_votes(std::span(&none, 1)).empty());

  const IdRaster small(2, 2, 0);
  RasterPair bad{&seg, &small};
  EXPECT_EQ(code_of([&] { aggregate_votes(std::span(&bad, 1)); }), ErrorCode::kDimensionMismatch);
}

TEST(Votes, OrderInvariant) {
  Rng rng(3);
  std::vector<IdRaster> segs, labs;
  for (int v = 0; v < 6; ++v) {
    IdRaster s(10, 10), l(10, 10);
    for (auto& p : s.pixels) p = static_cast<std::int32_t>(rng.below(5)) - 1;
    for (auto& p : l.pixels) p = static_cast<std::int32_t>(rng.below(4)) - 1;
    segs.push_back(s);
    labs.push_back(l);
  }
  std::vector<RasterPair> pairs;
  for (int v = 0; v < 6; ++v) pairs.push_back({&segs[v], &labs[v]});
  const VoteTable forward = aggregate_votes(pairs);
  std::reverse(pairs.begin(), pairs.end());
  EXPECT_EQ(aggregate_votes(pairs), forward);
  for (const auto& [s, counts] : forward) {
    for (const auto& [l, c] : counts) EXPECT_GE(c, 1);
  }
}

TEST(Labels, ArgmaxAndTieBreak) {
  OverSegmentation seg;
  seg.segments.resize(8);
  EXPECT_EQ(assign_semantic_labels(VoteTable{{5, {{1, 120}, {0, 80}}}}, seg), (SegmentLabels{{5, 1}}));
  EXPECT_EQ(assign_semantic_labels(VoteTable{{5, {{2, 50}, {7, 50}}}}, seg), (SegmentLabels{{5, 2}}));
  EXPECT_TRUE(assign_semantic_labels(VoteTable{}, seg).empty());
}

TEST(Propagation, NearestLabeledWins) {
  TriMesh mesh;
  add_part(mesh, box_at({0, 0, 0}, {0.4, 0.02, 0.4}));          // drawer (label 1)
  add_part(mesh, box_at({0, -0.012, 0}, {0.38, 0.002, 0.38}));  // interior bottom, 2 mm below
  add_part(mesh, box_at({0, -0.1, 0}, {0.6, 0.002, 0.6}));      // body floor (label 0), 50+ mm away
  const auto seg = oversegment(mesh);
  ASSERT_EQ(seg.size(), 3u);
  const auto out = propagate_unlabeled(mesh, seg, {{0, 1}, {2, 0}});
  EXPECT_EQ(out.at(1), 1);
  EXPECT_EQ(propagate_unlabeled(mesh, seg, {{0, 1}, {1, 1}, {2, 0}}),
            (SegmentLabels{{0, 1}, {1, 1}, {2, 0}}));
  EXPECT_EQ(code_of([&] { propagate_unlabeled(mesh, seg, {}); }), ErrorCode::kNoLabeledSegments);
}

TEST(Propagation, ChainInheritsThroughResolvedSegments) {
  TriMesh mesh;
  add_part(mesh, box_at({0, 0, 0}, Vec3::Constant(0.1)));     // A labeled 4
  add_part(mesh, box_at({0.2, 0, 0}, Vec3::Constant(0.1)));   // B
  add_part(mesh, box_at({0.4, 0, 0}, Vec3::Constant(0.1)));   // C
  add_part(mesh, box_at({0.75, 0, 0}, Vec3::Constant(0.1)));  // D labeled 9
  const auto out = propagate_unlabeled(mesh, oversegment(mesh), {{0, 4}, {3, 9}});
  EXPECT_EQ(out.at(1), 4);
  EXPECT_EQ(out.at(2), 4);
}

// Independent oracle: repeatedly pick the globally closest (unlabeled,
// labeled) pair by exhaustive triangle scan, lexicographic ties.
SegmentLabels propagation_oracle(const TriMesh& mesh, const OverSegmentation& seg, SegmentLabels labels) {
  const std::size_t n = seg.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (auto f : seg.segments[i]) {
        for (auto g : seg.segments[j]) best = std::min(best, triangle_triangle_distance(mesh.triangle(f), mesh.triangle(g)));
      }
      d[i][j] = d[j][i] = best;
    }
  }
  while (labels.size() < n) {
    std::tuple<double, std::size_t, std::int32_t> best{std::numeric_limits<double>::infinity(), 0, 0};
    for (std::size_t u = 0; u < n; ++u) {
      if (labels.contains(static_cast<std::int32_t>(u))) continue;
      for (const auto& [v, l] : labels) best = std::min(best, {d[u][v], u, v});
    }
    labels[static_cast<std::int32_t>(std::get<1>(best))] = labels.at(std::get<2>(best));
  }
  return labels;
}

TEST(Propagation, MatchesExhaustiveOracleOnRandomFixtures) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto fx = testing::random_cluster_fixture(seed, 25);
    const auto seg = oversegment(fx.mesh);
    Rng rng(seed);
    SegmentLabels partial;
    for (std::size_t s = 0; s < seg.size(); ++s) {
      if (rng.uniform() < 0.3 || partial.empty() && s + 1 == seg.size()) {
        partial[static_cast<std::int32_t>(s)] = fx.label_of_box[s];
      }
    }
    EXPECT_EQ(propagate_unlabeled(fx.mesh, seg, partial), propagation_oracle(fx.mesh, seg, partial)) << seed;
  }
}

SegmentLabels labels_of(const std::vector<std::int32_t>& v) {
  SegmentLabels out;
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<std::int32_t>(i)] = v[i];
  return out;
}

std::vector<std::vector<std::int32_t>> clusters_of(const PartSet& parts) {
  std::vector<std::vector<std::int32_t>> out;
  for (const auto& p : parts.parts) out.push_back(p.segments);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Clustering, OneMillimeterThresholdExamples) {
  ClusteringParams params;
  params.samples_per_part = 64;
  for (auto [gap, expected] : {std::pair{0.1, 2u}, std::pair{0.0005, 1u}}) {
    TriMesh mesh;
    add_part(mesh, box_at({-0.5 - gap / 2, 0, 0}, Vec3::Ones()));
    add_part(mesh, box_at({0.5 + gap / 2, 0, 0}, Vec3::Ones()));
    const auto seg = oversegment(mesh);
    EXPECT_EQ(cluster_instances(mesh, seg, {{0, 0}, {1, 0}}, params).size(), expected) << gap;
  }
  // Touching cubes would weld into one segment; a 10 um offset keeps two.
  TriMesh split;
  add_part(split, box_at({-0.5, 0, 0}, Vec3::Ones()));
  add_part(split, box_at({0.5 + 1e-5, 0, 0}, Vec3::Ones()));
  const auto seg = oversegment(split);
  ASSERT_EQ(seg.size(), 2u);
  const auto parts = cluster_instances(split, seg, {{0, 0}, {1, 1}}, params, std::vector<std::string>{"body", "door"});
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts.parts[0].label, "body");
  EXPECT_EQ(parts.parts[1].label, "door");
}

TEST(Clustering, MatchesBruteForceAndPartitions) {
  ClusteringParams params;
  params.samples_per_part = 32;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto fx = testing::random_cluster_fixture(seed);
    const auto seg = oversegment(fx.mesh);
    ASSERT_EQ(seg.size(), fx.label_of_box.size());
    const auto parts = cluster_instances(fx.mesh, seg, labels_of(fx.label_of_box), params);
    EXPECT_EQ(clusters_of(parts), testing::brute_force_clusters(fx.mesh, seg.segments, fx.label_of_box, 0.001));
    std::vector<int> seen(fx.mesh.face_count(), 0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& p = parts.parts[i];
      EXPECT_EQ(p.id, static_cast<std::int32_t>(i));
      if (i > 0) EXPECT_LT(parts.parts[i - 1].faces.front(), p.faces.front());
      for (auto f : p.faces) ++seen[f];
      EXPECT_EQ(p.samples.size(), 32u);
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST(Clustering, ThresholdMonotonicity) {
  const auto fx = testing::random_cluster_fixture(77);
  const auto seg = oversegment(fx.mesh);
  ClusteringParams params;
  params.samples_per_part = 8;
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double thr : {0.0002, 0.0005, 0.001, 0.0015, 0.003, 0.1}) {
    params.connect_threshold = thr;
    const auto count = cluster_instances(fx.mesh, seg, labels_of(fx.label_of_box), params).size();
    EXPECT_LE(count, previous);
    previous = count;
  }
}

TEST(Clustering, Deterministic) {
  const auto fx = testing::random_cluster_fixture(5);
  const auto seg = oversegment(fx.mesh);
  ClusteringParams params;
  params.samples_per_part = 16;
  const auto a = cluster_instances(fx.mesh, seg, labels_of(fx.label_of_box), params);
  const auto b = cluster_instances(fx.mesh, seg, labels_of(fx.label_of_box), params);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.parts[i].faces, b.parts[i].faces);
    EXPECT_EQ(a.parts[i].samples.points, b.parts[i].samples.points);
  }
}

}  // namespace
}  // namespace forge
