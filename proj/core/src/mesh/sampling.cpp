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

#include "forge/mesh/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"
#include "forge/mesh/rng.hpp"

namespace forge {

Vec3 PointSet::centroid() const {
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : points) sum += p;
  return points.empty() ? sum : Vec3(sum / static_cast<double>(points.size()));
}

PointSet sample_surface(const TriMesh& mesh, std::span<const std::int32_t> faces,
                        std::size_t count, std::uint64_t seed) {
  std::vector<double> cdf;
  cdf.reserve(faces.size());
  double total = 0.0;
  for (auto f : faces) {
    total += mesh.face_area(f);
    cdf.push_back(total);
  }
  if (faces.empty() || !(total > 0.0)) {
    throw Error(ErrorCode::kZeroArea, "cannot sample a selection without area");
  }
  PointSet out;
  out.seed = seed;
  out.points.reserve(count);
  out.source_face.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), pick);
    if (it == cdf.end()) --it;
    const auto f = faces[static_cast<std::size_t>(it - cdf.begin())];
    const auto t = mesh.triangle(f);
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    out.points.push_back((1.0 - r1) * t[0] + r1 * (1.0 - r2) * t[1] + r1 * r2 * t[2]);
    out.source_face.push_back(f);
  }
  return out;
}

}  // namespace forge
