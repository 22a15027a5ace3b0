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

#include "forge/articulation/joint.hpp"

#include <algorithm>

namespace forge {

bool canonical_flips(const Vec3& v, double eps) {
  for (int i : {1, 0, 2}) {
    if (v[i] > eps) return false;
    if (v[i] < -eps) return true;
  }
  return false;
}

Vec3 canonical_direction(const Vec3& v, double eps) {
  return canonical_flips(v, eps) ? Vec3(-v) : v;
}

void add_flag(JointProposal& joint, const std::string& flag) {
  if (std::find(joint.flags.begin(), joint.flags.end(), flag) == joint.flags.end()) {
    joint.flags.push_back(flag);
  }
}

}  // namespace forge
