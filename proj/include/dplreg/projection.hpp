// Copyright 2026 The dplreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLREG_PROJECTION_HPP_
#define DPLREG_PROJECTION_HPP_

#include "dplreg/types.hpp"

namespace dplreg::data {
struct NetworkDataset;
}

namespace dplreg::projection {

// Euclidean ball realizing the compact convex constraint region. The
// certified bound on ||beta|| over the set is ||center|| + radius, which is
// what the privacy budget consumes as B_Omega. An infinite radius is
// accepted only through the engine's projection-off override.
struct OmegaBall {
  Vector center;
  double radius = 0.0;

  double sup_norm_bound() const { return center.norm() + radius; }
};

// Nearest point of the closed ball: identity inside, radial shrink outside.
Vector project(const OmegaBall& region, const Vector& beta);

bool contains(const OmegaBall& region, const Vector& beta, double tol = 0.0);

// Heuristic region suggestion: centered ball of radius
// slack * max_i ||argmin L_i||. Requires every local design to have full
// column rank (RankDeficient otherwise). The result is guaranteed to
// contain every local optimum but NOT necessarily the global one; callers
// should verify containment once beta* is known.
OmegaBall suggest_omega(const data::NetworkDataset& d, double slack);

}  // namespace dplreg::projection

#endif  // DPLREG_PROJECTION_HPP_
