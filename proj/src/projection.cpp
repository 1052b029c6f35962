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

#include "dplreg/projection.hpp"

#include <cmath>
#include <string>

#include "dplreg/data_model.hpp"
#include "dplreg/errors.hpp"

namespace dplreg::projection {

Vector project(const OmegaBall& region, const Vector& beta) {
  if (beta.size() != region.center.size()) {
    throw DimensionMismatch("projection point dimension != region dimension");
  }
  if (std::isinf(region.radius)) return beta;
  const Vector offset = beta - region.center;
  const double dist = offset.norm();
  if (dist <= region.radius) return beta;
  // Radial shrink. Rounding can land the result a few ulp outside the
  // ball; nudging the scale down until the recomputed distance passes the
  // containment test makes the operator exactly idempotent.
  double scale = region.radius / dist;
  Vector out = region.center + scale * offset;
  while ((out - region.center).norm() > region.radius) {
    scale = std::nextafter(scale, 0.0);
    out = region.center + scale * offset;
  }
  return out;
}

bool contains(const OmegaBall& region, const Vector& beta, double tol) {
  if (beta.size() != region.center.size()) {
    throw DimensionMismatch("containment point dimension != region dimension");
  }
  if (std::isinf(region.radius)) return true;
  return (beta - region.center).norm() <= region.radius + tol;
}

OmegaBall suggest_omega(const data::NetworkDataset& d, double slack) {
  if (!(slack >= 1.0)) throw InvalidParams("omega slack must be >= 1");
  double max_norm = 0.0;
  for (int i = 0; i < d.node_count(); ++i) {
    Vector local_opt;
    try {
      local_opt = data::closed_form_solution(d.locals[i].design,
                                             d.locals[i].labels);
    } catch (const RankDeficient&) {
      throw RankDeficient("node " + std::to_string(i + 1) +
                          " design lacks full column rank; cannot suggest a region");
    }
    max_norm = std::max(max_norm, local_opt.norm());
  }
  if (!(max_norm > 0)) {
    throw InvalidParams(
        "all local optima are zero; no meaningful region radius");
  }
  OmegaBall out;
  out.center = Vector::Zero(d.feature_dim);
  out.radius = slack * max_norm;
  return out;
}

}  // namespace dplreg::projection
