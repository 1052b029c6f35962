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

#include "dplreg/rng.hpp"

#include <cmath>

#include "dplreg/errors.hpp"

namespace dplreg::rng {

double laplace_from_unit(double u, double scale) {
  // F^{-1}(u) = b log(2u) for u < 1/2, -b log(2(1-u)) otherwise.
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double RngStream::next_laplace(double scale) {
  if (!(scale > 0)) throw NonPositiveScale("laplace scale must be positive");
  return laplace_from_unit(next_unit(), scale);
}

double RngStream::next_normal() {
  // Box-Muller, cosine branch only. Two uniforms per draw keeps the
  // stream layout trivially addressable.
  const double u1 = next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

Vector sample_laplace_vector(int dim, double scale, RngStream& stream) {
  if (!(scale > 0)) throw NonPositiveScale("laplace scale must be positive");
  if (dim < 1) throw DimensionMismatch("laplace vector dimension must be >= 1");
  Vector out(dim);
  for (int j = 0; j < dim; ++j) out[j] = stream.next_laplace(scale);
  return out;
}

double laplace_log_density(const Vector& x, double scale) {
  if (!(scale > 0)) throw NonPositiveScale("laplace scale must be positive");
  const double log_norm = std::log(2.0 * scale);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    acc += -log_norm - std::abs(x[j]) / scale;
  }
  return acc;
}

}  // namespace dplreg::rng
