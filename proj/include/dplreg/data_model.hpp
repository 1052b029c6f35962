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

#ifndef DPLREG_DATA_MODEL_HPP_
#define DPLREG_DATA_MODEL_HPP_

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dplreg/types.hpp"

namespace dplreg::data {

// One node's private data: design matrix (n_i x m) and labels (n_i).
struct LocalDataset {
  Matrix design;
  Vector labels;

  int rows() const { return static_cast<int>(design.rows()); }
  int cols() const { return static_cast<int>(design.cols()); }
};

struct NetworkDataset {
  std::vector<LocalDataset> locals;
  int feature_dim = 0;

  int node_count() const { return static_cast<int>(locals.size()); }
  int total_rows() const;
  int max_rows() const;
};

// Certified norm bounds: spectral norm for every design, Euclidean norm
// for every label vector.
struct AdjacencyParams {
  double delta_x = 0.0;
  double delta_y = 0.0;
};

// Largest singular value (full decomposition; these matrices are small).
double spectral_norm(const Matrix& m);

// Gaussian designs rescaled per node to spectral norm `design_norm_cap`,
// labels X_i * ground_truth + N(0, label_noise_scale^2). Deterministic in
// the seed: node i uses streams (seed, kDesign, i) and (seed, kLabelNoise, i),
// filled row-major, Box-Muller normals.
NetworkDataset generate_synthetic(int node_count,
                                  const std::vector<int>& rows_per_node,
                                  int feature_dim, const Vector& ground_truth,
                                  double label_noise_scale,
                                  double design_norm_cap, std::uint64_t seed);

// Row-concatenation in node-id order.
std::pair<Matrix, Vector> stack(const NetworkDataset& d);

// beta* = argmin (1/2)||X beta - y||^2 via SVD. Throws RankDeficient when
// the smallest singular value is <= 1e-10 times the largest.
Vector closed_form_solution(const Matrix& design, const Vector& labels);

// grad L_i(beta) = X_i^T (X_i beta - y_i). Plain loops in a fixed order
// (residual first, then column sums) so that every caller, including the
// parallel engine and the serial reference, reproduces identical bits.
Vector local_gradient(const LocalDataset& local, const Vector& beta);

// (1/2)||X_i beta - y_i||^2; companion of local_gradient for oracles.
double local_loss(const LocalDataset& local, const Vector& beta);

AdjacencyParams adjacency_params(const NetworkDataset& d);

// Replaces `node_id`'s local data (same shape) so the pair (d, result)
// is adjacent under `bounds`. Throws BoundViolation / ShapeMismatch.
NetworkDataset make_adjacent(const NetworkDataset& d, int node_id,
                             LocalDataset new_local,
                             const AdjacencyParams& bounds);

// Plain-text format: header `k m`; per node a line `node <id> <n_i>`
// followed by n_i rows of m+1 decimals (X_i row then the y_i entry).
// Decimals round-trip binary64 exactly.
void write_dataset(std::ostream& out, const NetworkDataset& d);
NetworkDataset read_dataset(std::istream& in);

// Content fingerprint over dims and entries; used in trajectory
// fingerprints and audit config checks.
std::uint64_t dataset_hash(const NetworkDataset& d);

}  // namespace dplreg::data

#endif  // DPLREG_DATA_MODEL_HPP_
