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

#include "dplreg/data_model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::data {

int NetworkDataset::total_rows() const {
  int n = 0;
  for (const auto& local : locals) n += local.rows();
  return n;
}

int NetworkDataset::max_rows() const {
  int n = 0;
  for (const auto& local : locals) n = std::max(n, local.rows());
  return n;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw InvalidParams("spectral_norm: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

NetworkDataset generate_synthetic(int node_count,
                                  const std::vector<int>& rows_per_node,
                                  int feature_dim, const Vector& ground_truth,
                                  double label_noise_scale,
                                  double design_norm_cap, std::uint64_t seed) {
  if (node_count < 1 || static_cast<int>(rows_per_node.size()) != node_count) {
    throw ShapeMismatch("rows_per_node must list one count per node");
  }
  if (feature_dim < 1) throw ShapeMismatch("feature dimension must be >= 1");
  if (ground_truth.size() != feature_dim) {
    throw DimensionMismatch("ground truth dimension != m");
  }
  if (!(design_norm_cap > 0)) {
    throw InvalidParams("design norm cap must be positive");
  }
  if (label_noise_scale < 0) {
    throw InvalidParams("label noise scale must be nonnegative");
  }
  const int total =
      std::accumulate(rows_per_node.begin(), rows_per_node.end(), 0);
  if (total < feature_dim) {
    throw InsufficientRows("total rows " + std::to_string(total) +
                           " < feature dimension " +
                           std::to_string(feature_dim));
  }

  NetworkDataset d;
  d.feature_dim = feature_dim;
  d.locals.resize(node_count);
  for (int i = 0; i < node_count; ++i) {
    const int rows = rows_per_node[i];
    if (rows < 1) throw ShapeMismatch("every node needs at least one row");
    rng::RngStream design_stream(seed, rng::Purpose::kDesign, i + 1);
    Matrix x(rows, feature_dim);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < feature_dim; ++c) x(r, c) = design_stream.next_normal();
    }
    const double norm = spectral_norm(x);
    if (norm > 0) x *= design_norm_cap / norm;

    rng::RngStream label_stream(seed, rng::Purpose::kLabelNoise, i + 1);
    Vector y = x * ground_truth;
    if (label_noise_scale > 0) {
      for (int r = 0; r < rows; ++r) {
        y[r] += label_noise_scale * label_stream.next_normal();
      }
    }
    d.locals[i] = LocalDataset{std::move(x), std::move(y)};
  }
  return d;
}

std::pair<Matrix, Vector> stack(const NetworkDataset& d) {
  const int n = d.total_rows();
  Matrix x(n, d.feature_dim);
  Vector y(n);
  int offset = 0;
  for (const auto& local : d.locals) {
    x.middleRows(offset, local.rows()) = local.design;
    y.segment(offset, local.rows()) = local.labels;
    offset += local.rows();
  }
  return {std::move(x), std::move(y)};
}

Vector closed_form_solution(const Matrix& design, const Vector& labels) {
  if (design.rows() != labels.size()) {
    throw DimensionMismatch("design rows != label count");
  }
  constexpr double kRankTol = 1e-10;
  Eigen::JacobiSVD<Matrix> svd(design,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (design.rows() < design.cols() || sv.size() < design.cols() ||
      sv(0) == 0.0 || sv(sv.size() - 1) <= kRankTol * sv(0)) {
    throw RankDeficient("design matrix numerically rank deficient");
  }
  return svd.solve(labels);
}

Vector local_gradient(const LocalDataset& local, const Vector& beta) {
  const int rows = local.rows();
  const int cols = local.cols();
  if (beta.size() != cols) {
    throw DimensionMismatch("gradient point dimension != m");
  }
  // residual r = X beta - y, then g_c = sum_r X(r,c) * residual(r).
  // Ascending index order in both passes; see header.
  Vector residual(rows);
  for (int r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += local.design(r, c) * beta[c];
    residual[r] = acc - local.labels[r];
  }
  Vector grad(cols);
  for (int c = 0; c < cols; ++c) {
    double acc = 0.0;
    for (int r = 0; r < rows; ++r) acc += local.design(r, c) * residual[r];
    grad[c] = acc;
  }
  return grad;
}

double local_loss(const LocalDataset& local, const Vector& beta) {
  if (beta.size() != local.cols()) {
    throw DimensionMismatch("loss point dimension != m");
  }
  double acc = 0.0;
  for (int r = 0; r < local.rows(); ++r) {
    double dot = 0.0;
    for (int c = 0; c < local.cols(); ++c) dot += local.design(r, c) * beta[c];
    const double res = dot - local.labels[r];
    acc += res * res;
  }
  return 0.5 * acc;
}

AdjacencyParams adjacency_params(const NetworkDataset& d) {
  AdjacencyParams out;
  for (const auto& local : d.locals) {
    out.delta_x = std::max(out.delta_x, spectral_norm(local.design));
    out.delta_y = std::max(out.delta_y, local.labels.norm());
  }
  return out;
}

namespace {

void check_bounds(const LocalDataset& local, const AdjacencyParams& bounds,
                  const std::string& which) {
  // Tiny relative slack absorbs re-measurement rounding of the norms.
  const double tol = 1.0 + 1e-12;
  if (spectral_norm(local.design) > bounds.delta_x * tol) {
    throw BoundViolation(which + " design exceeds delta_X");
  }
  if (local.labels.norm() > bounds.delta_y * tol) {
    throw BoundViolation(which + " labels exceed delta_y");
  }
}

}  // namespace

NetworkDataset make_adjacent(const NetworkDataset& d, int node_id,
                             LocalDataset new_local,
                             const AdjacencyParams& bounds) {
  if (node_id < 1 || node_id > d.node_count()) {
    throw ShapeMismatch("adjacent node id out of range");
  }
  const LocalDataset& old_local = d.locals[node_id - 1];
  if (new_local.rows() != old_local.rows() ||
      new_local.cols() != old_local.cols()) {
    throw ShapeMismatch(
        "replacement local dataset must keep the same n_i and m");
  }
  check_bounds(old_local, bounds, "existing local");
  check_bounds(new_local, bounds, "replacement local");

  NetworkDataset out = d;
  out.locals[node_id - 1] = std::move(new_local);
  return out;
}

void write_dataset(std::ostream& out, const NetworkDataset& d) {
  out << d.node_count() << " " << d.feature_dim << "\n";
  for (int i = 0; i < d.node_count(); ++i) {
    const auto& local = d.locals[i];
    out << "node " << (i + 1) << " " << local.rows() << "\n";
    for (int r = 0; r < local.rows(); ++r) {
      for (int c = 0; c < local.cols(); ++c) {
        out << io::fmt_double(local.design(r, c)) << " ";
      }
      out << io::fmt_double(local.labels[r]) << "\n";
    }
  }
}

NetworkDataset read_dataset(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto tokens = io::split_ws(line);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  if (lines.empty()) throw IoError("dataset file is empty");
  if (lines[0].size() != 2) throw IoError("dataset header must be 'k m'");
  const int k = static_cast<int>(io::parse_int(lines[0][0]));
  const int m = static_cast<int>(io::parse_int(lines[0][1]));
  if (k < 1 || m < 1) throw IoError("dataset header out of range");

  NetworkDataset d;
  d.feature_dim = m;
  std::size_t pos = 1;
  for (int i = 0; i < k; ++i) {
    if (pos >= lines.size() || lines[pos].size() != 3 ||
        lines[pos][0] != "node") {
      throw IoError("expected 'node <id> <n_i>' line");
    }
    const int id = static_cast<int>(io::parse_int(lines[pos][1]));
    const int rows = static_cast<int>(io::parse_int(lines[pos][2]));
    if (id != i + 1) throw IoError("node ids must appear in order 1..k");
    if (rows < 1) throw IoError("node row count must be >= 1");
    ++pos;
    Matrix x(rows, m);
    Vector y(rows);
    for (int r = 0; r < rows; ++r, ++pos) {
      if (pos >= lines.size() ||
          lines[pos].size() != static_cast<std::size_t>(m + 1)) {
        throw IoError("dataset row must have m+1 decimals");
      }
      for (int c = 0; c < m; ++c) x(r, c) = io::parse_double(lines[pos][c]);
      y[r] = io::parse_double(lines[pos][m]);
    }
    if (!x.allFinite() || !y.allFinite()) {
      throw IoError("dataset entries must be finite");
    }
    d.locals.push_back(LocalDataset{std::move(x), std::move(y)});
  }
  if (pos != lines.size()) throw IoError("trailing content in dataset file");
  return d;
}

std::uint64_t dataset_hash(const NetworkDataset& d) {
  io::Fnv1a h;
  h.update_int(d.node_count());
  h.update_int(d.feature_dim);
  for (const auto& local : d.locals) {
    h.update_int(local.rows());
    for (int r = 0; r < local.rows(); ++r) {
      for (int c = 0; c < local.cols(); ++c) h.update_double(local.design(r, c));
      h.update_double(local.labels[r]);
    }
  }
  return h.value();
}

}  // namespace dplreg::data
