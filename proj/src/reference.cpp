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

#include "dplreg/reference.hpp"

#include <string>

#include "dplreg/errors.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::reference {

namespace {

engine::Trajectory run_serial(const data::NetworkDataset& d,
                              const topology::NetworkGraph& g,
                              const topology::WeightMatrix& w,
                              const schedules::ScheduleParams& p,
                              const projection::OmegaBall* region, int rounds,
                              const std::vector<Vector>& init,
                              std::uint64_t seed, bool with_noise,
                              bool with_projection) {
  p.validate();
  const int k = g.node_count;
  const int m = d.feature_dim;
  if (d.node_count() != k || w.node_count() != k ||
      static_cast<int>(init.size()) != k || rounds < 1) {
    throw ShapeMismatch("reference run: inconsistent shapes");
  }

  engine::Trajectory traj;
  traj.node_count = k;
  traj.feature_dim = m;
  traj.rounds = rounds;
  traj.master_seed = seed;
  traj.noise_disabled = !with_noise;
  traj.structural_hash = engine::structural_fingerprint(
      d, w, p, region, rounds, with_noise, with_projection);
  traj.published.resize(rounds, std::vector<Vector>(k));
  traj.projected.resize(rounds, std::vector<Vector>(k));
  traj.internal.resize(rounds + 1, std::vector<Vector>(k));
  if (with_noise) traj.noise.resize(rounds, std::vector<Vector>(k));
  traj.access.fetch_counts = Eigen::MatrixXi::Zero(k, k);

  std::vector<rng::RngStream> streams;
  for (int i = 0; i < k; ++i) {
    streams.emplace_back(seed, rng::Purpose::kLaplaceNoise, i + 1);
  }

  traj.internal[0] = init;
  std::vector<Vector> proj(k);

  for (int t = 0; t < rounds; ++t) {
    const double v_t = schedules::noise_scale(t, p);
    const double step = schedules::alpha(t, p);

    for (int i = 0; i < k; ++i) {
      if (with_noise) {
        Vector omega = rng::sample_laplace_vector(m, v_t, streams[i]);
        traj.published[t][i] = traj.internal[t][i] + omega;
        traj.noise[t][i] = std::move(omega);
      } else {
        traj.published[t][i] = traj.internal[t][i];
      }
      if (!traj.published[t][i].allFinite()) {
        throw NonFiniteState("published state diverged at round " +
                             std::to_string(t));
      }
    }

    for (int j = 0; j < k; ++j) {
      if (with_projection) {
        proj[j] = projection::project(*region, traj.published[t][j]);
      } else {
        proj[j] = traj.published[t][j];
      }
    }

    for (int i = 0; i < k; ++i) {
      traj.projected[t][i] = proj[i];
      Vector acc = Vector::Zero(m);
      for (int j : g.neighbors[i]) {
        const double wij = w.entries(i, j);
        for (int c = 0; c < m; ++c) acc[c] += wij * proj[j][c];
      }
      const Vector grad = data::local_gradient(d.locals[i], proj[i]);
      for (int c = 0; c < m; ++c) acc[c] -= step * grad[c];
      if (!acc.allFinite()) {
        throw NonFiniteState("internal state diverged at round " +
                             std::to_string(t));
      }
      traj.internal[t + 1][i] = std::move(acc);
    }
  }
  return traj;
}

}  // namespace

engine::Trajectory run_private(const data::NetworkDataset& d,
                               const topology::NetworkGraph& g,
                               const topology::WeightMatrix& w,
                               const schedules::ScheduleParams& p,
                               const projection::OmegaBall& region, int rounds,
                               const std::vector<Vector>& init,
                               std::uint64_t seed, bool zero_noise,
                               bool skip_projection) {
  return run_serial(d, g, w, p, &region, rounds, init, seed, !zero_noise,
                    !skip_projection);
}

engine::Trajectory run_baseline(const data::NetworkDataset& d,
                                const topology::NetworkGraph& g,
                                const topology::WeightMatrix& w,
                                const schedules::ScheduleParams& p, int rounds,
                                const std::vector<Vector>& init) {
  return run_serial(d, g, w, p, nullptr, rounds, init, /*seed=*/0,
                    /*with_noise=*/false, /*with_projection=*/false);
}

}  // namespace dplreg::reference
