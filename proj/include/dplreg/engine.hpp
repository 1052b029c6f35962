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

#ifndef DPLREG_ENGINE_HPP_
#define DPLREG_ENGINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dplreg/data_model.hpp"
#include "dplreg/projection.hpp"
#include "dplreg/schedules.hpp"
#include "dplreg/topology.hpp"
#include "dplreg/types.hpp"

namespace dplreg::engine {

struct RunOptions {
  // Skips the noise draw entirely (publishes the exact state), instead of
  // sampling with a zero scale. Such runs cannot be audited.
  bool zero_noise = false;
  // Treats the region as all of R^m; the recorded projected states equal
  // the published ones.
  bool skip_projection = false;
  // OpenMP over the per-round node updates. Results are identical either
  // way; the serial reference in dplreg::reference exists to prove that.
  bool parallel = true;
};

// Who fetched from whom, counted over the whole run. Node updates within a
// round only ever read round-t payloads from graph neighbors; tests pin
// that down with these counters.
struct AccessAudit {
  Eigen::MatrixXi fetch_counts;  // (receiver, sender), 0-based
  std::int64_t messages_posted = 0;
};

// Full record of one simulation: the adversary-observable published
// sequence plus the internal and projected states needed for audit replay.
struct Trajectory {
  int node_count = 0;
  int feature_dim = 0;
  int rounds = 0;

  // Indexed [t][i]: published/projected/noise for t in 0..T-1, internal
  // for t in 0..T.
  std::vector<std::vector<Vector>> published;
  std::vector<std::vector<Vector>> internal;
  std::vector<std::vector<Vector>> projected;
  std::vector<std::vector<Vector>> noise;

  std::uint64_t master_seed = 0;
  std::uint64_t structural_hash = 0;  // everything but the seed
  bool noise_disabled = false;
  AccessAudit access;
};

// Runs the T-round private consensus recursion: each node adds Laplace
// noise with scale v(t) to its state, publishes to neighbors, every
// receiver projects the payloads it sees, and the state update is
//   beta_i(t+1) = sum_{j in N_i} w_ij proj_j - alpha(t) grad L_i(proj_i)
// with the weighted sum accumulated in ascending node-id order (fixed for
// bit-exact determinism). Node i's noise comes from the stream
// (seed, kLaplaceNoise, i), consumed m draws per round.
// Throws ShapeMismatch; NonFiniteState reports the offending round.
Trajectory run_private(const data::NetworkDataset& d,
                       const topology::NetworkGraph& g,
                       const topology::WeightMatrix& w,
                       const schedules::ScheduleParams& p,
                       const projection::OmegaBall& region, int rounds,
                       const std::vector<Vector>& init, std::uint64_t seed,
                       const RunOptions& opts = {});

// The noise- and projection-free recursion the private run degenerates to:
//   beta_i(t+1) = sum_{j in N_i} w_ij beta_j(t) - alpha(t) grad L_i(beta_i(t)).
// published == projected == internal states for t < T.
Trajectory run_baseline(const data::NetworkDataset& d,
                        const topology::NetworkGraph& g,
                        const topology::WeightMatrix& w,
                        const schedules::ScheduleParams& p, int rounds,
                        const std::vector<Vector>& init,
                        const RunOptions& opts = {});

// Noise-free mean of the round-(t+1) publication given round t's published
// payloads: project everything, then apply the same update rule. Bit-exact
// against run_private's internal states (same kernels, same order); the
// audit relies on that to evaluate transition densities.
std::vector<Vector> replay_transition_mean(const data::NetworkDataset& d,
                                           const topology::WeightMatrix& w,
                                           const projection::OmegaBall& region,
                                           const schedules::ScheduleParams& p,
                                           const std::vector<Vector>& published_round,
                                           int t);

// CSV dump: columns round,node,kind,coord_0..coord_{m-1}; rows ordered by
// (round, node id, kind) with kinds internal < projected < published.
// Node ids are 1-based. Round T carries only internal rows.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Bit-level equality of all recorded state (not the access counters).
bool bitwise_equal(const Trajectory& a, const Trajectory& b);

// Fingerprint of everything that determines a run except the master seed.
std::uint64_t structural_fingerprint(const data::NetworkDataset& d,
                                     const topology::WeightMatrix& w,
                                     const schedules::ScheduleParams& p,
                                     const projection::OmegaBall* region,
                                     int rounds, bool with_noise,
                                     bool with_projection);

}  // namespace dplreg::engine

#endif  // DPLREG_ENGINE_HPP_
