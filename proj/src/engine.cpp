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

#include "dplreg/engine.hpp"

#include <cmath>
#include <cstring>
#include <ostream>
#include <string>
#include <utility>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::engine {

namespace {

// In-process transport for one synchronous round: payloads are posted under
// (sender, round) and may only be fetched by graph neighbors. Fetches are
// counted per (receiver, sender); each receiver touches only its own row of
// the counter matrix, so the parallel update loop needs no locking.
class RoundMailbox {
 public:
  explicit RoundMailbox(const topology::NetworkGraph& g)
      : slots_(g.node_count, nullptr),
        adjacent_(g.node_count, std::vector<char>(g.node_count, 0)) {
    for (int i = 0; i < g.node_count; ++i) {
      for (int j : g.neighbors[i]) adjacent_[i][j] = 1;
    }
  }

  void begin_round(int t) { round_ = t; }

  void post(int sender, int t, const Vector& payload) {
    if (t != round_) throw std::logic_error("post outside current round");
    slots_[sender] = &payload;
  }

  const Vector& fetch(int receiver, int sender, int t,
                      Eigen::MatrixXi& counts) const {
    if (t != round_) throw std::logic_error("fetch outside current round");
    if (!adjacent_[receiver][sender]) {
      throw std::logic_error("non-neighbor fetch blocked by transport");
    }
    counts(receiver, sender) += 1;
    return *slots_[sender];
  }

 private:
  std::vector<const Vector*> slots_;
  std::vector<std::vector<char>> adjacent_;
  int round_ = -1;
};

void check_shapes(const data::NetworkDataset& d,
                  const topology::NetworkGraph& g,
                  const topology::WeightMatrix& w, int rounds,
                  const std::vector<Vector>& init) {
  if (d.node_count() != g.node_count) {
    throw ShapeMismatch("dataset node count != graph node count");
  }
  if (w.node_count() != g.node_count || w.entries.cols() != g.node_count) {
    throw ShapeMismatch("weight matrix shape != node count");
  }
  if (rounds < 1) throw ShapeMismatch("round count must be >= 1");
  if (static_cast<int>(init.size()) != g.node_count) {
    throw ShapeMismatch("initial state count != node count");
  }
  for (const auto& v : init) {
    if (v.size() != d.feature_dim) {
      throw ShapeMismatch("initial state dimension != m");
    }
  }
}

bool all_finite(const std::vector<Vector>& states) {
  for (const auto& v : states) {
    if (!v.allFinite()) return false;
  }
  return true;
}

// One node's update from the round-t projected payloads: ascending-id
// weighted sum, then the gradient step at the node's own projection.
// Writes into `out` (preallocated, length m).
void node_update(const data::NetworkDataset& d, const topology::WeightMatrix& w,
                 const std::vector<int>& neighbor_ids, int i,
                 const std::vector<Vector>& proj, double step, Vector& out) {
  const int m = d.feature_dim;
  for (int c = 0; c < m; ++c) out[c] = 0.0;
  for (int j : neighbor_ids) {
    const double wij = w.entries(i, j);
    const Vector& pj = proj[j];
    for (int c = 0; c < m; ++c) out[c] += wij * pj[c];
  }
  const Vector grad = data::local_gradient(d.locals[i], proj[i]);
  for (int c = 0; c < m; ++c) out[c] -= step * grad[c];
}

Trajectory run_rounds(const data::NetworkDataset& d,
                      const topology::NetworkGraph& g,
                      const topology::WeightMatrix& w,
                      const schedules::ScheduleParams& p,
                      const projection::OmegaBall* region, int rounds,
                      const std::vector<Vector>& init, std::uint64_t seed,
                      bool with_noise, bool with_projection, bool parallel) {
  p.validate();
  check_shapes(d, g, w, rounds, init);
  if (with_projection && region == nullptr) {
    throw ShapeMismatch("projection requested without a region");
  }
  if (with_projection && region->center.size() != d.feature_dim) {
    throw ShapeMismatch("region dimension != m");
  }

  const int k = g.node_count;
  const int m = d.feature_dim;

  Trajectory traj;
  traj.node_count = k;
  traj.feature_dim = m;
  traj.rounds = rounds;
  traj.master_seed = seed;
  traj.noise_disabled = !with_noise;
  traj.structural_hash = structural_fingerprint(d, w, p, region, rounds,
                                                with_noise, with_projection);
  traj.published.resize(rounds, std::vector<Vector>(k));
  traj.projected.resize(rounds, std::vector<Vector>(k));
  traj.internal.resize(rounds + 1, std::vector<Vector>(k));
  if (with_noise) traj.noise.resize(rounds, std::vector<Vector>(k));
  traj.access.fetch_counts = Eigen::MatrixXi::Zero(k, k);
  for (int t = 0; t < rounds; ++t) {
    for (int i = 0; i < k; ++i) {
      traj.published[t][i].resize(m);
      traj.projected[t][i].resize(m);
      traj.internal[t + 1][i].resize(m);
      if (with_noise) traj.noise[t][i].resize(m);
    }
  }
  traj.internal[0] = init;

  std::vector<rng::RngStream> noise_streams;
  noise_streams.reserve(k);
  for (int i = 0; i < k; ++i) {
    noise_streams.emplace_back(seed, rng::Purpose::kLaplaceNoise, i + 1);
  }

  RoundMailbox mailbox(g);
  int diverged_round = -1;

  // One parallel region for the whole run; the implicit barriers of the
  // worksharing loops realize the round barriers. Exceptions must not
  // cross the region, so divergence is flagged and thrown afterwards.
#pragma omp parallel if (parallel)
  {
    std::vector<Vector> proj(k, Vector(m));

    for (int t = 0; t < rounds && diverged_round < 0; ++t) {
      const double v_t = schedules::noise_scale(t, p);
      const double step = schedules::alpha(t, p);

#pragma omp single
      mailbox.begin_round(t);

      // Publish: state plus per-node Laplace noise. Each node's stream
      // advances one round's worth of draws regardless of scheduling.
#pragma omp for schedule(static)
      for (int i = 0; i < k; ++i) {
        if (with_noise) {
          Vector& omega = traj.noise[t][i];
          for (int c = 0; c < m; ++c) {
            omega[c] = noise_streams[i].next_laplace(v_t);
          }
          for (int c = 0; c < m; ++c) {
            traj.published[t][i][c] = traj.internal[t][i][c] + omega[c];
          }
        } else {
          traj.published[t][i] = traj.internal[t][i];
        }
        mailbox.post(i, t, traj.published[t][i]);
      }

#pragma omp single
      {
        traj.access.messages_posted += k;
        if (!all_finite(traj.published[t])) diverged_round = t;
      }
      if (diverged_round >= 0) continue;

      // Update: every receiver projects the payloads it fetched (its own
      // included) and applies the consensus/gradient step.
#pragma omp for schedule(static)
      for (int i = 0; i < k; ++i) {
        for (int j : g.neighbors[i]) {
          const Vector& payload =
              mailbox.fetch(i, j, t, traj.access.fetch_counts);
          if (with_projection) {
            proj[j] = projection::project(*region, payload);
          } else {
            proj[j] = payload;
          }
        }
        // Each node records the projection of its own publication.
        traj.projected[t][i] = proj[i];
        node_update(d, w, g.neighbors[i], i, proj, step,
                    traj.internal[t + 1][i]);
      }

#pragma omp single
      {
        if (!all_finite(traj.internal[t + 1])) diverged_round = t;
      }
    }
  }

  if (diverged_round >= 0) {
    throw NonFiniteState("state diverged to a non-finite value at round " +
                         std::to_string(diverged_round));
  }
  return traj;
}

}  // namespace

Trajectory run_private(const data::NetworkDataset& d,
                       const topology::NetworkGraph& g,
                       const topology::WeightMatrix& w,
                       const schedules::ScheduleParams& p,
                       const projection::OmegaBall& region, int rounds,
                       const std::vector<Vector>& init, std::uint64_t seed,
                       const RunOptions& opts) {
  return run_rounds(d, g, w, p, &region, rounds, init, seed, !opts.zero_noise,
                    !opts.skip_projection, opts.parallel);
}

Trajectory run_baseline(const data::NetworkDataset& d,
                        const topology::NetworkGraph& g,
                        const topology::WeightMatrix& w,
                        const schedules::ScheduleParams& p, int rounds,
                        const std::vector<Vector>& init,
                        const RunOptions& opts) {
  return run_rounds(d, g, w, p, nullptr, rounds, init, /*seed=*/0,
                    /*with_noise=*/false, /*with_projection=*/false,
                    opts.parallel);
}

std::vector<Vector> replay_transition_mean(
    const data::NetworkDataset& d, const topology::WeightMatrix& w,
    const projection::OmegaBall& region, const schedules::ScheduleParams& p,
    const std::vector<Vector>& published_round, int t) {
  const int k = d.node_count();
  if (w.node_count() != k || static_cast<int>(published_round.size()) != k) {
    throw ShapeMismatch("replay round shape != node count");
  }
  for (const auto& v : published_round) {
    if (v.size() != d.feature_dim) {
      throw ShapeMismatch("replay payload dimension != m");
    }
  }

  std::vector<Vector> proj(k);
  for (int j = 0; j < k; ++j) {
    proj[j] = projection::project(region, published_round[j]);
  }
  const double step = schedules::alpha(t, p);

  // The weight support is the neighbor set (a validated W is positive
  // exactly there), so scanning j ascending reproduces the engine's
  // summation order term for term.
  std::vector<Vector> mean(k, Vector(d.feature_dim));
  std::vector<int> support;
  for (int i = 0; i < k; ++i) {
    support.clear();
    for (int j = 0; j < k; ++j) {
      if (w.entries(i, j) != 0.0) support.push_back(j);
    }
    node_update(d, w, support, i, proj, step, mean[i]);
  }
  return mean;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "round,node,kind";
  for (int c = 0; c < traj.feature_dim; ++c) out << ",coord_" << c;
  out << "\n";
  const auto row = [&](int t, int i, const char* kind, const Vector& v) {
    out << t << "," << (i + 1) << "," << kind;
    for (int c = 0; c < traj.feature_dim; ++c) {
      out << "," << io::fmt_double(v[c]);
    }
    out << "\n";
  };
  for (int t = 0; t <= traj.rounds; ++t) {
    for (int i = 0; i < traj.node_count; ++i) {
      row(t, i, "internal", traj.internal[t][i]);
      if (t < traj.rounds) {
        row(t, i, "projected", traj.projected[t][i]);
        row(t, i, "published", traj.published[t][i]);
      }
    }
  }
}

namespace {

bool arrays_equal(const std::vector<std::vector<Vector>>& a,
                  const std::vector<std::vector<Vector>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].size() != b[t].size()) return false;
    for (std::size_t i = 0; i < a[t].size(); ++i) {
      if (a[t][i].size() != b[t][i].size()) return false;
      if (std::memcmp(a[t][i].data(), b[t][i].data(),
                      sizeof(double) * a[t][i].size()) != 0) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool bitwise_equal(const Trajectory& a, const Trajectory& b) {
  return a.node_count == b.node_count && a.feature_dim == b.feature_dim &&
         a.rounds == b.rounds && arrays_equal(a.published, b.published) &&
         arrays_equal(a.internal, b.internal) &&
         arrays_equal(a.projected, b.projected) &&
         arrays_equal(a.noise, b.noise);
}

std::uint64_t structural_fingerprint(const data::NetworkDataset& d,
                                     const topology::WeightMatrix& w,
                                     const schedules::ScheduleParams& p,
                                     const projection::OmegaBall* region,
                                     int rounds, bool with_noise,
                                     bool with_projection) {
  io::Fnv1a h;
  h.update_int(d.node_count());
  h.update_int(d.feature_dim);
  h.update_int(rounds);
  h.update_int(with_noise ? 1 : 0);
  h.update_int(with_projection ? 1 : 0);
  h.update_double(p.c_alpha);
  h.update_double(p.d_alpha);
  h.update_double(p.e_alpha);
  h.update_double(p.c_v);
  h.update_double(p.d_v);
  h.update_double(p.e_v);
  if (region != nullptr && with_projection) {
    for (Eigen::Index c = 0; c < region->center.size(); ++c) {
      h.update_double(region->center[c]);
    }
    h.update_double(region->radius);
  }
  for (int i = 0; i < w.node_count(); ++i) {
    for (int j = 0; j < w.node_count(); ++j) h.update_double(w.entries(i, j));
  }
  h.update_int(static_cast<long long>(data::dataset_hash(d)));
  return h.value();
}

}  // namespace dplreg::engine
