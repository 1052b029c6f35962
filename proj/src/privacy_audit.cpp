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

#include "dplreg/privacy_audit.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <ostream>
#include <string>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::audit {

namespace {

constexpr double kVerdictTol = 1e-9;

// Returns the 0-based index of the single node where the datasets differ,
// or -1 when they are identical. Throws on shape mismatch or when more
// than one node differs.
int differing_node(const data::NetworkDataset& a,
                   const data::NetworkDataset& b) {
  if (a.node_count() != b.node_count() || a.feature_dim != b.feature_dim) {
    throw ShapeMismatch("adjacent datasets must share k and m");
  }
  int found = -1;
  for (int i = 0; i < a.node_count(); ++i) {
    const auto& la = a.locals[i];
    const auto& lb = b.locals[i];
    if (la.rows() != lb.rows()) {
      throw ShapeMismatch("adjacent datasets must keep per-node row counts");
    }
    const bool same = (la.design.array() == lb.design.array()).all() &&
                      (la.labels.array() == lb.labels.array()).all();
    if (!same) {
      if (found >= 0) {
        throw NotAdjacent("datasets differ at more than one node");
      }
      found = i;
    }
  }
  return found;
}

void check_certified(const data::NetworkDataset& d,
                     const schedules::BudgetInputs& b, const char* which) {
  const auto params = data::adjacency_params(d);
  const double tol = 1.0 + 1e-12;
  if (params.delta_x > b.delta_x * tol || params.delta_y > b.delta_y * tol) {
    throw NotAdjacent(std::string(which) +
                      " dataset exceeds the certified (delta_X, delta_y)");
  }
}

}  // namespace

std::vector<double> realized_privacy_loss(const engine::Trajectory& traj,
                                          const data::NetworkDataset& d,
                                          const data::NetworkDataset& d_adj,
                                          const topology::WeightMatrix& w,
                                          const projection::OmegaBall& region,
                                          const schedules::ScheduleParams& p) {
  if (traj.noise_disabled) {
    throw NonAuditable(
        "noise-free trajectory has a degenerate transition density");
  }
  if (traj.node_count != d.node_count() || traj.feature_dim != d.feature_dim) {
    throw ShapeMismatch("trajectory shape does not match the dataset");
  }
  differing_node(d, d_adj);  // structural adjacency (throws otherwise)

  const int rounds = traj.rounds;
  std::vector<double> losses(rounds, 0.0);

  // Transition t -> t+1: replay both means from the observed round t and
  // evaluate the stacked Laplace log-densities at the observed round t+1.
  // Entry 0 stays zero: the initial release does not touch the data.
#pragma omp parallel for schedule(static)
  for (int t = 0; t < rounds - 1; ++t) {
    const auto mean = engine::replay_transition_mean(
        d, w, region, p, traj.published[t], t);
    const auto mean_adj = engine::replay_transition_mean(
        d_adj, w, region, p, traj.published[t], t);
    const double v_next = schedules::noise_scale(t + 1, p);
    double log_ratio = 0.0;
    for (int i = 0; i < traj.node_count; ++i) {
      log_ratio +=
          rng::laplace_log_density(traj.published[t + 1][i] - mean[i], v_next) -
          rng::laplace_log_density(traj.published[t + 1][i] - mean_adj[i],
                                   v_next);
    }
    losses[t + 1] = std::abs(log_ratio);
  }
  return losses;
}

PrivacyAuditReport audit(std::span<const engine::Trajectory> trials,
                         const data::NetworkDataset& d,
                         const data::NetworkDataset& d_adj,
                         const topology::WeightMatrix& w,
                         const projection::OmegaBall& region,
                         const schedules::ScheduleParams& p,
                         const schedules::BudgetInputs& b) {
  if (trials.empty()) throw ConfigMismatch("audit needs at least one trial");
  const auto& first = trials.front();
  for (const auto& traj : trials) {
    if (traj.structural_hash != first.structural_hash ||
        traj.rounds != first.rounds) {
      throw ConfigMismatch("audit trials were recorded under different configs");
    }
  }
  if (b.rounds != first.rounds) {
    throw ConfigMismatch("budget inputs disagree with the trajectory length");
  }
  check_certified(d, b, "base");
  check_certified(d_adj, b, "adjacent");

  const int rounds = first.rounds;
  const int n_trials = static_cast<int>(trials.size());
  std::vector<std::vector<double>> losses(n_trials);

  // Exceptions must not unwind through the parallel loop; capture the
  // first one and rethrow afterwards.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n_trials; ++r) {
    try {
      losses[r] = realized_privacy_loss(trials[r], d, d_adj, w, region, p);
    } catch (...) {
#pragma omp critical(dplreg_audit_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  PrivacyAuditReport report;
  report.per_step_realized.assign(rounds, 0.0);
  for (int r = 0; r < n_trials; ++r) {
    double run_total = 0.0;
    for (int t = 0; t < rounds; ++t) {
      report.per_step_realized[t] =
          std::max(report.per_step_realized[t], losses[r][t]);
      run_total += losses[r][t];
    }
    report.total_realized = std::max(report.total_realized, run_total);
  }

  report.per_step_bound.assign(rounds, 0.0);
  for (int t = 1; t < rounds; ++t) {
    report.per_step_bound[t] = schedules::per_step_loss_bound(t - 1, p, b);
  }
  report.budget_sum = schedules::per_step_bound_sum(p, b);
  report.budget_formula =
      schedules::privacy_budget(p, b, /*allow_regime_violation=*/true);
  report.regime_ok =
      schedules::check_theorem1_regime(p).budget_preconditions_ok();

  report.per_step_pass = true;
  for (int t = 0; t < rounds; ++t) {
    if (report.per_step_realized[t] > report.per_step_bound[t] + kVerdictTol) {
      report.per_step_pass = false;
    }
  }
  const double total_budget =
      report.regime_ok ? std::min(report.budget_formula, report.budget_sum)
                       : report.budget_sum;
  report.total_pass = report.total_realized <= total_budget + kVerdictTol;
  return report;
}

namespace {

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

WilsonInterval wilson_99(long long count, long long n) {
  // Wilson score interval, z = Phi^{-1}(0.995).
  constexpr double z = 2.5758293035489004;
  const double nn = static_cast<double>(n);
  const double p_hat = static_cast<double>(count) / nn;
  const double z2n = z * z / nn;
  const double denom = 1.0 + z2n;
  const double center = (p_hat + z2n / 2.0) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2n / (4.0 * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace

DpCheckReport monte_carlo_dp_check(const data::NetworkDataset& d,
                                   const data::NetworkDataset& d_adj,
                                   const topology::NetworkGraph& g,
                                   const topology::WeightMatrix& w,
                                   const schedules::ScheduleParams& p,
                                   const projection::OmegaBall& region,
                                   long long trials, int bins,
                                   std::uint64_t seed,
                                   const std::vector<Vector>& init) {
  if (trials < 10000) {
    throw InsufficientTrials("Monte Carlo check needs at least 10^4 trials");
  }
  if (bins < 2) throw InvalidParams("Monte Carlo check needs at least 2 bins");
  differing_node(d, d_adj);
  p.validate();
  const int k = d.node_count();
  const int m = d.feature_dim;
  if (static_cast<int>(init.size()) != k) {
    throw ShapeMismatch("initial state count != node count");
  }

  // Conditioning release: one noisy publication of the initial states,
  // shared by both mechanisms.
  std::vector<Vector> published0(k);
  const double v0 = schedules::noise_scale(0, p);
  for (int i = 0; i < k; ++i) {
    rng::RngStream stream(seed, rng::Purpose::kInitialRelease, i + 1);
    published0[i] = init[i] + rng::sample_laplace_vector(m, v0, stream);
  }

  const auto mean_d = engine::replay_transition_mean(d, w, region, p,
                                                     published0, 0);
  const auto mean_adj = engine::replay_transition_mean(d_adj, w, region, p,
                                                       published0, 0);
  const double v1 = schedules::noise_scale(1, p);

  schedules::BudgetInputs b;
  b.rounds = 1;
  b.feature_dim = m;
  b.node_count = k;
  b.max_rows = std::max(d.max_rows(), d_adj.max_rows());
  const auto pa = data::adjacency_params(d);
  const auto pb = data::adjacency_params(d_adj);
  b.delta_x = std::max(pa.delta_x, pb.delta_x);
  b.delta_y = std::max(pa.delta_y, pb.delta_y);
  b.b_omega = region.sup_norm_bound();

  DpCheckReport report;
  report.eps_step0 = schedules::per_step_loss_bound(0, p, b);
  report.trials = trials;
  report.cells = bins + 2;

  const int coords = k * m;
  const rng::RngStream stream_d(seed, rng::Purpose::kMonteCarlo, 1);
  const rng::RngStream stream_adj(seed, rng::Purpose::kMonteCarlo, 2);

  double max_ratio = 0.0;
  std::vector<double> samples_d(trials), samples_adj(trials);
  for (int c = 0; c < coords; ++c) {
    const double mu_d = mean_d[c / m][c % m];
    const double mu_adj = mean_adj[c / m][c % m];

    // Counter-addressed draws: trial r's coordinate c is draw r*coords+c,
    // so the loop parallelizes without changing the sample.
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < trials; ++r) {
      const std::uint64_t index =
          static_cast<std::uint64_t>(r) * coords + c;
      samples_d[r] =
          mu_d + rng::laplace_from_unit(stream_d.unit_at(index), v1);
      samples_adj[r] =
          mu_adj + rng::laplace_from_unit(stream_adj.unit_at(index), v1);
    }

    // Equal-width cells over the central 99% of the pooled draws, plus the
    // two tails as their own cells.
    std::vector<double> pooled;
    pooled.reserve(2 * trials);
    pooled.insert(pooled.end(), samples_d.begin(), samples_d.end());
    pooled.insert(pooled.end(), samples_adj.begin(), samples_adj.end());
    std::sort(pooled.begin(), pooled.end());
    const auto quantile = [&](double q) {
      const auto idx = static_cast<std::size_t>(q * (pooled.size() - 1));
      return pooled[idx];
    };
    const double lo = quantile(0.005);
    const double hi = quantile(0.995);
    if (!(hi > lo)) throw InsufficientTrials("degenerate sample range");
    const double width = (hi - lo) / bins;

    std::vector<long long> counts_d(bins + 2, 0), counts_adj(bins + 2, 0);
    const auto cell_of = [&](double x) {
      if (x < lo) return 0;
      if (x >= hi) return bins + 1;
      const int cell = 1 + static_cast<int>((x - lo) / width);
      return std::min(cell, bins);
    };
    for (long long r = 0; r < trials; ++r) {
      ++counts_d[cell_of(samples_d[r])];
      ++counts_adj[cell_of(samples_adj[r])];
    }

    for (int cell = 0; cell < bins + 2; ++cell) {
      if (counts_d[cell] < 25 || counts_adj[cell] < 25) {
        throw InsufficientTrials(
            "cell " + std::to_string(cell) + " has fewer than 25 counts; "
            "increase trials or decrease bins");
      }
      const auto wd = wilson_99(counts_d[cell], trials);
      const auto wa = wilson_99(counts_adj[cell], trials);
      max_ratio = std::max(max_ratio, wd.lower / wa.upper);
      max_ratio = std::max(max_ratio, wa.lower / wd.upper);
    }
  }

  report.max_guarded_ratio = max_ratio;
  report.pass = max_ratio <= std::exp(report.eps_step0) * (1.0 + 1e-12);
  return report;
}

void write_audit_csv(std::ostream& out, const PrivacyAuditReport& report) {
  out << "t,realized_max,bound,margin\n";
  for (std::size_t t = 0; t < report.per_step_realized.size(); ++t) {
    const double realized = report.per_step_realized[t];
    const double bound = report.per_step_bound[t];
    out << t << "," << io::fmt_double(realized) << "," << io::fmt_double(bound)
        << "," << io::fmt_double(bound - realized) << "\n";
  }
  out << "# summary epsilon_formula=" << io::fmt_double(report.budget_formula)
      << " epsilon_sum=" << io::fmt_double(report.budget_sum)
      << " total_realized=" << io::fmt_double(report.total_realized)
      << " verdict=" << (report.pass() ? "pass" : "fail")
      << " regime=" << (report.regime_ok ? "ok" : "violated") << "\n";
}

}  // namespace dplreg::audit
