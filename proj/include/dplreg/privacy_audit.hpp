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

#ifndef DPLREG_PRIVACY_AUDIT_HPP_
#define DPLREG_PRIVACY_AUDIT_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dplreg/engine.hpp"
#include "dplreg/schedules.hpp"

namespace dplreg::audit {

// Indexing convention used throughout the audit: entry t refers to the
// release of round t. Entry 0 is pinned to zero (the initial publication
// is data-independent); entry t >= 1 carries the transition t-1 -> t,
// whose proof-side bound is per_step_loss_bound(t-1) (the noise in that
// release has scale v(t)).
struct PrivacyAuditReport {
  std::vector<double> per_step_realized;  // max over trials, length T
  std::vector<double> per_step_bound;     // length T, entry 0 = 0
  double total_realized = 0.0;   // max over trials of the per-run sum
  double budget_formula = 0.0;   // closed-form T-step budget
  double budget_sum = 0.0;       // sum_{t=0}^{T-1} eps_step(t)
  bool regime_ok = false;        // budget preconditions (a) and (b)
  bool per_step_pass = false;
  bool total_pass = false;

  bool pass() const { return per_step_pass && total_pass; }
};

// Realized privacy loss of a recorded trajectory against an adjacent
// dataset: for each observed transition, the absolute log-ratio of the
// Laplace transition densities with means replayed under d and d_adj from
// the same published round. Returns T entries in the convention above.
// Throws NonAuditable for noise-free trajectories, NotAdjacent when the
// datasets differ at more than one node, ShapeMismatch on inconsistent
// shapes.
std::vector<double> realized_privacy_loss(const engine::Trajectory& traj,
                                          const data::NetworkDataset& d,
                                          const data::NetworkDataset& d_adj,
                                          const topology::WeightMatrix& w,
                                          const projection::OmegaBall& region,
                                          const schedules::ScheduleParams& p);

// Aggregates trials recorded under d: per-step maxima and the worst
// per-run total, compared against the per-step bounds and both budget
// totals. When the schedule regime violates the closed-form preconditions
// the total is compared against the per-step sum only. Throws
// ConfigMismatch when the trajectories disagree structurally.
PrivacyAuditReport audit(std::span<const engine::Trajectory> trials,
                         const data::NetworkDataset& d,
                         const data::NetworkDataset& d_adj,
                         const topology::WeightMatrix& w,
                         const projection::OmegaBall& region,
                         const schedules::ScheduleParams& p,
                         const schedules::BudgetInputs& b);

// Empirical check of the first data-dependent release: histograms its
// coordinate marginals under d and d_adj and compares the worst guarded
// cell ratio against exp(eps_step(0)). Guards are 99% Wilson intervals
// (numerator lower bound over denominator upper bound), so a pass is a
// high-confidence statement. Cells are `bins` equal-width intervals over
// the central 99% of the pooled draws plus two tail cells. Throws
// InsufficientTrials when any cell is too thin to judge (< 25 counts).
struct DpCheckReport {
  double eps_step0 = 0.0;
  double max_guarded_ratio = 0.0;
  int cells = 0;
  long long trials = 0;
  bool pass = false;
};

DpCheckReport monte_carlo_dp_check(const data::NetworkDataset& d,
                                   const data::NetworkDataset& d_adj,
                                   const topology::NetworkGraph& g,
                                   const topology::WeightMatrix& w,
                                   const schedules::ScheduleParams& p,
                                   const projection::OmegaBall& region,
                                   long long trials, int bins,
                                   std::uint64_t seed,
                                   const std::vector<Vector>& init);

// CSV: `t,realized_max,bound,margin` rows, then a `# summary ...` line.
void write_audit_csv(std::ostream& out, const PrivacyAuditReport& report);

}  // namespace dplreg::audit

#endif  // DPLREG_PRIVACY_AUDIT_HPP_
