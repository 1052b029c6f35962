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

#ifndef DPLREG_SCHEDULES_HPP_
#define DPLREG_SCHEDULES_HPP_

#include <string>

namespace dplreg::schedules {

// Power-law schedules: step size alpha(t) = c_alpha / (t + d_alpha)^e_alpha
// and noise scale v(t) = c_v / (t + d_v)^e_v.
struct ScheduleParams {
  double c_alpha = 1.0;
  double d_alpha = 2.0;
  double e_alpha = 1.0;
  double c_v = 1.0;
  double d_v = 1.0;
  double e_v = 1.0;

  // Throws InvalidParams unless all constants are positive.
  void validate() const;
};

double alpha(int t, const ScheduleParams& p);
double noise_scale(int t, const ScheduleParams& p);

// Preconditions of the closed-form privacy budget, reported separately:
//   (a) 1 < d_v + 1 <= d_alpha
//   (b) e_v <= e_alpha, so that every ratio alpha(t)/v(t+1) <= c_alpha/c_v
//   (c) e_alpha - e_v > 1, summability of the ratio (infinite-horizon claim)
// The budget formula needs (a) and (b); (c) is informational.
struct RegimeCheck {
  bool offsets_ok = false;
  bool ratio_bounded = false;
  bool ratio_summable = false;

  bool budget_preconditions_ok() const { return offsets_ok && ratio_bounded; }
  std::string describe() const;
};

RegimeCheck check_theorem1_regime(const ScheduleParams& p);

// Everything the budget formula consumes besides the schedules.
struct BudgetInputs {
  int rounds = 1;        // T
  int feature_dim = 1;   // m
  int node_count = 1;    // k
  int max_rows = 1;      // n_M = max_i n_i
  double delta_x = 0.0;  // spectral-norm bound on every X_i
  double delta_y = 0.0;  // Euclidean bound on every y_i
  double b_omega = 1.0;  // sup over the projection region of ||beta||

  void validate() const;
};

// Per-transition privacy-loss bound for the step t -> t+1:
//   eps_step(t) = 4 delta_x sqrt(m n_M) (delta_x B sqrt(k m) + delta_y)
//                 * alpha(t) / v(t+1).
double per_step_loss_bound(int t, const ScheduleParams& p,
                           const BudgetInputs& b);

// Closed-form T-step budget:
//   eps = 4 delta_x (c_alpha/c_v) T sqrt(m n_M) (delta_x B sqrt(k m) + delta_y).
// Throws RegimeViolation unless preconditions (a) and (b) hold; callers that
// want the number anyway (to report next to the tighter per-step sum) pass
// allow_regime_violation.
double privacy_budget(const ScheduleParams& p, const BudgetInputs& b,
                      bool allow_regime_violation = false);

// sum_{t=0}^{T-1} per_step_loss_bound(t); the tighter of the two totals.
double per_step_bound_sum(const ScheduleParams& p, const BudgetInputs& b);

}  // namespace dplreg::schedules

#endif  // DPLREG_SCHEDULES_HPP_
