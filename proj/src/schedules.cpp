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

#include "dplreg/schedules.hpp"

#include <cmath>

#include "dplreg/errors.hpp"

namespace dplreg::schedules {

void ScheduleParams::validate() const {
  if (!(c_alpha > 0) || !(d_alpha > 0) || !(e_alpha > 0)) {
    throw InvalidParams("step-size schedule requires c_alpha, d_alpha, e_alpha > 0");
  }
  if (!(c_v > 0) || !(d_v > 0) || !(e_v > 0)) {
    throw InvalidParams("noise schedule requires c_v, d_v, e_v > 0");
  }
}

double alpha(int t, const ScheduleParams& p) {
  return p.c_alpha / std::pow(static_cast<double>(t) + p.d_alpha, p.e_alpha);
}

double noise_scale(int t, const ScheduleParams& p) {
  return p.c_v / std::pow(static_cast<double>(t) + p.d_v, p.e_v);
}

std::string RegimeCheck::describe() const {
  std::string out;
  out += offsets_ok ? "(a) 1 < d_v+1 <= d_alpha: pass"
                    : "(a) 1 < d_v+1 <= d_alpha: FAIL";
  out += ratio_bounded ? "; (b) e_v <= e_alpha: pass"
                       : "; (b) e_v <= e_alpha: FAIL";
  out += ratio_summable ? "; (c) e_alpha - e_v > 1: pass"
                        : "; (c) e_alpha - e_v > 1: fail";
  return out;
}

RegimeCheck check_theorem1_regime(const ScheduleParams& p) {
  p.validate();
  RegimeCheck out;
  out.offsets_ok = (p.d_v + 1.0 > 1.0) && (p.d_v + 1.0 <= p.d_alpha);
  out.ratio_bounded = p.e_v <= p.e_alpha;
  out.ratio_summable = p.e_alpha - p.e_v > 1.0;
  return out;
}

void BudgetInputs::validate() const {
  if (rounds < 1) throw InvalidParams("budget requires T >= 1");
  if (feature_dim < 1 || node_count < 1 || max_rows < 1) {
    throw InvalidParams("budget requires m, k, n_M >= 1");
  }
  if (!(delta_x >= 0) || !(delta_y >= 0)) {
    throw InvalidParams("sensitivity bounds must be nonnegative");
  }
  if (!(b_omega > 0) || !std::isfinite(b_omega)) {
    throw InvalidParams("budget requires a finite positive B_Omega");
  }
}

namespace {

// 4 delta_x sqrt(m n_M) (delta_x B sqrt(k m) + delta_y), the t-independent
// factor shared by the per-step bound and the closed-form budget.
double sensitivity_factor(const BudgetInputs& b) {
  const double m = static_cast<double>(b.feature_dim);
  const double k = static_cast<double>(b.node_count);
  const double n_m = static_cast<double>(b.max_rows);
  return 4.0 * b.delta_x * std::sqrt(m * n_m) *
         (b.delta_x * b.b_omega * std::sqrt(k * m) + b.delta_y);
}

}  // namespace

double per_step_loss_bound(int t, const ScheduleParams& p,
                           const BudgetInputs& b) {
  p.validate();
  b.validate();
  return sensitivity_factor(b) * alpha(t, p) / noise_scale(t + 1, p);
}

double privacy_budget(const ScheduleParams& p, const BudgetInputs& b,
                      bool allow_regime_violation) {
  b.validate();
  const RegimeCheck regime = check_theorem1_regime(p);
  if (!regime.budget_preconditions_ok() && !allow_regime_violation) {
    throw RegimeViolation("closed-form budget preconditions fail: " +
                          regime.describe());
  }
  return sensitivity_factor(b) * (p.c_alpha / p.c_v) *
         static_cast<double>(b.rounds);
}

double per_step_bound_sum(const ScheduleParams& p, const BudgetInputs& b) {
  double acc = 0.0;
  for (int t = 0; t < b.rounds; ++t) acc += per_step_loss_bound(t, p, b);
  return acc;
}

}  // namespace dplreg::schedules
