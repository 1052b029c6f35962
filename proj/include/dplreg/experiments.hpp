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

#ifndef DPLREG_EXPERIMENTS_HPP_
#define DPLREG_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dplreg/engine.hpp"

namespace dplreg::experiments {

// Summed estimation error of the published states against the exact
// solution: values[t] = sum_i ||published_i(t) - beta*||. When averaged
// over trials, stderr_ carries the pointwise standard error (empty for a
// single series).
struct ErrorSeries {
  std::vector<double> values;
  std::vector<double> stderr_;
};

ErrorSeries error_trajectory(const engine::Trajectory& traj,
                             const Vector& beta_star);

// Everything one simulation needs; shared by the trial runner and the CLI.
struct RunSpec {
  const data::NetworkDataset* dataset = nullptr;
  const topology::NetworkGraph* graph = nullptr;
  const topology::WeightMatrix* weights = nullptr;
  schedules::ScheduleParams schedule;
  projection::OmegaBall region;
  int rounds = 1;
  std::vector<Vector> init;
  engine::RunOptions options;
  bool baseline = false;
};

// Pointwise mean of R independent error trajectories, one per seed in
// `seeds` (the first R entries are used; a fixed prefix therefore always
// reproduces the same mean). Trials run in parallel; the reduction order
// is the seed order.
ErrorSeries mean_error_over_trials(const RunSpec& spec, int trial_count,
                                   std::span<const std::uint64_t> seeds,
                                   const Vector& beta_star);

std::vector<std::uint64_t> derive_trial_seeds(std::uint64_t master_seed,
                                              int trial_count);

// Fits C = max_{fit window} values[t]/g(t) with g(t) = t when e_alpha = 1
// and g(t) = exp(t^{1-e_alpha}) otherwise, then requires
// values[t] <= slack * C * g(t) across the test window. Windows are
// inclusive round ranges; the upper ends clamp to the series length.
struct EnvelopeResult {
  bool pass = false;
  double fitted_c = 0.0;
};

EnvelopeResult growth_envelope_check(const ErrorSeries& series, double e_alpha,
                                     int fit_lo, int fit_hi, int test_lo,
                                     int test_hi, double slack);

// CSV: `round,value[,stderr]`; the stderr column appears when present.
void write_series_csv(std::ostream& out, const ErrorSeries& series);

}  // namespace dplreg::experiments

#endif  // DPLREG_EXPERIMENTS_HPP_
