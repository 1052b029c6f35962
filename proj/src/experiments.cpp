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

#include "dplreg/experiments.hpp"

#include <cmath>
#include <exception>
#include <ostream>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::experiments {

ErrorSeries error_trajectory(const engine::Trajectory& traj,
                             const Vector& beta_star) {
  if (beta_star.size() != traj.feature_dim) {
    throw ShapeMismatch("beta* dimension != trajectory feature dimension");
  }
  ErrorSeries series;
  series.values.resize(traj.rounds);
  for (int t = 0; t < traj.rounds; ++t) {
    double acc = 0.0;
    for (int i = 0; i < traj.node_count; ++i) {
      acc += (traj.published[t][i] - beta_star).norm();
    }
    series.values[t] = acc;
  }
  return series;
}

std::vector<std::uint64_t> derive_trial_seeds(std::uint64_t master_seed,
                                              int trial_count) {
  std::vector<std::uint64_t> seeds(trial_count);
  for (int r = 0; r < trial_count; ++r) {
    seeds[r] = rng::derive_seed(
        rng::derive_seed(master_seed,
                         static_cast<std::uint64_t>(rng::Purpose::kTrial)),
        static_cast<std::uint64_t>(r));
  }
  return seeds;
}

namespace {

engine::Trajectory run_spec(const RunSpec& spec, std::uint64_t seed) {
  if (spec.baseline) {
    return engine::run_baseline(*spec.dataset, *spec.graph, *spec.weights,
                                spec.schedule, spec.rounds, spec.init,
                                spec.options);
  }
  return engine::run_private(*spec.dataset, *spec.graph, *spec.weights,
                             spec.schedule, spec.region, spec.rounds,
                             spec.init, seed, spec.options);
}

}  // namespace

ErrorSeries mean_error_over_trials(const RunSpec& spec, int trial_count,
                                   std::span<const std::uint64_t> seeds,
                                   const Vector& beta_star) {
  if (trial_count < 1) throw InvalidParams("trial count must be >= 1");
  if (static_cast<int>(seeds.size()) < trial_count) {
    throw InvalidParams("seed list shorter than the trial count");
  }

  std::vector<std::vector<double>> per_trial(trial_count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (spec.options.parallel)
  for (int r = 0; r < trial_count; ++r) {
    try {
      // The engine's node loop stays serial inside trial parallelism.
      RunSpec local = spec;
      local.options.parallel = false;
      const auto traj = run_spec(local, seeds[r]);
      per_trial[r] = error_trajectory(traj, beta_star).values;
    } catch (...) {
#pragma omp critical(dplreg_trials_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const int rounds = static_cast<int>(per_trial[0].size());
  ErrorSeries out;
  out.values.assign(rounds, 0.0);
  for (int r = 0; r < trial_count; ++r) {
    for (int t = 0; t < rounds; ++t) out.values[t] += per_trial[r][t];
  }
  for (int t = 0; t < rounds; ++t) out.values[t] /= trial_count;

  if (trial_count > 1) {
    out.stderr_.assign(rounds, 0.0);
    for (int t = 0; t < rounds; ++t) {
      double ss = 0.0;
      for (int r = 0; r < trial_count; ++r) {
        const double diff = per_trial[r][t] - out.values[t];
        ss += diff * diff;
      }
      out.stderr_[t] =
          std::sqrt(ss / (trial_count - 1)) / std::sqrt(trial_count);
    }
  }
  return out;
}

EnvelopeResult growth_envelope_check(const ErrorSeries& series, double e_alpha,
                                     int fit_lo, int fit_hi, int test_lo,
                                     int test_hi, double slack) {
  if (!(e_alpha > 0.0) || !(e_alpha <= 1.0)) {
    throw InvalidParams("envelope check requires 0 < e_alpha <= 1");
  }
  if (!(slack >= 1.0)) throw InvalidParams("envelope slack must be >= 1");
  const int last = static_cast<int>(series.values.size()) - 1;
  fit_hi = std::min(fit_hi, last);
  test_hi = std::min(test_hi, last);
  if (fit_lo < 1 || fit_lo > fit_hi || test_lo > test_hi || test_lo < 1 ||
      fit_hi > test_lo) {
    throw EmptyWindow("fit window must precede a nonempty test window");
  }

  const auto envelope = [e_alpha](int t) {
    if (e_alpha == 1.0) return static_cast<double>(t);
    return std::exp(std::pow(static_cast<double>(t), 1.0 - e_alpha));
  };

  EnvelopeResult result;
  for (int t = fit_lo; t <= fit_hi; ++t) {
    result.fitted_c = std::max(result.fitted_c, series.values[t] / envelope(t));
  }
  result.pass = true;
  for (int t = test_lo; t <= test_hi; ++t) {
    if (series.values[t] > slack * result.fitted_c * envelope(t)) {
      result.pass = false;
      break;
    }
  }
  return result;
}

void write_series_csv(std::ostream& out, const ErrorSeries& series) {
  const bool with_stderr = !series.stderr_.empty();
  out << (with_stderr ? "round,value,stderr\n" : "round,value\n");
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    out << t << "," << io::fmt_double(series.values[t]);
    if (with_stderr) out << "," << io::fmt_double(series.stderr_[t]);
    out << "\n";
  }
}

}  // namespace dplreg::experiments
