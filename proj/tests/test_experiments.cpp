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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "dplreg/errors.hpp"
#include "dplreg/experiments.hpp"
#include "dplreg/rng.hpp"

using namespace dplreg;
using experiments::ErrorSeries;

namespace {

engine::Trajectory fake_trajectory(
    const std::vector<std::vector<Vector>>& published) {
  engine::Trajectory traj;
  traj.rounds = static_cast<int>(published.size());
  traj.node_count = static_cast<int>(published[0].size());
  traj.feature_dim = static_cast<int>(published[0][0].size());
  traj.published = published;
  traj.internal.resize(traj.rounds + 1,
                       std::vector<Vector>(traj.node_count,
                                           Vector::Zero(traj.feature_dim)));
  traj.projected = published;
  return traj;
}

struct World {
  topology::NetworkGraph graph;
  topology::WeightMatrix weights;
  data::NetworkDataset dataset;
  Vector beta_star;
  experiments::RunSpec spec;
};

// The spec points into the world, so the world lives on the heap.
std::unique_ptr<World> make_world(int k, int m, int rows,
                                  std::uint64_t seed) {
  auto world = std::make_unique<World>();
  world->graph = topology::make_ring(k);
  world->weights = topology::metropolis_weights(world->graph);
  world->dataset = data::generate_synthetic(k, std::vector<int>(k, rows), m,
                                            Vector::Ones(m), 0.1, 1.0, seed);
  const auto [x, y] = data::stack(world->dataset);
  world->beta_star = data::closed_form_solution(x, y);
  world->spec.dataset = &world->dataset;
  world->spec.graph = &world->graph;
  world->spec.weights = &world->weights;
  world->spec.schedule = {0.5, 2.0, 1.0, 0.5, 1.0, 1.0};
  world->spec.region = {Vector::Zero(m), 5.0};
  world->spec.rounds = 50;
  world->spec.init.assign(k, Vector::Zero(m));
  return world;
}

}  // namespace

TEST_CASE("error series values") {
  Vector beta_star(1);
  beta_star << 2.0;

  // All nodes at the solution: identically zero.
  Vector at(1);
  at << 2.0;
  const auto zero_traj = fake_trajectory({{at, at}, {at, at}});
  const auto zeros = experiments::error_trajectory(zero_traj, beta_star);
  for (double v : zeros.values) CHECK(v == 0.0);

  // k = 2, published at beta* +- 1: the summed error is 2.
  Vector up(1), down(1);
  up << 3.0;
  down << 1.0;
  const auto traj = fake_trajectory({{up, down}});
  const auto series = experiments::error_trajectory(traj, beta_star);
  CHECK(series.values[0] == doctest::Approx(2.0));

  // Additivity against per-node series.
  const auto solo_up = experiments::error_trajectory(fake_trajectory({{up}}),
                                                     beta_star);
  const auto solo_down = experiments::error_trajectory(
      fake_trajectory({{down}}), beta_star);
  CHECK(series.values[0] ==
        doctest::Approx(solo_up.values[0] + solo_down.values[0]));

  CHECK_THROWS_AS(experiments::error_trajectory(traj, Vector::Zero(2)),
                  ShapeMismatch);
}

TEST_CASE("error series is invariant under node relabeling") {
  rng::RngStream s(5, rng::Purpose::kTest);
  Vector a(2), b(2), c(2), beta_star(2);
  for (int i = 0; i < 2; ++i) {
    a[i] = s.next_normal();
    b[i] = s.next_normal();
    c[i] = s.next_normal();
    beta_star[i] = s.next_normal();
  }
  const auto original = experiments::error_trajectory(
      fake_trajectory({{a, b, c}}), beta_star);
  const auto relabeled = experiments::error_trajectory(
      fake_trajectory({{c, a, b}}), beta_star);
  CHECK(original.values[0] == doctest::Approx(relabeled.values[0]).epsilon(1e-15));
}

TEST_CASE("trial means: single trial, determinism, prefix stability") {
  const auto wp = make_world(3, 2, 5, 2025);
  World& w = *wp;
  const auto seeds = experiments::derive_trial_seeds(9, 8);

  // R = 1 equals the direct series of that seed's run.
  const auto single = experiments::mean_error_over_trials(w.spec, 1, seeds,
                                                          w.beta_star);
  const auto direct = experiments::error_trajectory(
      engine::run_private(*w.spec.dataset, *w.spec.graph, *w.spec.weights,
                          w.spec.schedule, w.spec.region, w.spec.rounds,
                          w.spec.init, seeds[0]),
      w.beta_star);
  CHECK(single.values == direct.values);
  CHECK(single.stderr_.empty());

  // The first-R mean is reproducible from any longer seed list prefix.
  const auto four = experiments::mean_error_over_trials(w.spec, 4, seeds,
                                                        w.beta_star);
  std::vector<std::uint64_t> prefix(seeds.begin(), seeds.begin() + 4);
  const auto four_again = experiments::mean_error_over_trials(w.spec, 4,
                                                              prefix,
                                                              w.beta_star);
  CHECK(four.values == four_again.values);
  CHECK(four.stderr_.size() == four.values.size());

  // Zero noise: every trial coincides, the mean equals any single trial
  // and the spread vanishes.
  const auto qp = make_world(3, 2, 5, 2026);
  World& quiet = *qp;
  quiet.spec.options.zero_noise = true;
  const auto mean = experiments::mean_error_over_trials(quiet.spec, 3, seeds,
                                                        quiet.beta_star);
  const auto one = experiments::mean_error_over_trials(quiet.spec, 1, seeds,
                                                       quiet.beta_star);
  for (std::size_t t = 0; t < mean.values.size(); ++t) {
    CHECK(mean.values[t] == doctest::Approx(one.values[t]).epsilon(1e-15));
    CHECK(mean.stderr_[t] <= 1e-12);
  }

  CHECK_THROWS_AS(
      experiments::mean_error_over_trials(w.spec, 20, seeds, w.beta_star),
      InvalidParams);
}

TEST_CASE("growth envelope: bounded series pass the linear envelope") {
  ErrorSeries constant;
  constant.values.assign(100, 3.5);
  const auto result =
      experiments::growth_envelope_check(constant, 1.0, 10, 20, 30, 99, 1.0);
  CHECK(result.pass);
  CHECK(result.fitted_c == doctest::Approx(3.5 / 10.0));
}

TEST_CASE("growth envelope: quadratic growth escapes the linear fit") {
  ErrorSeries quad;
  quad.values.resize(100);
  for (int t = 0; t < 100; ++t) quad.values[t] = static_cast<double>(t) * t;
  const auto result =
      experiments::growth_envelope_check(quad, 1.0, 10, 20, 40, 80, 2.0);
  CHECK_FALSE(result.pass);
  CHECK(result.fitted_c == doctest::Approx(20.0));
}

TEST_CASE("growth envelope: exact exponential shape passes") {
  ErrorSeries series;
  series.values.resize(200);
  for (int t = 0; t < 200; ++t) {
    series.values[t] = std::exp(std::sqrt(static_cast<double>(t)));
  }
  const auto result =
      experiments::growth_envelope_check(series, 0.5, 10, 50, 50, 199, 1.5);
  CHECK(result.pass);
  CHECK(result.fitted_c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("growth envelope: scale covariance") {
  rng::RngStream s(6, rng::Purpose::kTest);
  ErrorSeries series;
  series.values.resize(120);
  for (auto& v : series.values) v = 1.0 + s.next_unit();
  const auto base =
      experiments::growth_envelope_check(series, 1.0, 5, 30, 30, 119, 2.0);
  ErrorSeries scaled = series;
  const double lambda = 7.25;
  for (auto& v : scaled.values) v *= lambda;
  const auto result =
      experiments::growth_envelope_check(scaled, 1.0, 5, 30, 30, 119, 2.0);
  CHECK(result.pass == base.pass);
  CHECK(result.fitted_c ==
        doctest::Approx(lambda * base.fitted_c).epsilon(1e-12));
}

TEST_CASE("growth envelope: window and parameter validation") {
  ErrorSeries series;
  series.values.assign(50, 1.0);
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.0, 0, 10, 20, 40, 2.0),
      EmptyWindow);
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.0, 30, 20, 35, 40, 2.0),
      EmptyWindow);
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.0, 10, 20, 15, 40, 2.0),
      EmptyWindow);  // fit must precede test
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.0, 60, 70, 80, 90, 2.0),
      EmptyWindow);  // beyond the series after clamping
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.5, 10, 20, 30, 40, 2.0),
      InvalidParams);
  CHECK_THROWS_AS(
      experiments::growth_envelope_check(series, 1.0, 10, 20, 30, 40, 0.5),
      InvalidParams);
  // Upper ends clamp to the series length.
  CHECK_NOTHROW(
      experiments::growth_envelope_check(series, 1.0, 10, 20, 20, 500, 2.0));
}

TEST_CASE("baseline error eventually decreases on a convergent config") {
  const auto wp = make_world(4, 3, 10, 2027);
  World& w = *wp;
  w.spec.baseline = true;
  w.spec.rounds = 400;
  w.spec.schedule = {1.0, 10.0, 1.0, 1.0, 1.0, 1.0};
  const auto seeds = experiments::derive_trial_seeds(1, 1);
  const auto series = experiments::mean_error_over_trials(w.spec, 1, seeds,
                                                          w.beta_star);
  const int start = 300;
  for (int t = start; t + 1 < 400; ++t) {
    CHECK(series.values[t + 1] <= series.values[t] * 1.05);
  }
  CHECK(series.values[399] <= series.values[start]);
}

TEST_CASE("series CSV layout") {
  ErrorSeries series;
  series.values = {1.0, 0.5};
  std::ostringstream plain;
  experiments::write_series_csv(plain, series);
  CHECK(plain.str() == "round,value\n0,1\n1,0.5\n");

  series.stderr_ = {0.1, 0.05};
  std::ostringstream with_stderr;
  experiments::write_series_csv(with_stderr, series);
  CHECK(with_stderr.str() ==
        "round,value,stderr\n0,1,0.1\n1,0.5,0.05\n");
}
