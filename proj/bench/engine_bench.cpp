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

// Times the OpenMP engine against the serial reference on growing
// networks and reports the speedup, checking bit-equality of the
// trajectories as it goes. Build and run:
//   cmake --build build --target engine_bench && ./build/bench/engine_bench

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "dplreg/engine.hpp"
#include "dplreg/experiments.hpp"
#include "dplreg/reference.hpp"

namespace {

using namespace dplreg;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void bench_engine(int k, int m, int rows, int rounds) {
  const auto graph = topology::make_ring(k);
  const auto weights = topology::metropolis_weights(graph);
  const auto dataset = data::generate_synthetic(
      k, std::vector<int>(k, rows), m, Vector::Ones(m), 0.1, 1.0, 99);
  schedules::ScheduleParams p{1.0, 10.0, 1.0, 0.5, 1.0, 1.0};
  projection::OmegaBall region{Vector::Zero(m), 10.0};
  const std::vector<Vector> init(k, Vector::Zero(m));

  auto t0 = Clock::now();
  const auto serial =
      reference::run_private(dataset, graph, weights, p, region, rounds, init,
                             7);
  const double serial_ms = ms_since(t0);

  engine::RunOptions opts;
  t0 = Clock::now();
  const auto parallel = engine::run_private(dataset, graph, weights, p, region,
                                            rounds, init, 7, opts);
  const double parallel_ms = ms_since(t0);

  const bool equal = engine::bitwise_equal(serial, parallel);
  std::printf("engine   k=%-4d m=%-3d rows=%-3d T=%-5d serial %8.1f ms   "
              "omp %8.1f ms   speedup %.2fx   bit-equal %s\n",
              k, m, rows, rounds, serial_ms, parallel_ms,
              serial_ms / parallel_ms, equal ? "yes" : "NO");
}

void bench_trials(int k, int m, int rows, int rounds, int trials) {
  const auto graph = topology::make_ring(k);
  const auto weights = topology::metropolis_weights(graph);
  const auto dataset = data::generate_synthetic(
      k, std::vector<int>(k, rows), m, Vector::Ones(m), 0.1, 1.0, 99);
  const auto [x, y] = data::stack(dataset);
  const auto beta_star = data::closed_form_solution(x, y);

  experiments::RunSpec spec;
  spec.dataset = &dataset;
  spec.graph = &graph;
  spec.weights = &weights;
  spec.schedule = {1.0, 10.0, 1.0, 0.5, 1.0, 1.0};
  spec.region = {Vector::Zero(m), 10.0};
  spec.rounds = rounds;
  spec.init.assign(k, Vector::Zero(m));
  const auto seeds = experiments::derive_trial_seeds(3, trials);

  spec.options.parallel = false;
  auto t0 = Clock::now();
  const auto serial =
      experiments::mean_error_over_trials(spec, trials, seeds, beta_star);
  const double serial_ms = ms_since(t0);

  spec.options.parallel = true;
  t0 = Clock::now();
  const auto parallel =
      experiments::mean_error_over_trials(spec, trials, seeds, beta_star);
  const double parallel_ms = ms_since(t0);

  bool equal = serial.values == parallel.values;
  std::printf("trials   k=%-4d m=%-3d rows=%-3d T=%-5d R=%-3d serial %8.1f ms"
              "   omp %8.1f ms   speedup %.2fx   identical %s\n",
              k, m, rows, rounds, trials, serial_ms, parallel_ms,
              serial_ms / parallel_ms, equal ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("OpenMP max threads: %d\n\n", omp_get_max_threads());
  bench_engine(16, 8, 40, 400);
  bench_engine(64, 8, 40, 400);
  bench_engine(256, 16, 50, 200);
  std::printf("\n");
  bench_trials(8, 4, 20, 500, 16);
  bench_trials(16, 8, 40, 500, 32);
  return 0;
}
