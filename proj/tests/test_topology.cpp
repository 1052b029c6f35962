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
#include <sstream>
#include <vector>

#include "doctest.h"
#include "dplreg/errors.hpp"
#include "dplreg/rng.hpp"
#include "dplreg/topology.hpp"

using namespace dplreg;

TEST_CASE("single node network") {
  const auto g = topology::build_graph(1, {});
  CHECK(g.node_count == 1);
  CHECK(g.edges.empty());
  CHECK(g.neighbors[0] == std::vector<int>{0});  // self included

  const auto w = topology::metropolis_weights(g);
  CHECK(w.entries(0, 0) == 1.0);
  CHECK(topology::validate_weights(w, g).pass());
}

TEST_CASE("path graph neighbor sets") {
  const auto g = topology::build_graph(3, {{1, 2}, {2, 3}});
  CHECK(g.neighbors[1] == std::vector<int>{0, 1, 2});  // node 2 sees 1,2,3
  CHECK(g.neighbors[0] == std::vector<int>{0, 1});
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
}

TEST_CASE("invalid and disconnected graphs") {
  CHECK_THROWS_AS(topology::build_graph(4, {{1, 2}, {3, 4}}),
                  DisconnectedGraph);
  CHECK_THROWS_AS(topology::build_graph(3, {{1, 4}, {1, 2}}), InvalidEdge);
  CHECK_THROWS_AS(topology::build_graph(3, {{2, 2}}), InvalidEdge);
  CHECK_THROWS_AS(topology::build_graph(0, {}), InvalidEdge);
}

TEST_CASE("duplicate edges collapse") {
  const auto g = topology::build_graph(2, {{1, 2}, {2, 1}});
  CHECK(g.edges.size() == 1);
}

TEST_CASE("metropolis weights on the 3-path") {
  const auto g = topology::make_path(3);
  const auto w = topology::metropolis_weights(g);
  // Degrees 1,2,1: edge weights 1/3, diagonals pick up the slack.
  CHECK(w.entries(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w.entries(1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w.entries(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w.entries(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w.entries(2, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w.entries(0, 2) == 0.0);
  CHECK(topology::validate_weights(w, g).pass());
}

TEST_CASE("metropolis weights on the 3-clique") {
  const auto g = topology::make_complete(3);
  const auto w = topology::metropolis_weights(g);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(w.entries(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("weight validation catches violations") {
  const auto g = topology::build_graph(2, {{1, 2}});
  auto w = topology::metropolis_weights(g);

  auto broken = w;
  broken.entries(0, 1) += 1e-6;  // asymmetric and row sum off
  const auto verdict = topology::validate_weights(broken, g);
  CHECK_FALSE(verdict.pass());
  CHECK_FALSE(verdict.symmetric);
  CHECK_FALSE(verdict.row_stochastic);
  CHECK_FALSE(verdict.violations.empty());

  // Identity on a connected pair: support demands w_12 > 0.
  topology::WeightMatrix identity;
  identity.entries = Matrix::Identity(2, 2);
  const auto id_verdict = topology::validate_weights(identity, g);
  CHECK_FALSE(id_verdict.support_ok);

  topology::WeightMatrix wrong_shape;
  wrong_shape.entries = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(topology::validate_weights(wrong_shape, g), ShapeMismatch);
}

TEST_CASE("random connected graphs keep every weight invariant") {
  rng::RngStream s(11, rng::Purpose::kTest);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + static_cast<int>(s.next_unit() * 10);
    const double prob = 0.3 + 0.5 * s.next_unit();
    const auto g = topology::make_erdos_renyi(k, prob, s.next_u64());
    const auto w = topology::metropolis_weights(g);
    CHECK(topology::validate_weights(w, g).pass());

    // All-ones fixed point.
    const Vector ones = Vector::Ones(k);
    CHECK(((w.entries * ones - ones).cwiseAbs().maxCoeff()) <= 1e-12);

    // Max-norm contraction on arbitrary vectors.
    Vector x(k);
    for (int i = 0; i < k; ++i) x[i] = s.next_laplace(1.0);
    CHECK((w.entries * x).cwiseAbs().maxCoeff() <=
          x.cwiseAbs().maxCoeff() + 1e-12);
  }
}

TEST_CASE("erdos-renyi sampling is deterministic per seed") {
  const auto a = topology::make_erdos_renyi(8, 0.4, 99);
  const auto b = topology::make_erdos_renyi(8, 0.4, 99);
  const auto c = topology::make_erdos_renyi(8, 0.4, 100);
  CHECK(a.edges == b.edges);
  CHECK(a.edges != c.edges);  // overwhelmingly likely for these sizes
}

TEST_CASE("ring and complete generators") {
  const auto ring = topology::make_ring(5);
  CHECK(ring.edges.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(ring.degree(i) == 2);

  const auto two_ring = topology::make_ring(2);
  CHECK(two_ring.edges.size() == 1);

  const auto complete = topology::make_complete(4);
  CHECK(complete.edges.size() == 6);
}

TEST_CASE("graph file round trip") {
  const auto g = topology::make_ring(4);
  std::ostringstream out;
  topology::write_graph(out, g);

  std::istringstream in("# a comment line\n" + out.str() + "# trailing\n");
  const auto back = topology::read_graph(in);
  CHECK(back.node_count == g.node_count);
  CHECK(back.edges == g.edges);

  std::istringstream bad("3\n1 2 3\n");
  CHECK_THROWS_AS(topology::read_graph(bad), IoError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(topology::read_graph(empty), IoError);
}
