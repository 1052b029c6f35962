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

#ifndef DPLREG_TOPOLOGY_HPP_
#define DPLREG_TOPOLOGY_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dplreg/types.hpp"

namespace dplreg::topology {

// Connected undirected communication graph. Node ids are 1-based in the
// public interface and file format; the neighbor lists used for array
// indexing are 0-based, sorted ascending, and include the node itself.
struct NetworkGraph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;        // normalized (lo, hi), 1-based
  std::vector<std::vector<int>> neighbors;       // [i]: sorted, 0-based, self included

  int degree(int index) const {
    return static_cast<int>(neighbors[index].size()) - 1;
  }
};

// Validates ids and connectivity. Throws InvalidEdge on out-of-range or
// self-loop pairs, DisconnectedGraph when any node is unreachable.
NetworkGraph build_graph(int node_count,
                         std::vector<std::pair<int, int>> edge_list);

NetworkGraph make_path(int node_count);
NetworkGraph make_ring(int node_count);
NetworkGraph make_complete(int node_count);
// Rejection-resamples until the sample is connected; throws
// DisconnectedGraph after 10000 failed attempts.
NetworkGraph make_erdos_renyi(int node_count, double edge_prob,
                              std::uint64_t seed);

// Symmetric row-stochastic consensus weights supported exactly on the
// neighbor sets (diagonal included).
struct WeightMatrix {
  Matrix entries;

  int node_count() const { return static_cast<int>(entries.rows()); }
};

// Metropolis-Hastings rule: w_ij = 1/(1 + max(deg_i, deg_j)) on edges,
// diagonal takes the slack. Satisfies every WeightMatrix invariant on any
// connected graph without global degree knowledge.
WeightMatrix metropolis_weights(const NetworkGraph& graph);

struct WeightValidation {
  bool support_ok = true;
  bool symmetric = true;
  bool row_stochastic = true;
  std::vector<std::string> violations;

  bool pass() const { return support_ok && symmetric && row_stochastic; }
};

// Row-sum tolerance 1e-12. The verdict lists each violated invariant
// rather than throwing.
WeightValidation validate_weights(const WeightMatrix& weights,
                                  const NetworkGraph& graph);

// Plain-text format: first content line `k`, then one `i j` line per edge;
// `#` starts a comment.
void write_graph(std::ostream& out, const NetworkGraph& graph);
NetworkGraph read_graph(std::istream& in);

}  // namespace dplreg::topology

#endif  // DPLREG_TOPOLOGY_HPP_
