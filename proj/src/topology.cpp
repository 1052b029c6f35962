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

#include "dplreg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"
#include "dplreg/rng.hpp"

namespace dplreg::topology {

namespace {

void check_connected(const NetworkGraph& g) {
  if (g.node_count == 0) return;
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : g.neighbors[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  if (reached != g.node_count) {
    throw DisconnectedGraph("graph is not connected: reached " +
                            std::to_string(reached) + " of " +
                            std::to_string(g.node_count) + " nodes");
  }
}

}  // namespace

NetworkGraph build_graph(int node_count,
                         std::vector<std::pair<int, int>> edge_list) {
  if (node_count < 1) throw InvalidEdge("node count must be >= 1");

  std::set<std::pair<int, int>> normalized;
  for (auto [a, b] : edge_list) {
    if (a < 1 || a > node_count || b < 1 || b > node_count) {
      throw InvalidEdge("edge endpoint out of range: {" + std::to_string(a) +
                        "," + std::to_string(b) + "}");
    }
    if (a == b) {
      throw InvalidEdge("self-loop not allowed: node " + std::to_string(a));
    }
    normalized.insert({std::min(a, b), std::max(a, b)});
  }

  NetworkGraph g;
  g.node_count = node_count;
  g.edges.assign(normalized.begin(), normalized.end());
  g.neighbors.assign(node_count, {});
  for (int i = 0; i < node_count; ++i) g.neighbors[i].push_back(i);
  for (auto [a, b] : g.edges) {
    g.neighbors[a - 1].push_back(b - 1);
    g.neighbors[b - 1].push_back(a - 1);
  }
  for (auto& list : g.neighbors) std::sort(list.begin(), list.end());

  check_connected(g);
  return g;
}

NetworkGraph make_path(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < node_count; ++i) edges.push_back({i, i + 1});
  return build_graph(node_count, std::move(edges));
}

NetworkGraph make_ring(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < node_count; ++i) edges.push_back({i, i + 1});
  if (node_count > 2) edges.push_back({node_count, 1});
  return build_graph(node_count, std::move(edges));
}

NetworkGraph make_complete(int node_count) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= node_count; ++i) {
    for (int j = i + 1; j <= node_count; ++j) edges.push_back({i, j});
  }
  return build_graph(node_count, std::move(edges));
}

NetworkGraph make_erdos_renyi(int node_count, double edge_prob,
                              std::uint64_t seed) {
  if (!(edge_prob >= 0.0) || !(edge_prob <= 1.0)) {
    throw InvalidParams("edge probability must be in [0, 1]");
  }
  rng::RngStream stream(seed, rng::Purpose::kGraph);
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= node_count; ++i) {
      for (int j = i + 1; j <= node_count; ++j) {
        if (stream.next_unit() < edge_prob) edges.push_back({i, j});
      }
    }
    try {
      return build_graph(node_count, std::move(edges));
    } catch (const DisconnectedGraph&) {
      continue;
    }
  }
  throw DisconnectedGraph(
      "no connected Erdos-Renyi sample after 10000 attempts (edge_prob too small?)");
}

WeightMatrix metropolis_weights(const NetworkGraph& g) {
  const int k = g.node_count;
  WeightMatrix w;
  w.entries = Matrix::Zero(k, k);
  for (auto [a, b] : g.edges) {
    const int i = a - 1, j = b - 1;
    const double wij = 1.0 / (1.0 + std::max(g.degree(i), g.degree(j)));
    w.entries(i, j) = wij;
    w.entries(j, i) = wij;
  }
  for (int i = 0; i < k; ++i) {
    double off = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j != i) off += w.entries(i, j);
    }
    w.entries(i, i) = 1.0 - off;
  }
  return w;
}

WeightValidation validate_weights(const WeightMatrix& weights,
                                  const NetworkGraph& graph) {
  constexpr double kRowSumTol = 1e-12;
  const int k = graph.node_count;
  WeightValidation v;
  if (weights.node_count() != k || weights.entries.cols() != k) {
    throw ShapeMismatch("weight matrix shape does not match node count");
  }

  for (int i = 0; i < k; ++i) {
    const auto& nbrs = graph.neighbors[i];
    for (int j = 0; j < k; ++j) {
      const bool is_neighbor =
          std::binary_search(nbrs.begin(), nbrs.end(), j);
      const double wij = weights.entries(i, j);
      if (is_neighbor && !(wij > 0)) {
        v.support_ok = false;
        v.violations.push_back("w(" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) +
                               ") must be positive on the neighbor set");
      }
      if (!is_neighbor && wij != 0.0) {
        v.support_ok = false;
        v.violations.push_back("w(" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) +
                               ") must be zero off the neighbor set");
      }
      if (j > i && weights.entries(i, j) != weights.entries(j, i)) {
        v.symmetric = false;
        v.violations.push_back("asymmetry at (" + std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + ")");
      }
    }
    const double row_sum = weights.entries.row(i).sum();
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      v.row_stochastic = false;
      v.violations.push_back("row " + std::to_string(i + 1) + " sums to " +
                             io::fmt_double(row_sum));
    }
  }
  return v;
}

void write_graph(std::ostream& out, const NetworkGraph& graph) {
  out << graph.node_count << "\n";
  for (auto [a, b] : graph.edges) out << a << " " << b << "\n";
}

NetworkGraph read_graph(std::istream& in) {
  int node_count = -1;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto tokens = io::split_ws(line);
    if (tokens.empty()) continue;
    if (node_count < 0) {
      if (tokens.size() != 1) throw IoError("graph header must be a single count");
      node_count = static_cast<int>(io::parse_int(tokens[0]));
      continue;
    }
    if (tokens.size() != 2) throw IoError("graph edge line must be 'i j'");
    edges.push_back({static_cast<int>(io::parse_int(tokens[0])),
                     static_cast<int>(io::parse_int(tokens[1]))});
  }
  if (node_count < 0) throw IoError("graph file has no header line");
  return build_graph(node_count, std::move(edges));
}

}  // namespace dplreg::topology
