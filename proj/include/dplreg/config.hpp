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

#ifndef DPLREG_CONFIG_HPP_
#define DPLREG_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dplreg/data_model.hpp"
#include "dplreg/projection.hpp"
#include "dplreg/schedules.hpp"
#include "dplreg/topology.hpp"
#include "dplreg/types.hpp"

namespace dplreg::config {

// Flat INI-style key-value file with [graph] [data] [schedule] [omega]
// [run] sections ([sweep] optional). Keys are case-insensitive; values keep
// their case. The canonical serialization (sections and keys sorted,
// lowercased keys, trimmed values) feeds the config hash embedded in every
// output file.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text);
  static ConfigFile from_file(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section,
                         const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key,
                       long long fallback) const;
  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) const;
  // Whitespace- or comma-separated list of decimals.
  std::vector<double> get_vector(const std::string& section,
                                 const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

  std::string canonical() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// The assembled experiment description.
struct ExperimentConfig {
  // [graph]
  std::string graph_kind;  // path | ring | complete | erdos_renyi | file
  int node_count = 0;
  double edge_prob = 0.5;
  std::string graph_file;

  // [data]
  std::string data_kind;  // synthetic | file
  std::vector<int> rows_per_node;
  int feature_dim = 0;
  Vector ground_truth;  // defaults to all ones
  double label_noise_scale = 0.0;
  double design_norm_cap = 1.0;
  std::string data_file;

  // [schedule]
  schedules::ScheduleParams schedule;

  // [omega]
  Vector omega_center;        // defaults to zeros
  double omega_radius = 0.0;  // > 0, or omega_auto with omega_slack
  bool omega_auto = false;
  double omega_slack = 2.0;

  // [run]
  int rounds = 1;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::string output_dir;
  std::optional<double> error_threshold;
  double envelope_slack = 2.0;
  int envelope_fit_lo = 0, envelope_fit_hi = 0;
  int envelope_test_lo = 0, envelope_test_hi = 0;

  std::string hash_hex;

  static ExperimentConfig load(const ConfigFile& file);
};

// Graph, weights, dataset, region and the exact solution, built or loaded
// according to the config.
struct Workspace {
  topology::NetworkGraph graph;
  topology::WeightMatrix weights;
  data::NetworkDataset dataset;
  projection::OmegaBall region;
  Vector beta_star;
  data::AdjacencyParams bounds;
  bool region_contains_solution = false;
};

Workspace build_workspace(const ExperimentConfig& config);

}  // namespace dplreg::config

#endif  // DPLREG_CONFIG_HPP_
