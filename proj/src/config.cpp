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

#include "dplreg/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dplreg/errors.hpp"
#include "dplreg/io.hpp"

namespace dplreg::config {

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string trimmed = io::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = io::to_lower(io::trim(trimmed.substr(1, trimmed.size() - 2)));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": empty section name");
      }
      out.sections_[section];  // a section may legitimately stay empty
      continue;
    }
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any section");
    }
    const std::string key = io::to_lower(io::trim(trimmed.substr(0, eq)));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    out.sections_[section][key] = io::trim(trimmed.substr(eq + 1));
  }
  return out;
}

ConfigFile ConfigFile::from_file(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) const {
  if (!has(section, key)) {
    throw ConfigError("missing config key [" + section + "] " + key);
  }
  return sections_.at(section).at(key);
}

std::string ConfigFile::get_string_or(const std::string& section,
                                      const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? sections_.at(section).at(key) : fallback;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  try {
    return io::parse_double(get_string(section, key));
  } catch (const IoError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

double ConfigFile::get_double_or(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long ConfigFile::get_int(const std::string& section,
                              const std::string& key) const {
  try {
    return io::parse_int(get_string(section, key));
  } catch (const IoError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

long long ConfigFile::get_int_or(const std::string& section,
                                 const std::string& key,
                                 long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t ConfigFile::get_u64_or(const std::string& section,
                                     const std::string& key,
                                     std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return io::parse_u64(get_string(section, key));
  } catch (const IoError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

std::vector<double> ConfigFile::get_vector(const std::string& section,
                                           const std::string& key) const {
  std::string raw = get_string(section, key);
  std::replace(raw.begin(), raw.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& token : io::split_ws(raw)) {
    try {
      out.push_back(io::parse_double(token));
    } catch (const IoError& e) {
      throw ConfigError("[" + section + "] " + key + ": " + e.what());
    }
  }
  if (out.empty()) {
    throw ConfigError("[" + section + "] " + key + ": empty list");
  }
  return out;
}

std::string ConfigFile::canonical() const {
  std::string out;
  for (const auto& [section, entries] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : entries) {
      out += key + "=" + value + "\n";
    }
  }
  return out;
}

std::string ConfigFile::hash_hex() const {
  return io::to_hex(io::fnv1a64(canonical()));
}

ExperimentConfig ExperimentConfig::load(const ConfigFile& file) {
  ExperimentConfig c;
  c.hash_hex = file.hash_hex();

  c.graph_kind = io::to_lower(file.get_string("graph", "kind"));
  if (c.graph_kind == "file") {
    c.graph_file = file.get_string("graph", "file");
  } else {
    c.node_count = static_cast<int>(file.get_int("graph", "k"));
    if (c.node_count < 1) throw ConfigError("[graph] k must be >= 1");
    c.edge_prob = file.get_double_or("graph", "edge_prob", 0.5);
  }

  c.data_kind = io::to_lower(file.get_string("data", "kind"));
  if (c.data_kind == "file") {
    c.data_file = file.get_string("data", "file");
  } else if (c.data_kind == "synthetic") {
    c.feature_dim = static_cast<int>(file.get_int("data", "m"));
    if (c.feature_dim < 1) throw ConfigError("[data] m must be >= 1");
    const auto rows = file.get_vector("data", "rows_per_node");
    for (double r : rows) {
      if (r < 1 || r != static_cast<long long>(r)) {
        throw ConfigError("[data] rows_per_node must be positive integers");
      }
      c.rows_per_node.push_back(static_cast<int>(r));
    }
    if (file.has("data", "ground_truth")) {
      const auto truth = file.get_vector("data", "ground_truth");
      c.ground_truth = Eigen::Map<const Vector>(truth.data(), truth.size());
    } else {
      c.ground_truth = Vector::Ones(c.feature_dim);
    }
    if (c.ground_truth.size() != c.feature_dim) {
      throw ConfigError("[data] ground_truth length must equal m");
    }
    c.label_noise_scale = file.get_double_or("data", "label_noise_scale", 0.0);
    c.design_norm_cap = file.get_double_or("data", "design_norm_cap", 1.0);
  } else {
    throw ConfigError("[data] kind must be synthetic or file");
  }

  c.schedule.c_alpha = file.get_double("schedule", "c_alpha");
  c.schedule.d_alpha = file.get_double("schedule", "d_alpha");
  c.schedule.e_alpha = file.get_double("schedule", "e_alpha");
  c.schedule.c_v = file.get_double("schedule", "c_v");
  c.schedule.d_v = file.get_double("schedule", "d_v");
  c.schedule.e_v = file.get_double("schedule", "e_v");
  c.schedule.validate();

  if (file.has("omega", "omega_center")) {
    const auto center = file.get_vector("omega", "omega_center");
    c.omega_center = Eigen::Map<const Vector>(center.data(), center.size());
  }
  const std::string radius =
      io::to_lower(file.get_string_or("omega", "omega_radius", "auto"));
  if (radius == "auto") {
    c.omega_auto = true;
    c.omega_slack = file.get_double_or("omega", "omega_slack", 2.0);
    if (!(c.omega_slack >= 1.0)) {
      throw ConfigError("[omega] omega_slack must be >= 1");
    }
  } else {
    c.omega_radius = file.get_double("omega", "omega_radius");
    if (!(c.omega_radius > 0)) {
      throw ConfigError("[omega] omega_radius must be positive");
    }
  }

  c.rounds = static_cast<int>(file.get_int("run", "rounds"));
  if (c.rounds < 1) throw ConfigError("[run] rounds must be >= 1");
  c.trials = static_cast<int>(file.get_int_or("run", "trials", 1));
  if (c.trials < 1) throw ConfigError("[run] trials must be >= 1");
  c.master_seed = file.get_u64_or("run", "master_seed", 0);
  c.output_dir = file.get_string_or("run", "output_dir", "");
  if (file.has("run", "error_threshold")) {
    c.error_threshold = file.get_double("run", "error_threshold");
  }
  c.envelope_slack = file.get_double_or("run", "envelope_slack", 2.0);
  c.envelope_fit_lo =
      static_cast<int>(file.get_int_or("run", "envelope_fit_lo", 1));
  c.envelope_fit_hi = static_cast<int>(
      file.get_int_or("run", "envelope_fit_hi", c.rounds / 4));
  c.envelope_test_lo = static_cast<int>(
      file.get_int_or("run", "envelope_test_lo", c.rounds / 4));
  c.envelope_test_hi = static_cast<int>(
      file.get_int_or("run", "envelope_test_hi", c.rounds - 1));
  return c;
}

Workspace build_workspace(const ExperimentConfig& c) {
  Workspace w;

  if (c.graph_kind == "path") {
    w.graph = topology::make_path(c.node_count);
  } else if (c.graph_kind == "ring") {
    w.graph = topology::make_ring(c.node_count);
  } else if (c.graph_kind == "complete") {
    w.graph = topology::make_complete(c.node_count);
  } else if (c.graph_kind == "erdos_renyi") {
    w.graph = topology::make_erdos_renyi(c.node_count, c.edge_prob,
                                         c.master_seed);
  } else if (c.graph_kind == "file") {
    std::ifstream in(c.graph_file);
    if (!in) throw IoError("cannot open graph file: " + c.graph_file);
    w.graph = topology::read_graph(in);
  } else {
    throw ConfigError("[graph] kind '" + c.graph_kind + "' not recognized");
  }
  w.weights = topology::metropolis_weights(w.graph);

  if (c.data_kind == "synthetic") {
    std::vector<int> rows = c.rows_per_node;
    if (rows.size() == 1 && w.graph.node_count > 1) {
      rows.assign(w.graph.node_count, rows[0]);
    }
    w.dataset = data::generate_synthetic(w.graph.node_count, rows,
                                         c.feature_dim, c.ground_truth,
                                         c.label_noise_scale,
                                         c.design_norm_cap, c.master_seed);
  } else {
    std::ifstream in(c.data_file);
    if (!in) throw IoError("cannot open dataset file: " + c.data_file);
    w.dataset = data::read_dataset(in);
    if (w.dataset.node_count() != w.graph.node_count) {
      throw ShapeMismatch("dataset node count != graph node count");
    }
  }

  const auto [x, y] = data::stack(w.dataset);
  w.beta_star = data::closed_form_solution(x, y);
  w.bounds = data::adjacency_params(w.dataset);

  if (c.omega_auto) {
    w.region = projection::suggest_omega(w.dataset, c.omega_slack);
  } else {
    w.region.center = c.omega_center.size() > 0
                          ? c.omega_center
                          : Vector::Zero(w.dataset.feature_dim);
    w.region.radius = c.omega_radius;
  }
  if (w.region.center.size() != w.dataset.feature_dim) {
    throw ConfigError("[omega] omega_center length must equal m");
  }
  w.region_contains_solution = projection::contains(w.region, w.beta_star);
  return w;
}

}  // namespace dplreg::config
