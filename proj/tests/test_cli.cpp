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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dplreg/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = std::string(DPLREG_CLI_PATH) + " " + args + " >" +
                          out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.out = dplreg::io::read_file(out_file);
  result.err = dplreg::io::read_file(err_file);
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dplreg_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const char* kBaseConfig = R"([graph]
kind = ring
k = 4

[data]
kind = synthetic
m = 3
rows_per_node = 10
ground_truth = 1 -0.5 0.75
label_noise_scale = 0.05

[schedule]
c_alpha = 1
d_alpha = 10
e_alpha = 1
c_v = 0.5
d_v = 1
e_v = 1

[omega]
omega_radius = 4

[run]
rounds = 400
trials = 2
master_seed = 11
error_threshold = 1.0
)";

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  const auto dir = fresh_dir("usage");
  CHECK(run_cli("--definitely-not-a-flag", dir).exit_code == 2);
  CHECK(run_cli("run --config missing.ini --private --bogus", dir).exit_code ==
        2);
  CHECK(run_cli("", dir).exit_code == 2);  // a subcommand is required
  CHECK(run_cli("--help", dir).exit_code == 0);
}

TEST_CASE("generate: reproducible files with the hash header") {
  const auto dir = fresh_dir("generate");
  write_file(dir / "exp.ini", kBaseConfig);
  const std::string args = "generate --config " + (dir / "exp.ini").string() +
                           " --output-dir " + dir.string();

  const auto first = run_cli(args, dir);
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("beta_star=") != std::string::npos);
  CHECK(first.out.find("delta_x=") != std::string::npos);

  const std::string graph = dplreg::io::read_file(dir / "graph.txt");
  const std::string dataset = dplreg::io::read_file(dir / "dataset.txt");
  CHECK(graph.rfind("# config_hash=", 0) == 0);
  CHECK(dataset.rfind("# config_hash=", 0) == 0);

  // Ring on 4 nodes: header line "4" then 4 edges.
  CHECK(graph.find("\n4\n") != std::string::npos);

  // Overwrite refused without --force, allowed and identical with it.
  CHECK(run_cli(args, dir).exit_code == 1);
  const auto forced = run_cli(args + " --force", dir);
  CHECK(forced.exit_code == 0);
  CHECK(dplreg::io::read_file(dir / "graph.txt") == graph);
  CHECK(dplreg::io::read_file(dir / "dataset.txt") == dataset);
}

TEST_CASE("generate: rank-deficient data fails loudly") {
  const auto dir = fresh_dir("rankdef");
  write_file(dir / "data.txt", "2 2\nnode 1 2\n1 0 1\n1 0 1\nnode 2 2\n1 0 0\n1 0 2\n");
  std::string cfg = kBaseConfig;
  cfg.replace(cfg.find("kind = synthetic"), 16,
              "kind = file\nfile = " + (dir / "data.txt").string());
  cfg.replace(cfg.find("k = 4"), 5, "k = 2");
  write_file(dir / "exp.ini", cfg);
  const auto result = run_cli("generate --config " + (dir / "exp.ini").string() +
                                  " --output-dir " + dir.string(),
                              dir);
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("rank deficient") != std::string::npos);
}

TEST_CASE("run: baseline converges under the configured threshold") {
  const auto dir = fresh_dir("run_baseline");
  write_file(dir / "exp.ini", kBaseConfig);
  const auto result = run_cli("run --baseline --config " +
                                  (dir / "exp.ini").string() + " --output-dir " +
                                  dir.string(),
                              dir);
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("final summed error") != std::string::npos);
  CHECK(fs::exists(dir / "series.csv"));
  CHECK(fs::exists(dir / "trajectory_trial0.csv"));

  // Both output files open with the config hash.
  CHECK(dplreg::io::read_file(dir / "series.csv").rfind("# config_hash=", 0) ==
        0);
}

TEST_CASE("run: private with overrides reproduces the baseline bytes") {
  const auto dir_a = fresh_dir("degenerate_a");
  const auto dir_b = fresh_dir("degenerate_b");
  write_file(dir_a / "exp.ini", kBaseConfig);
  write_file(dir_b / "exp.ini", kBaseConfig);

  CHECK(run_cli("run --baseline --config " + (dir_a / "exp.ini").string() +
                    " --output-dir " + dir_a.string(),
                dir_a)
            .exit_code == 0);
  CHECK(run_cli("run --private --zero-noise --no-projection --config " +
                    (dir_b / "exp.ini").string() + " --output-dir " +
                    dir_b.string(),
                dir_b)
            .exit_code == 0);

  CHECK(dplreg::io::read_file(dir_a / "trajectory_trial0.csv") ==
        dplreg::io::read_file(dir_b / "trajectory_trial0.csv"));
  CHECK(dplreg::io::read_file(dir_a / "series.csv") ==
        dplreg::io::read_file(dir_b / "series.csv"));
}

TEST_CASE("run: exactly one of --private/--baseline") {
  const auto dir = fresh_dir("run_modes");
  write_file(dir / "exp.ini", kBaseConfig);
  CHECK(run_cli("run --config " + (dir / "exp.ini").string(), dir).exit_code ==
        2);
  CHECK(run_cli("run --private --baseline --config " +
                    (dir / "exp.ini").string(),
                dir)
            .exit_code == 2);
}

TEST_CASE("audit: pass, identical perturbation, regime violation") {
  const auto dir = fresh_dir("audit");
  std::string cfg = kBaseConfig;
  cfg.replace(cfg.find("rounds = 400"), 12, "rounds = 30");
  cfg.replace(cfg.find("trials = 2"), 10, "trials = 10");
  write_file(dir / "exp.ini", cfg);
  const std::string base = "audit --config " + (dir / "exp.ini").string() +
                           " --output-dir " + dir.string();

  const auto pass = run_cli(base + " --node 2", dir);
  CHECK(pass.exit_code == 0);
  CHECK(pass.out.find("verdict=pass") != std::string::npos);
  CHECK(fs::exists(dir / "audit.csv"));

  // scale-y:1 replaces the node with identical data: zero realized loss.
  const auto identical =
      run_cli(base + " --node 1 --perturb scale-y:1 --force", dir);
  CHECK(identical.exit_code == 0);
  CHECK(identical.out.find("total_realized=0") != std::string::npos);

  // Audit CSVs are byte-identical across reruns of the same config.
  const std::string audit_bytes = dplreg::io::read_file(dir / "audit.csv");
  const auto rerun =
      run_cli(base + " --node 1 --perturb scale-y:1 --force", dir);
  CHECK(rerun.exit_code == 0);
  CHECK(dplreg::io::read_file(dir / "audit.csv") == audit_bytes);

  // e_v > e_alpha: report still written, exit code 3.
  std::string bad = cfg;
  bad.replace(bad.find("e_v = 1"), 7, "e_v = 1.5");
  write_file(dir / "bad.ini", bad);
  const auto violated = run_cli("audit --config " + (dir / "bad.ini").string() +
                                    " --output-dir " + dir.string() +
                                    " --node 2 --force",
                                dir);
  CHECK(violated.exit_code == 3);
  CHECK(violated.out.find("regime=violated") != std::string::npos);
  CHECK(fs::exists(dir / "audit.csv"));

  const auto bad_node = run_cli(base + " --node 9 --force", dir);
  CHECK(bad_node.exit_code == 1);
}

TEST_CASE("budget: unit case, scaling, zero sensitivity") {
  const auto dir = fresh_dir("budget");
  const std::string schedule =
      " --c-alpha 1 --d-alpha 2 --e-alpha 1 --c-v 1 --d-v 1 --e-v 1";
  const std::string dims =
      " --m 1 --k 1 --n-max 1 --delta-x 1 --delta-y 1 --b-omega 1";

  const auto unit = run_cli("budget --rounds 1" + dims + schedule, dir);
  CHECK(unit.exit_code == 0);
  CHECK(unit.out.find("epsilon_formula=8\n") != std::string::npos);
  CHECK(unit.out.find("epsilon_sum=8\n") != std::string::npos);

  const auto ten = run_cli("budget --rounds 10" + dims + schedule, dir);
  const auto twenty = run_cli("budget --rounds 20" + dims + schedule, dir);
  CHECK(ten.out.find("epsilon_formula=80\n") != std::string::npos);
  CHECK(twenty.out.find("epsilon_formula=160\n") != std::string::npos);

  const auto zero = run_cli(
      "budget --rounds 5 --m 2 --k 3 --n-max 4 --delta-x 0 --delta-y 1 "
      "--b-omega 1" +
          schedule,
      dir);
  CHECK(zero.out.find("epsilon_formula=0\n") != std::string::npos);
}

TEST_CASE("sweep: one row per cartesian point") {
  const auto dir = fresh_dir("sweep");
  std::string cfg = kBaseConfig;
  cfg.replace(cfg.find("rounds = 400"), 12, "rounds = 60");
  cfg += R"(envelope_fit_lo = 5
envelope_fit_hi = 20
envelope_test_lo = 20
envelope_test_hi = 59

[sweep]
c_alpha = 0.5, 1.0
c_v = 0.5, 1.0, 2.0
)";
  write_file(dir / "exp.ini", cfg);
  const auto result = run_cli("sweep --config " + (dir / "exp.ini").string() +
                                  " --output-dir " + dir.string(),
                              dir);
  CHECK(result.exit_code == 0);
  const std::string csv = dplreg::io::read_file(dir / "sweep.csv");
  int lines = 0;
  for (char c : csv) lines += (c == '\n');
  CHECK(lines == 2 + 6);  // hash header + column header + 2*3 points
  CHECK(csv.find("envelope_pass") != std::string::npos);
}

TEST_CASE("generate: a 3-node path graph has exactly two edges") {
  const auto dir = fresh_dir("path3");
  std::string cfg = kBaseConfig;
  cfg.replace(cfg.find("kind = ring"), 11, "kind = path");
  cfg.replace(cfg.find("k = 4"), 5, "k = 3");
  write_file(dir / "exp.ini", cfg);
  const auto result = run_cli("generate --config " + (dir / "exp.ini").string() +
                                  " --output-dir " + dir.string(),
                              dir);
  CHECK(result.exit_code == 0);
  const std::string graph = dplreg::io::read_file(dir / "graph.txt");
  int edge_lines = 0;
  std::istringstream lines(graph);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#' && line.find(' ') != std::string::npos) {
      ++edge_lines;
    }
  }
  CHECK(edge_lines == 2);
}
