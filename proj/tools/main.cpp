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

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dplreg/config.hpp"
#include "dplreg/engine.hpp"
#include "dplreg/errors.hpp"
#include "dplreg/experiments.hpp"
#include "dplreg/io.hpp"
#include "dplreg/privacy_audit.hpp"
#include "dplreg/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dplreg;

// Exit codes: 0 success / audit pass, 1 runtime error, 2 usage,
// 3 audit failure or schedule regime violation.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAuditFail = 3;

struct CommonArgs {
  std::string config_path;
  std::string output_dir;  // overrides config / environment
  bool force = false;
};

fs::path resolve_output_dir(const CommonArgs& args,
                            const config::ExperimentConfig& cfg) {
  if (!args.output_dir.empty()) return args.output_dir;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("DPLREG_OUTPUT_DIR")) return env;
  return ".";
}

std::vector<Vector> zero_init(int node_count, int feature_dim) {
  return std::vector<Vector>(node_count, Vector::Zero(feature_dim));
}

void warn_regime(const schedules::ScheduleParams& p) {
  const auto regime = schedules::check_theorem1_regime(p);
  if (!regime.budget_preconditions_ok()) {
    std::cerr << "warning: schedule outside the closed-form budget regime ("
              << regime.describe() << ")\n";
  }
}

void warn_containment(const config::Workspace& w) {
  if (!w.region_contains_solution) {
    std::cerr << "warning: ContainmentUnverified - the exact solution lies "
                 "outside the configured region; projected dynamics cannot "
                 "reach it\n";
  }
}

int cmd_generate(const CommonArgs& args) {
  const auto file = config::ConfigFile::from_file(args.config_path);
  const auto cfg = config::ExperimentConfig::load(file);
  const auto w = config::build_workspace(cfg);
  const fs::path dir = resolve_output_dir(args, cfg);

  {
    auto out = io::open_output(dir / "graph.txt", cfg.hash_hex, args.force);
    topology::write_graph(out, w.graph);
  }
  {
    auto out = io::open_output(dir / "dataset.txt", cfg.hash_hex, args.force);
    data::write_dataset(out, w.dataset);
  }

  std::cout << "graph: k=" << w.graph.node_count
            << " edges=" << w.graph.edges.size() << "\n";
  std::cout << "dataset: n=" << w.dataset.total_rows()
            << " m=" << w.dataset.feature_dim
            << " n_max=" << w.dataset.max_rows() << "\n";
  std::cout << "delta_x=" << io::fmt_double(w.bounds.delta_x)
            << " delta_y=" << io::fmt_double(w.bounds.delta_y) << "\n";
  std::cout << "beta_star=";
  for (Eigen::Index c = 0; c < w.beta_star.size(); ++c) {
    std::cout << (c ? " " : "") << io::fmt_double(w.beta_star[c]);
  }
  std::cout << "\n";
  std::cout << "omega: radius=" << io::fmt_double(w.region.radius)
            << " B_Omega=" << io::fmt_double(w.region.sup_norm_bound()) << "\n";
  warn_containment(w);
  std::cout << "wrote " << (dir / "graph.txt").string() << ", "
            << (dir / "dataset.txt").string() << "\n";
  return kExitOk;
}

struct RunArgs {
  bool private_mode = false;
  bool baseline_mode = false;
  bool zero_noise = false;
  bool no_projection = false;
  bool dump_all = false;
  bool serial = false;
};

int cmd_run(const CommonArgs& args, const RunArgs& run_args) {
  const auto file = config::ConfigFile::from_file(args.config_path);
  const auto cfg = config::ExperimentConfig::load(file);
  const auto w = config::build_workspace(cfg);
  const fs::path dir = resolve_output_dir(args, cfg);

  experiments::RunSpec spec;
  spec.dataset = &w.dataset;
  spec.graph = &w.graph;
  spec.weights = &w.weights;
  spec.schedule = cfg.schedule;
  spec.region = w.region;
  spec.rounds = cfg.rounds;
  spec.init = zero_init(w.graph.node_count, w.dataset.feature_dim);
  spec.baseline = run_args.baseline_mode;
  spec.options.zero_noise = run_args.zero_noise;
  spec.options.skip_projection = run_args.no_projection;
  spec.options.parallel = !run_args.serial;

  if (!spec.baseline) {
    warn_regime(cfg.schedule);
    warn_containment(w);
  }

  const auto seeds =
      experiments::derive_trial_seeds(cfg.master_seed, cfg.trials);

  // Trajectory dumps: first trial only unless --dump-all.
  const int dumps = run_args.dump_all ? cfg.trials : 1;
  for (int r = 0; r < dumps; ++r) {
    engine::Trajectory traj;
    if (spec.baseline) {
      traj = engine::run_baseline(w.dataset, w.graph, w.weights, cfg.schedule,
                                  cfg.rounds, spec.init, spec.options);
    } else {
      traj = engine::run_private(w.dataset, w.graph, w.weights, cfg.schedule,
                                 w.region, cfg.rounds, spec.init, seeds[r],
                                 spec.options);
    }
    auto out = io::open_output(
        dir / ("trajectory_trial" + std::to_string(r) + ".csv"), cfg.hash_hex,
        args.force);
    engine::write_trajectory_csv(out, traj);
  }

  const auto series =
      experiments::mean_error_over_trials(spec, cfg.trials, seeds, w.beta_star);
  {
    auto out = io::open_output(dir / "series.csv", cfg.hash_hex, args.force);
    experiments::write_series_csv(out, series);
  }

  const double final_error = series.values.back();
  std::cout << "final summed error (round " << (cfg.rounds - 1)
            << "): " << io::fmt_double(final_error) << "\n";
  std::cout << "wrote " << (dir / "series.csv").string() << "\n";
  if (cfg.error_threshold && final_error > *cfg.error_threshold) {
    std::cerr << "error: final error " << io::fmt_double(final_error)
              << " exceeds threshold " << io::fmt_double(*cfg.error_threshold)
              << "\n";
    return kExitError;
  }
  return kExitOk;
}

data::LocalDataset perturb_local(const data::LocalDataset& old_local,
                                 const std::string& spec, int node_id) {
  if (spec == "negate-y") {
    return {old_local.design, -old_local.labels};
  }
  if (spec.rfind("scale-y:", 0) == 0) {
    const double factor = io::parse_double(spec.substr(8));
    return {old_local.design, factor * old_local.labels};
  }
  if (spec.rfind("resample:", 0) == 0) {
    const std::uint64_t seed = io::parse_u64(spec.substr(9));
    rng::RngStream stream(seed, rng::Purpose::kResample, node_id);
    // Fresh Gaussian data rescaled just inside the original norms, so the
    // pair stays certified under the base dataset's adjacency bounds.
    Matrix x(old_local.rows(), old_local.cols());
    for (int r = 0; r < x.rows(); ++r) {
      for (int c = 0; c < x.cols(); ++c) x(r, c) = stream.next_normal();
    }
    const double x_norm = data::spectral_norm(x);
    const double x_target = data::spectral_norm(old_local.design);
    if (x_norm > 0) x *= (1.0 - 1e-9) * x_target / x_norm;
    Vector y(old_local.rows());
    for (int r = 0; r < y.size(); ++r) y[r] = stream.next_normal();
    const double y_norm = y.norm();
    if (y_norm > 0) y *= (1.0 - 1e-9) * old_local.labels.norm() / y_norm;
    return {std::move(x), std::move(y)};
  }
  throw ConfigError("unknown perturbation spec '" + spec +
                    "' (use negate-y, scale-y:<f> or resample:<seed>)");
}

int cmd_audit(const CommonArgs& args, int node_id,
              const std::string& perturb_spec, bool serial) {
  const auto file = config::ConfigFile::from_file(args.config_path);
  const auto cfg = config::ExperimentConfig::load(file);
  const auto w = config::build_workspace(cfg);
  const fs::path dir = resolve_output_dir(args, cfg);

  if (node_id < 1 || node_id > w.graph.node_count) {
    throw ConfigError("--node must be in 1..k");
  }
  warn_containment(w);

  const auto d_adj = data::make_adjacent(
      w.dataset, node_id,
      perturb_local(w.dataset.locals[node_id - 1], perturb_spec, node_id),
      w.bounds);

  const auto init = zero_init(w.graph.node_count, w.dataset.feature_dim);
  const auto seeds =
      experiments::derive_trial_seeds(cfg.master_seed, cfg.trials);
  std::vector<engine::Trajectory> trials(cfg.trials);
  engine::RunOptions opts;
  opts.parallel = false;  // parallelism across trials instead
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (!serial)
  for (int r = 0; r < cfg.trials; ++r) {
    try {
      trials[r] = engine::run_private(w.dataset, w.graph, w.weights,
                                      cfg.schedule, w.region, cfg.rounds, init,
                                      seeds[r], opts);
    } catch (...) {
#pragma omp critical(dplreg_cli_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  schedules::BudgetInputs b;
  b.rounds = cfg.rounds;
  b.feature_dim = w.dataset.feature_dim;
  b.node_count = w.graph.node_count;
  b.max_rows = w.dataset.max_rows();
  b.delta_x = w.bounds.delta_x;
  b.delta_y = w.bounds.delta_y;
  b.b_omega = w.region.sup_norm_bound();

  const auto report = audit::audit(trials, w.dataset, d_adj, w.weights,
                                   w.region, cfg.schedule, b);
  {
    auto out = io::open_output(dir / "audit.csv", cfg.hash_hex, args.force);
    audit::write_audit_csv(out, report);
  }

  std::cout << "epsilon_formula=" << io::fmt_double(report.budget_formula)
            << "\nepsilon_sum=" << io::fmt_double(report.budget_sum)
            << "\ntotal_realized=" << io::fmt_double(report.total_realized)
            << "\nverdict=" << (report.pass() ? "pass" : "fail")
            << "\nregime=" << (report.regime_ok ? "ok" : "violated") << "\n";
  std::cout << "wrote " << (dir / "audit.csv").string() << "\n";
  if (!report.regime_ok || !report.pass()) return kExitAuditFail;
  return kExitOk;
}

struct BudgetArgs {
  int rounds = 1;
  int feature_dim = 1;
  int node_count = 1;
  int max_rows = 1;
  double delta_x = 0.0;
  double delta_y = 0.0;
  double b_omega = 1.0;
  schedules::ScheduleParams schedule;
};

int cmd_budget(const BudgetArgs& args) {
  schedules::BudgetInputs b;
  b.rounds = args.rounds;
  b.feature_dim = args.feature_dim;
  b.node_count = args.node_count;
  b.max_rows = args.max_rows;
  b.delta_x = args.delta_x;
  b.delta_y = args.delta_y;
  b.b_omega = args.b_omega;

  const auto regime = schedules::check_theorem1_regime(args.schedule);
  const double formula =
      schedules::privacy_budget(args.schedule, b, /*allow_regime_violation=*/true);
  const double sum = schedules::per_step_bound_sum(args.schedule, b);
  std::cout << "epsilon_formula=" << io::fmt_double(formula) << "\n";
  std::cout << "epsilon_sum=" << io::fmt_double(sum) << "\n";
  std::cout << "regime: " << regime.describe() << "\n";
  if (!regime.budget_preconditions_ok()) {
    std::cerr << "warning: closed-form budget preconditions fail; "
                 "epsilon_formula is not a certified bound, use epsilon_sum\n";
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, bool serial) {
  const auto file = config::ConfigFile::from_file(args.config_path);
  const auto base_cfg = config::ExperimentConfig::load(file);
  const auto w = config::build_workspace(base_cfg);
  const fs::path dir = resolve_output_dir(args, base_cfg);

  // [sweep] lists schedule keys with comma-separated values; rows cover the
  // cartesian product.
  static const std::vector<std::string> kKeys = {"c_alpha", "d_alpha",
                                                 "e_alpha", "c_v",
                                                 "d_v",     "e_v"};
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  for (const auto& key : kKeys) {
    if (file.has("sweep", key)) {
      axes.push_back({key, file.get_vector("sweep", key)});
    }
  }
  if (axes.empty()) throw ConfigError("[sweep] section lists no schedule keys");

  auto out = io::open_output(dir / "sweep.csv", base_cfg.hash_hex, args.force);
  out << "c_alpha,d_alpha,e_alpha,c_v,d_v,e_v,fitted_c,envelope_pass,"
         "epsilon_formula,epsilon_sum,regime_ok\n";

  schedules::BudgetInputs b;
  b.rounds = base_cfg.rounds;
  b.feature_dim = w.dataset.feature_dim;
  b.node_count = w.graph.node_count;
  b.max_rows = w.dataset.max_rows();
  b.delta_x = w.bounds.delta_x;
  b.delta_y = w.bounds.delta_y;
  b.b_omega = w.region.sup_norm_bound();

  const auto seeds =
      experiments::derive_trial_seeds(base_cfg.master_seed, base_cfg.trials);

  std::vector<std::size_t> index(axes.size(), 0);
  bool done = false;
  while (!done) {
    schedules::ScheduleParams p = base_cfg.schedule;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double value = axes[a].second[index[a]];
      const auto& key = axes[a].first;
      if (key == "c_alpha") p.c_alpha = value;
      else if (key == "d_alpha") p.d_alpha = value;
      else if (key == "e_alpha") p.e_alpha = value;
      else if (key == "c_v") p.c_v = value;
      else if (key == "d_v") p.d_v = value;
      else p.e_v = value;
    }
    p.validate();

    experiments::RunSpec spec;
    spec.dataset = &w.dataset;
    spec.graph = &w.graph;
    spec.weights = &w.weights;
    spec.schedule = p;
    spec.region = w.region;
    spec.rounds = base_cfg.rounds;
    spec.init = zero_init(w.graph.node_count, w.dataset.feature_dim);
    spec.options.parallel = !serial;

    const auto series = experiments::mean_error_over_trials(
        spec, base_cfg.trials, seeds, w.beta_star);
    const auto envelope = experiments::growth_envelope_check(
        series, p.e_alpha, base_cfg.envelope_fit_lo, base_cfg.envelope_fit_hi,
        base_cfg.envelope_test_lo, base_cfg.envelope_test_hi,
        base_cfg.envelope_slack);
    const auto regime = schedules::check_theorem1_regime(p);
    const double formula =
        schedules::privacy_budget(p, b, /*allow_regime_violation=*/true);
    const double sum = schedules::per_step_bound_sum(p, b);

    out << io::fmt_double(p.c_alpha) << "," << io::fmt_double(p.d_alpha) << ","
        << io::fmt_double(p.e_alpha) << "," << io::fmt_double(p.c_v) << ","
        << io::fmt_double(p.d_v) << "," << io::fmt_double(p.e_v) << ","
        << io::fmt_double(envelope.fitted_c) << ","
        << (envelope.pass ? "1" : "0") << "," << io::fmt_double(formula) << ","
        << io::fmt_double(sum) << ","
        << (regime.budget_preconditions_ok() ? "1" : "0") << "\n";

    done = true;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      if (++index[a] < axes[a].second.size()) {
        done = false;
        break;
      }
      index[a] = 0;
    }
  }
  std::cout << "wrote " << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dplreg: differentially private decentralized linear regression "
      "simulator and privacy auditor"};
  app.require_subcommand(1);

  CommonArgs common;
  RunArgs run_args;
  int audit_node = 1;
  std::string perturb_spec = "negate-y";
  bool serial = false;
  BudgetArgs budget_args;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config_path,
                    "experiment config file (INI)")
        ->required();
    cmd->add_option("--output-dir", common.output_dir,
                    "output directory (overrides config and DPLREG_OUTPUT_DIR)");
    cmd->add_flag("--force", common.force, "overwrite existing output files");
  };

  auto* gen = app.add_subcommand("generate", "write the graph and dataset files");
  add_common(gen);

  auto* run = app.add_subcommand("run", "simulate and write trajectories");
  add_common(run);
  run->add_flag("--private", run_args.private_mode, "noisy projected recursion");
  run->add_flag("--baseline", run_args.baseline_mode,
                "noise-free unprojected recursion");
  run->add_flag("--zero-noise", run_args.zero_noise,
                "override: skip the noise draws");
  run->add_flag("--no-projection", run_args.no_projection,
                "override: treat the region as all of R^m");
  run->add_flag("--dump-all", run_args.dump_all,
                "dump every trial's trajectory, not only the first");
  run->add_flag("--serial", run_args.serial, "disable OpenMP");

  auto* aud = app.add_subcommand(
      "audit", "realized privacy loss vs the per-step bounds");
  add_common(aud);
  aud->add_option("--node", audit_node,
                  "node whose data the adjacent pair replaces")
      ->required();
  aud->add_option("--perturb", perturb_spec,
                  "negate-y | scale-y:<f> | resample:<seed>");
  aud->add_flag("--serial", serial, "disable OpenMP");

  auto* bud = app.add_subcommand("budget", "closed-form privacy budget");
  bud->add_option("--rounds", budget_args.rounds, "T")->required();
  bud->add_option("--m", budget_args.feature_dim, "feature dimension")->required();
  bud->add_option("--k", budget_args.node_count, "node count")->required();
  bud->add_option("--n-max", budget_args.max_rows, "max rows per node")->required();
  bud->add_option("--delta-x", budget_args.delta_x, "design norm bound")->required();
  bud->add_option("--delta-y", budget_args.delta_y, "label norm bound")->required();
  bud->add_option("--b-omega", budget_args.b_omega,
                  "sup ||beta|| over the region")
      ->required();
  bud->add_option("--c-alpha", budget_args.schedule.c_alpha)->required();
  bud->add_option("--d-alpha", budget_args.schedule.d_alpha)->required();
  bud->add_option("--e-alpha", budget_args.schedule.e_alpha)->required();
  bud->add_option("--c-v", budget_args.schedule.c_v)->required();
  bud->add_option("--d-v", budget_args.schedule.d_v)->required();
  bud->add_option("--e-v", budget_args.schedule.e_v)->required();

  auto* swp = app.add_subcommand(
      "sweep", "cartesian product over [sweep] schedule lists");
  add_common(swp);
  swp->add_flag("--serial", serial, "disable OpenMP");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(common);
    if (*run) {
      if (run_args.private_mode == run_args.baseline_mode) {
        std::cerr << "error: pass exactly one of --private / --baseline\n";
        return kExitUsage;
      }
      return cmd_run(common, run_args);
    }
    if (*aud) return cmd_audit(common, audit_node, perturb_spec, serial);
    if (*bud) return cmd_budget(budget_args);
    if (*swp) return cmd_sweep(common, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
