// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: `pintdae sequential|parareal|sweep [options]`.
// Options mirror the run-configuration fields and may also come from a flat
// key=value config file via --config.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "pintdae/cli.hpp"

namespace {

struct CommonArgs {
  std::string model = "rod";
  std::vector<std::string> overrides;
  pintdae::cli::RunConfig cfg;
  std::string norm_mode = "differential";
  std::string update_mode = "projected_consistent";
};

void add_common_options(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--model", args.model, "Model: analytic2x2 | rod | rod_nonlinear | coupled")
      ->capture_default_str();
  cmd.add_option("--set", args.overrides,
                 "Model parameter override key=value (repeatable), e.g. --set sigma=50");
  cmd.add_option("--t-end", args.cfg.t_end, "End of the time interval [s]")
      ->capture_default_str();
  cmd.add_option("--n-windows", args.cfg.n_windows, "Number of time windows")
      ->capture_default_str();
  cmd.add_option("--dt-fine", args.cfg.dt_fine, "Fine propagator step [s]")
      ->capture_default_str();
  cmd.add_option("--dt-coarse", args.cfg.dt_coarse, "Coarse propagator step [s]")
      ->capture_default_str();
  cmd.add_option("--tol", args.cfg.tol, "Relative increment tolerance")->capture_default_str();
  cmd.add_option("--max-iter", args.cfg.max_iter, "Iteration cap (0 = n_windows)")
      ->capture_default_str();
  cmd.add_option("--norm-mode", args.norm_mode, "differential | full")->capture_default_str();
  cmd.add_option("--update-mode", args.update_mode, "projected_consistent | plain")
      ->capture_default_str();
  cmd.add_option("--workers", args.cfg.workers, "Worker threads for the fine stage")
      ->capture_default_str();
  cmd.add_option("--seed", args.cfg.seed, "Seed for the initial perturbation")
      ->capture_default_str();
  cmd.add_option("--perturb-algebraic", args.cfg.perturb_algebraic,
                 "Noise magnitude added to algebraic components of the initial state")
      ->capture_default_str();
  cmd.add_option("--output", args.cfg.output_path, "Output CSV path");
  cmd.set_config("--config", "", "Read options from a key=value file");
}

pintdae::cli::RunConfig finalize(CommonArgs& args) {
  args.cfg.model = pintdae::cli::parse_model(args.model);
  args.cfg.norm_mode = pintdae::cli::parse_norm_mode(args.norm_mode);
  args.cfg.update_mode = pintdae::cli::parse_update_mode(args.update_mode);
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw pintdae::StructureError("override '" + kv + "' is not of the form key=value");
    }
    args.cfg.model_overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return args.cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel-in-time (Parareal) integration of index-1 DAE systems"};
  app.require_subcommand(1);

  CommonArgs seq_args, par_args, sweep_args;

  CLI::App* seq = app.add_subcommand("sequential", "Sequential fine reference run");
  add_common_options(*seq, seq_args);

  CLI::App* par = app.add_subcommand("parareal", "Parareal run");
  add_common_options(*par, par_args);
  par->add_option("--reference", par_args.cfg.reference_path,
                  "Trajectory CSV with all window boundaries (error reporting)");
  par->add_option("--reference-seconds", par_args.cfg.reference_seconds,
                  "Wall-clock seconds of the sequential reference (actual speed-up)");

  CLI::App* sweep = app.add_subcommand("sweep", "Cross-product of parareal runs");
  add_common_options(*sweep, sweep_args);
  pintdae::cli::SweepSpec spec;
  sweep->add_option("--sweep-n-windows", spec.n_windows, "List of window counts")
      ->delimiter(',');
  sweep->add_option("--sweep-dt-fine", spec.dt_fine, "List of fine steps")->delimiter(',');
  sweep->add_option("--sweep-dt-coarse", spec.dt_coarse, "List of coarse steps")
      ->delimiter(',');
  sweep->add_option("--sweep-tol", spec.tol, "List of tolerances")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (seq->parsed()) return pintdae::cli::cmd_sequential(finalize(seq_args), std::cout);
    if (par->parsed()) return pintdae::cli::cmd_parareal(finalize(par_args), std::cout);
    return pintdae::cli::cmd_sweep(finalize(sweep_args), spec, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
