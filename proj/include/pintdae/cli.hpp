// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "pintdae/models.hpp"
#include "pintdae/parareal.hpp"

namespace pintdae::cli {

enum class ModelKind { analytic2x2, rod, rod_nonlinear, coupled };

ModelKind parse_model(const std::string& name);
NormMode parse_norm_mode(const std::string& name);
UpdateMode parse_update_mode(const std::string& name);

struct RunConfig {
  ModelKind model = ModelKind::rod;
  std::map<std::string, double> model_overrides;
  double t_end = 0.2;
  int n_windows = 40;
  double dt_fine = 1e-5;
  double dt_coarse = 1e-3;
  double tol = 1e-2;
  int max_iter = 0;  ///< 0 -> n_windows
  NormMode norm_mode = NormMode::differential;
  UpdateMode update_mode = UpdateMode::projected_consistent;
  int workers = 1;
  unsigned seed = 0;              ///< used only for the initial perturbation
  double perturb_algebraic = 0.0; ///< noise magnitude on algebraic components of u0
  std::string output_path;
  std::string reference_path;     ///< parareal: optional trajectory file
  double reference_seconds = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
  PararealConfig parareal_config() const;
};

/// Builds the configured model; override keys mirror the model struct fields
/// (e.g. n_cells, sigma, nu, inertia). Unknown keys raise StructureError.
DaeSystem build_model(ModelKind kind, const std::map<std::string, double>& overrides,
                      double t_end);

/// Initial state of the model, with optional seeded noise on the algebraic
/// components.
StateVector initial_state(const DaeSystem& sys, double perturb_algebraic, unsigned seed);

/// Sequential fine reference run; writes boundary-time snapshots to
/// output_path when set. Returns the process exit code.
int cmd_sequential(const RunConfig& cfg, std::ostream& log);

/// Parareal run; writes the per-(iteration, window) CSV to output_path when
/// set. Exit code 0 on convergence, 2 when max_iter was exhausted.
int cmd_parareal(const RunConfig& cfg, std::ostream& log);

/// Cross-product of parameter lists; empty lists fall back to the template
/// value. One CSV row per (run, iteration); individual run failures are
/// recorded per row and the sweep continues.
struct SweepSpec {
  std::vector<int> n_windows;
  std::vector<double> dt_fine;
  std::vector<double> dt_coarse;
  std::vector<double> tol;
};

int cmd_sweep(const RunConfig& cfg, const SweepSpec& spec, std::ostream& log);

}  // namespace pintdae::cli
