// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "pintdae/dae.hpp"

namespace pintdae::models {

/// 1D eddy-current rod on [0, length] with homogeneous Dirichlet ends,
/// discretized by central finite differences on a uniform grid. Conductivity
/// lives on cells and vanishes outside the conducting core, so the lumped
/// mass matrix is genuinely singular. The source is a time-sinusoidal current
/// density on the winding subinterval.
struct RodModel {
  int n_cells = 101;
  double length = 1.0;

  double sigma = 100.0;                 ///< conductivity inside the core (S/m equivalent)
  double core_lo = 0.25, core_hi = 0.75;  ///< conducting core as fractions of length
  std::vector<double> sigma_profile;    ///< optional explicit per-cell conductivity

  double nu = 1.0;                      ///< reluctivity for the linear variant

  /// Optional saturation curve ν(b²) and its derivative dν/d(b²). When set,
  /// the stiffness becomes state dependent. Without the derivative the
  /// stepper falls back to frozen-stiffness iteration.
  std::function<double(double)> reluctivity;
  std::function<double(double)> reluctivity_derivative;

  double source_amplitude = 100.0;
  double source_frequency = 50.0;       ///< Hz
  double winding_lo = 0.05, winding_hi = 0.20;  ///< excited subinterval, fractions

  /// Fills sigma_profile from sigma/core bounds when empty.
  std::vector<double> resolved_sigma_profile() const;
  void validate() const;
};

/// Monotone rational saturation curve ν(s) = nu_min + (nu_max - nu_min) s/(s + b_sat²)
/// together with its derivative; the standard nonlinear configuration.
void set_saturation_curve(RodModel& m, double nu_min, double nu_max, double b_sat);

/// Rod coupled to a one-degree-of-freedom rotation: dθ/dt = ω and
/// I dω/dt + κ θ = T(a) with a torque functional linear in the field state.
struct CoupledToyModel {
  RodModel field;
  double inertia = 1.0;
  double torsion = 1.0;        ///< restoring coefficient κ
  double torque_scale = 10.0;  ///< weight of the mean-field torque functional
  double theta0 = 0.0;
  double omega0 = 0.0;

  void validate() const;
};

/// Minimal index-1 witness: M = diag(1,0), K = [[2,-1],[-1,2]], f = 0,
/// t ∈ [0, t_end]. The constraint forces u₂ = u₁/2, so u₁' = -1.5 u₁ with
/// exact solution attached as reference_solution.
DaeSystem build_analytic_2x2(double t_end = 1.0, double u1_initial = 1.0);

DaeSystem build_rod(const RodModel& m, double t_end = 0.2);

DaeSystem build_coupled(const CoupledToyModel& m, double t_end = 0.2);

}  // namespace pintdae::models
