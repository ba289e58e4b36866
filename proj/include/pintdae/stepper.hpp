// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "pintdae/dae.hpp"

namespace pintdae {

struct PropagatorConfig {
  double dt = 1e-3;          ///< uniform step size
  double newton_tol = 1e-10; ///< relative nonlinear residual tolerance
  int newton_max_iter = 25;
  std::string label;         ///< "fine" | "coarse" | free-form, used in error messages

  void validate() const;
};

/// One implicit Euler step from u_i to u_i.time + dt, solving
///   (M/dt + K(u)) u = f(t+dt) + (M/dt) u_i
/// by Newton iteration. Linear systems take exactly one linear solve. The
/// singular mass makes the step insensitive to inconsistent algebraic input
/// components: M u_i = M P u_i, so the constraint is enforced from step one.
StateVector euler_step(const DaeSystem& sys, const StateVector& u_i, double dt,
                       const PropagatorConfig& cfg);

/// Solution operator (t_target, t_start, u_start) ↦ u(t_target) realized by
/// uniform implicit Euler steps. Immutable; safe to call concurrently.
class Propagator {
 public:
  Propagator(const DaeSystem& sys, PropagatorConfig cfg);

  /// Applies ceil((t_target - t_start)/dt) steps of uniform size
  /// (t_target - t_start)/steps, so the last step lands exactly on t_target.
  StateVector propagate(double t_target, double t_start, const StateVector& u_start) const;

  const PropagatorConfig& config() const { return cfg_; }
  const DaeSystem& system() const { return *sys_; }

 private:
  const DaeSystem* sys_;
  PropagatorConfig cfg_;
};

/// Chained fine propagation over a set of time points: out[0] = u0,
/// out[j] = propagate(points[j], points[j-1], out[j-1]). This is the
/// sequential reference solution evaluated at the given points.
std::vector<StateVector> sequential_trajectory(const DaeSystem& sys, const StateVector& u0,
                                               const std::vector<double>& points,
                                               const PropagatorConfig& cfg);

}  // namespace pintdae
