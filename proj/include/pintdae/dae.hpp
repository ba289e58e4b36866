// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>

#include "pintdae/linalg.hpp"

namespace pintdae {

/// State of a system at one time instant.
struct StateVector {
  Vector values;
  double time = 0.0;
};

/// K(u): state-dependent stiffness operator. Constant for linear systems.
using StiffnessFn = std::function<Matrix(const Vector&)>;

/// Directional derivative of u ↦ K(u)u: (u, v) ↦ d/dε [K(u+εv)(u+εv)] at ε=0.
using JacobianActionFn = std::function<Vector(const Vector&, const Vector&)>;

/// f(t): source term.
using SourceFn = std::function<Vector(double)>;

/// Closed-form solution (t, consistent initial value) ↦ u(t), when available.
using ReferenceFn = std::function<Vector(double, const Vector&)>;

/// Semi-discrete index-1 system M du/dt + K(u) u = f(t) with a possibly
/// singular mass matrix. Immutable after construction; the stiffness and
/// source callbacks must be re-entrant so instances can be shared across
/// worker threads.
struct DaeSystem {
  Index n = 0;
  Matrix mass;
  StiffnessFn stiffness;
  JacobianActionFn stiffness_jacobian_action;  ///< empty -> frozen-stiffness iteration
  SourceFn source;
  ProjectorPair projectors;
  bool linear = true;
  std::pair<double, double> t_span{0.0, 1.0};

  StateVector initial_state;       ///< model-supplied consistent initial value
  ReferenceFn reference_solution;  ///< optional closed-form solution

  bool has_algebraic() const { return !projectors.algebraic_index_set.empty(); }

  /// Cheap shape checks on the callbacks and stored members.
  void validate() const;
};

struct ConsistencyOptions {
  double tol = 1e-8;  ///< on ‖(K(u)u - f)‖₂ over algebraic rows, relative to 1 + ‖f‖₂
  int max_iter = 50;
};

/// Splits u into (P·u, u - P·u). The two parts sum to u exactly.
std::pair<Vector, Vector> split_state(const DaeSystem& sys, const StateVector& u);

/// Returns a state with the same differential components whose algebraic
/// components satisfy the stationary constraint rows of K(u)u = f(u.time).
/// Differential entries are copied bitwise; only algebraic entries change.
/// Nonlinear constraints are solved by Newton on the algebraic block with
/// the differential block frozen.
StateVector make_consistent(const DaeSystem& sys, const StateVector& u,
                            const ConsistencyOptions& opts = {});

/// M·du_dt + K(u)·u - f(u.time).
Vector residual(const DaeSystem& sys, const StateVector& u, const Vector& du_dt);

/// ‖(K(u)u - f(u.time))‖₂ restricted to algebraic rows; zero for pure ODEs.
double algebraic_residual_norm(const DaeSystem& sys, const StateVector& u);

}  // namespace pintdae
