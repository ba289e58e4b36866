// SPDX-License-Identifier: Apache-2.0
#include "pintdae/stepper.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

namespace pintdae {

namespace {

Eigen::MatrixXd assemble_jacobian(const DaeSystem& sys, const Vector& u) {
  Eigen::MatrixXd jac(sys.n, sys.n);
  Vector e = Vector::Zero(sys.n);
  for (Index c = 0; c < sys.n; ++c) {
    e[c] = 1.0;
    jac.col(c) = sys.stiffness_jacobian_action(u, e);
    e[c] = 0.0;
  }
  return jac;
}

// Core step shared by euler_step and Propagator::propagate. `t_next` is the
// time stamp of the result; `solver` carries the factored iteration matrix
// for linear systems when the caller reuses it across steps.
StateVector step_once(const DaeSystem& sys, const StateVector& u_i, double dt, double t_next,
                      const PropagatorConfig& cfg, const LuSolver* solver,
                      const Eigen::MatrixXd* iteration_matrix) {
  const Vector rhs = sys.source(t_next) + sys.mass.apply(u_i.values) / dt;
  const double target = cfg.newton_tol * (1.0 + rhs.norm());

  if (sys.linear) {
    std::optional<LuSolver> local;
    Eigen::MatrixXd local_matrix;
    if (solver == nullptr) {
      local_matrix = sys.mass.data() / dt + sys.stiffness(u_i.values).data();
      iteration_matrix = &local_matrix;
      local.emplace(local_matrix);
      solver = &*local;
    }
    Vector x = solver->solve(rhs);
    const double res = (*iteration_matrix * x - rhs).norm();
    if (!(res <= target)) {
      std::ostringstream msg;
      msg << "linear implicit Euler step left residual " << res << " above tolerance " << target;
      throw NonConvergenceError(msg.str(), res);
    }
    return {std::move(x), t_next};
  }

  // Newton when a Jacobian action is supplied, frozen-stiffness iteration
  // otherwise. Initial guess: the previous time-step value.
  Vector u = u_i.values;
  double res = 0.0;
  for (int it = 0; it <= cfg.newton_max_iter; ++it) {
    const Matrix k = sys.stiffness(u);
    const Vector r = sys.mass.apply(u) / dt + k.apply(u) - rhs;
    res = r.norm();
    if (res <= target) return {std::move(u), t_next};
    if (it == cfg.newton_max_iter) break;

    Eigen::MatrixXd jac = sys.mass.data() / dt;
    if (sys.stiffness_jacobian_action) {
      jac += assemble_jacobian(sys, u);
    } else {
      jac += k.data();
    }
    u += LuSolver(jac).solve(-r);
  }

  std::ostringstream msg;
  msg << "implicit Euler nonlinear solve ('" << cfg.label << "') did not converge after "
      << cfg.newton_max_iter << " iterations; last residual " << res;
  throw NonConvergenceError(msg.str(), res);
}

}  // namespace

void PropagatorConfig::validate() const {
  if (!(dt > 0.0)) throw StructureError("propagator dt must be positive");
  if (!(newton_tol > 0.0)) throw StructureError("newton_tol must be positive");
  if (newton_max_iter < 1) throw StructureError("newton_max_iter must be at least 1");
}

StateVector euler_step(const DaeSystem& sys, const StateVector& u_i, double dt,
                       const PropagatorConfig& cfg) {
  if (!(dt > 0.0)) throw StructureError("euler_step requires dt > 0");
  if (u_i.values.size() != sys.n) throw StructureError("state does not conform to system");
  return step_once(sys, u_i, dt, u_i.time + dt, cfg, nullptr, nullptr);
}

Propagator::Propagator(const DaeSystem& sys, PropagatorConfig cfg)
    : sys_(&sys), cfg_(std::move(cfg)) {
  cfg_.validate();
}

StateVector Propagator::propagate(double t_target, double t_start,
                                  const StateVector& u_start) const {
  if (!(t_target > t_start)) {
    throw StructureError("propagate requires t_target > t_start");
  }
  if (std::abs(u_start.time - t_start) > 1e-9 * std::max(1.0, std::abs(t_start))) {
    std::ostringstream msg;
    msg << "u_start.time = " << u_start.time << " does not match t_start = " << t_start;
    throw StructureError(msg.str());
  }

  const double span = t_target - t_start;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(span / cfg_.dt - 1e-9)));
  const double dt = span / static_cast<double>(steps);

  // Linear systems share one factorization across all steps of this call.
  std::optional<Eigen::MatrixXd> matrix;
  std::optional<LuSolver> solver;
  if (sys_->linear) {
    matrix.emplace(sys_->mass.data() / dt + sys_->stiffness(u_start.values).data());
    solver.emplace(*matrix);
  }

  StateVector u = u_start;
  for (long i = 1; i <= steps; ++i) {
    const double t_next = (i == steps) ? t_target : t_start + static_cast<double>(i) * dt;
    try {
      u = step_once(*sys_, u, dt, t_next, cfg_,
                    solver ? &*solver : nullptr, matrix ? &*matrix : nullptr);
    } catch (const NonConvergenceError& e) {
      std::ostringstream msg;
      msg << "step " << i << "/" << steps << " failed: " << e.what();
      throw NonConvergenceError(msg.str(), e.last_residual());
    } catch (const SingularMatrixError& e) {
      std::ostringstream msg;
      msg << "step " << i << "/" << steps << " failed: " << e.what();
      throw SingularMatrixError(msg.str());
    }
  }
  return u;
}

std::vector<StateVector> sequential_trajectory(const DaeSystem& sys, const StateVector& u0,
                                               const std::vector<double>& points,
                                               const PropagatorConfig& cfg) {
  const Propagator fine(sys, cfg);
  std::vector<StateVector> out;
  out.reserve(points.size());
  out.push_back(u0);
  for (std::size_t j = 1; j < points.size(); ++j) {
    out.push_back(fine.propagate(points[j], points[j - 1], out.back()));
  }
  return out;
}

}  // namespace pintdae
