// SPDX-License-Identifier: Apache-2.0
#include "pintdae/dae.hpp"

#include <cmath>
#include <sstream>

namespace pintdae {

namespace {

void require_conforming(const DaeSystem& sys, const Vector& v, const char* what) {
  if (v.size() != sys.n) {
    std::ostringstream msg;
    msg << what << " has length " << v.size() << ", system dimension is " << sys.n;
    throw StructureError(msg.str());
  }
}

Vector gather(const Vector& v, const std::vector<Index>& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (Index k = 0; k < out.size(); ++k) out[k] = v[idx[k]];
  return out;
}

Eigen::MatrixXd gather_block(const Eigen::MatrixXd& a, const std::vector<Index>& rows,
                             const std::vector<Index>& cols) {
  Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (Index r = 0; r < out.rows(); ++r)
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = a(rows[r], cols[c]);
  return out;
}

}  // namespace

void DaeSystem::validate() const {
  if (n < 1) throw StructureError("system dimension must be at least 1");
  if (mass.rows() != n || mass.cols() != n) {
    throw StructureError("mass matrix shape does not match system dimension");
  }
  if (!stiffness) throw StructureError("stiffness callback is required");
  if (!source) throw StructureError("source callback is required");
  const Matrix k = stiffness(Vector::Zero(n));
  if (k.rows() != n || k.cols() != n) {
    throw StructureError("stiffness(u) shape does not match system dimension");
  }
  if (source(t_span.first).size() != n) {
    throw StructureError("source(t) length does not match system dimension");
  }
  if (projectors.p.rows() != n || projectors.q.rows() != n) {
    throw StructureError("projector shape does not match system dimension");
  }
  if (!(t_span.second > t_span.first)) {
    throw StructureError("t_span must satisfy t_end > t0");
  }
}

std::pair<Vector, Vector> split_state(const DaeSystem& sys, const StateVector& u) {
  require_conforming(sys, u.values, "state");
  Vector differential = sys.projectors.p.apply(u.values);
  Vector algebraic = u.values - differential;
  return {std::move(differential), std::move(algebraic)};
}

StateVector make_consistent(const DaeSystem& sys, const StateVector& u,
                            const ConsistencyOptions& opts) {
  require_conforming(sys, u.values, "state");
  if (!sys.has_algebraic()) return u;

  const auto& alg = sys.projectors.algebraic_index_set;
  const Index na = static_cast<Index>(alg.size());
  const Vector f = sys.source(u.time);
  const double tol = opts.tol * (1.0 + f.norm());

  StateVector out = u;
  double res_norm = 0.0;
  for (int it = 0; it <= opts.max_iter; ++it) {
    const Matrix k = sys.stiffness(out.values);
    const Vector full_residual = k.apply(out.values) - f;
    const Vector r = gather(full_residual, alg);
    res_norm = r.norm();
    if (res_norm <= tol) return out;
    if (it == opts.max_iter) break;

    Eigen::MatrixXd jac(na, na);
    if (!sys.linear && sys.stiffness_jacobian_action) {
      // Newton: assemble the algebraic block of d/du [K(u)u] column by column.
      Vector e = Vector::Zero(sys.n);
      for (Index c = 0; c < na; ++c) {
        e[alg[c]] = 1.0;
        const Vector col = sys.stiffness_jacobian_action(out.values, e);
        for (Index rr = 0; rr < na; ++rr) jac(rr, c) = col[alg[rr]];
        e[alg[c]] = 0.0;
      }
    } else {
      // Linear systems: exact in one solve. Otherwise frozen-stiffness iteration.
      jac = gather_block(k.data(), alg, alg);
    }

    Vector delta;
    try {
      delta = LuSolver(jac).solve(-r);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError(
          "algebraic block of the stiffness operator is singular; "
          "the system is not index-1 at this state");
    }
    for (Index c = 0; c < na; ++c) out.values[alg[c]] += delta[c];
  }

  std::ostringstream msg;
  msg << "consistency solve did not converge after " << opts.max_iter
      << " iterations; last algebraic residual " << res_norm;
  throw NonConvergenceError(msg.str(), res_norm);
}

Vector residual(const DaeSystem& sys, const StateVector& u, const Vector& du_dt) {
  require_conforming(sys, u.values, "state");
  require_conforming(sys, du_dt, "du_dt");
  return sys.mass.apply(du_dt) + sys.stiffness(u.values).apply(u.values) - sys.source(u.time);
}

double algebraic_residual_norm(const DaeSystem& sys, const StateVector& u) {
  require_conforming(sys, u.values, "state");
  if (!sys.has_algebraic()) return 0.0;
  const Vector full = sys.stiffness(u.values).apply(u.values) - sys.source(u.time);
  return gather(full, sys.projectors.algebraic_index_set).norm();
}

}  // namespace pintdae
