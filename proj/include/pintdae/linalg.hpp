// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pintdae/errors.hpp"

namespace pintdae {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds used across the linear-algebra layer. Every user is
/// free to pass its own instance; these are the module defaults.
struct LinalgTolerances {
  double symmetry_rel = 1e-12;  ///< |a_ij - a_ji| <= symmetry_rel * max|a|
  double projector_rel = 1e-12; ///< projector identities, entrywise
  double pivot_rel = 1e-14;     ///< rank deficiency: |pivot| < pivot_rel * max|a|
};

/// Dense real matrix with an optional symmetry promise checked at construction.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(Eigen::MatrixXd values, bool symmetric = false,
                  double symmetry_rel = LinalgTolerances{}.symmetry_rel);

  static Matrix zero(Index rows, Index cols);
  static Matrix identity(Index n);
  static Matrix diagonal(const Vector& d);

  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  bool symmetric() const { return symmetric_; }
  double max_abs() const;

  Vector apply(const Vector& x) const;

  const Eigen::MatrixXd& data() const { return m_; }

 private:
  Eigen::MatrixXd m_;
  bool symmetric_ = false;
};

/// LU factorization with an explicit rank-deficiency check, reusable for
/// repeated solves against the same matrix. Immutable after construction.
class LuSolver {
 public:
  explicit LuSolver(const Matrix& a, double pivot_rel = LinalgTolerances{}.pivot_rel);
  explicit LuSolver(const Eigen::MatrixXd& a, double pivot_rel = LinalgTolerances{}.pivot_rel);

  Vector solve(const Vector& b) const;
  Index size() const { return n_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Index n_ = 0;
};

/// Solves a x = b by dense LU. Throws SingularMatrixError on rank deficiency.
Vector solve_linear(const Matrix& a, const Vector& b,
                    double pivot_rel = LinalgTolerances{}.pivot_rel);

/// Complementary projectors splitting a state into differential components
/// (the range of the mass matrix) and algebraic components.
struct ProjectorPair {
  Matrix p;  ///< onto differential components
  Matrix q;  ///< onto algebraic components, q = I - p
  std::vector<Index> differential_index_set;  ///< rows where the mass matrix acts
  std::vector<Index> algebraic_index_set;     ///< complement
};

/// Builds P = M⁺M and Q = I - P for a (possibly singular) mass matrix whose
/// restriction to its nonzero support is symmetric positive definite. The
/// pseudo inverse is the inverse of that restriction padded with zeros, which
/// is exact for the block structure produced by non-conducting regions.
///
/// Throws StructureError when the support block is not SPD (the system would
/// not be index-1 under the assumed structure).
ProjectorPair build_projectors(const Matrix& m, const LinalgTolerances& tol = {});

}  // namespace pintdae
