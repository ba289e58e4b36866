// SPDX-License-Identifier: Apache-2.0
#include "pintdae/linalg.hpp"

#include <cmath>
#include <sstream>

namespace pintdae {

namespace {

void require_shape(Index rows, Index cols) {
  if (rows < 1 || cols < 1) {
    std::ostringstream msg;
    msg << "matrix shape must be at least 1x1, got " << rows << "x" << cols;
    throw StructureError(msg.str());
  }
}

}  // namespace

Matrix::Matrix(Eigen::MatrixXd values, bool symmetric, double symmetry_rel)
    : m_(std::move(values)), symmetric_(symmetric) {
  require_shape(m_.rows(), m_.cols());
  if (symmetric_) {
    if (m_.rows() != m_.cols()) {
      throw StructureError("symmetric-flagged matrix must be square");
    }
    const double scale = m_.cwiseAbs().maxCoeff();
    const double gap = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (gap > symmetry_rel * scale) {
      std::ostringstream msg;
      msg << "symmetric-flagged matrix violates symmetry: max |a_ij - a_ji| = "
          << gap << " exceeds " << symmetry_rel << " * max|a| = " << symmetry_rel * scale;
      throw StructureError(msg.str());
    }
  }
}

Matrix Matrix::zero(Index rows, Index cols) {
  require_shape(rows, cols);
  return Matrix(Eigen::MatrixXd::Zero(rows, cols));
}

Matrix Matrix::identity(Index n) {
  require_shape(n, n);
  return Matrix(Eigen::MatrixXd::Identity(n, n), true);
}

Matrix Matrix::diagonal(const Vector& d) {
  require_shape(d.size(), d.size());
  return Matrix(Eigen::MatrixXd(d.asDiagonal()), true);
}

double Matrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

Vector Matrix::apply(const Vector& x) const {
  if (x.size() != cols()) {
    std::ostringstream msg;
    msg << "matrix-vector dimension mismatch: " << rows() << "x" << cols()
        << " applied to vector of length " << x.size();
    throw StructureError(msg.str());
  }
  return m_ * x;
}

LuSolver::LuSolver(const Matrix& a, double pivot_rel) : LuSolver(a.data(), pivot_rel) {}

LuSolver::LuSolver(const Eigen::MatrixXd& a, double pivot_rel) {
  if (a.rows() != a.cols()) {
    throw StructureError("linear solve requires a square matrix");
  }
  n_ = a.rows();
  lu_.compute(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (scale == 0.0 || min_pivot < pivot_rel * scale) {
    std::ostringstream msg;
    msg << "singular matrix: smallest pivot " << min_pivot << " below threshold "
        << pivot_rel * scale;
    throw SingularMatrixError(msg.str());
  }
}

Vector LuSolver::solve(const Vector& b) const {
  if (b.size() != n_) {
    std::ostringstream msg;
    msg << "right-hand side length " << b.size() << " does not match matrix size " << n_;
    throw StructureError(msg.str());
  }
  return lu_.solve(b);
}

Vector solve_linear(const Matrix& a, const Vector& b, double pivot_rel) {
  return LuSolver(a, pivot_rel).solve(b);
}

ProjectorPair build_projectors(const Matrix& m, const LinalgTolerances& tol) {
  if (m.rows() != m.cols()) {
    throw StructureError("mass matrix must be square");
  }
  const Index n = m.rows();
  const Eigen::MatrixXd& a = m.data();

  // Support = rows/columns where the mass matrix acts. Off-support entries
  // are exactly zero by this definition.
  std::vector<Index> support;
  std::vector<Index> complement;
  for (Index i = 0; i < n; ++i) {
    const bool nonzero = a.row(i).cwiseAbs().maxCoeff() != 0.0 ||
                         a.col(i).cwiseAbs().maxCoeff() != 0.0;
    (nonzero ? support : complement).push_back(i);
  }

  ProjectorPair pair;
  pair.differential_index_set = support;
  pair.algebraic_index_set = complement;

  if (support.empty()) {
    pair.p = Matrix::zero(n, n);
    pair.q = Matrix::identity(n);
    return pair;
  }

  const Index s = static_cast<Index>(support.size());
  Eigen::MatrixXd block(s, s);
  for (Index r = 0; r < s; ++r)
    for (Index c = 0; c < s; ++c) block(r, c) = a(support[r], support[c]);

  const double scale = m.max_abs();
  const double gap = (block - block.transpose()).cwiseAbs().maxCoeff();
  if (gap > tol.symmetry_rel * scale) {
    throw StructureError("mass matrix is not symmetric on its support");
  }

  Eigen::MatrixXd p_block(s, s);
  const bool diagonal_block = (block - Eigen::MatrixXd(block.diagonal().asDiagonal()))
                                  .cwiseAbs().maxCoeff() == 0.0;
  if (diagonal_block) {
    // Lumped-mass fast path: the pseudo inverse inverts each diagonal entry.
    p_block.setZero();
    for (Index r = 0; r < s; ++r) {
      const double v = block(r, r);
      if (v <= 0.0) {
        throw StructureError("mass matrix support block has a non-positive diagonal entry");
      }
      p_block(r, r) = (1.0 / v) * v;
    }
  } else {
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success) {
      throw StructureError(
          "mass matrix restricted to its support is not positive definite; "
          "system is not index-1 under the assumed structure");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(s, s));
    p_block = inv * block;
  }

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Index r = 0; r < s; ++r)
    for (Index c = 0; c < s; ++c) p(support[r], support[c]) = p_block(r, c);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - p;

  // The construction is only accepted when the projector identities hold to
  // the module tolerance; a violation means the block was too ill-conditioned.
  const double e_idem = (p * p - p).cwiseAbs().maxCoeff();
  const double e_cross = (p * q).cwiseAbs().maxCoeff();
  const double e_mass = (a * q).cwiseAbs().maxCoeff();
  if (e_idem > tol.projector_rel || e_cross > tol.projector_rel ||
      e_mass > tol.projector_rel * scale) {
    throw StructureError("projector construction failed its accuracy check; "
                         "mass support block is too ill-conditioned");
  }

  pair.p = Matrix(std::move(p));
  pair.q = Matrix(std::move(q));
  return pair;
}

}  // namespace pintdae
