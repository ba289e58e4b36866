// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "pintdae/models.hpp"

using namespace pintdae;

namespace {

DaeSystem two_by_two() { return models::build_analytic_2x2(); }

}  // namespace

TEST_CASE("split_state: diagonal projector") {
  const DaeSystem sys = two_by_two();
  const auto [differential, algebraic] = split_state(sys, {Vector{{3.0, 7.0}}, 0.0});
  CHECK(differential.isApprox(Vector{{3.0, 0.0}}, 1e-14));
  CHECK(algebraic.isApprox(Vector{{0.0, 7.0}}, 1e-14));
}

TEST_CASE("split_state: parts sum back exactly") {
  const DaeSystem sys = two_by_two();
  const Vector u{{2.0, 5.0}};
  const auto [differential, algebraic] = split_state(sys, {u, 0.0});
  CHECK((differential + algebraic) == u);  // bitwise
}

TEST_CASE("split_state: fully differential system has no algebraic part") {
  models::RodModel m;
  m.n_cells = 8;
  m.sigma_profile.assign(8, 2.0);  // pure ODE sanity configuration
  const DaeSystem sys = models::build_rod(m);
  CHECK_FALSE(sys.has_algebraic());
  const Vector u = Vector::Constant(sys.n, 1.5);
  const auto [differential, algebraic] = split_state(sys, {u, 0.0});
  CHECK(algebraic.norm() == doctest::Approx(0.0));
}

TEST_CASE("make_consistent: algebraic row forces u2 = u1/2") {
  const DaeSystem sys = two_by_two();
  const StateVector fixed = make_consistent(sys, {Vector{{1.0, 99.0}}, 0.0});
  CHECK(fixed.values[0] == 1.0);  // differential components copied bitwise
  CHECK(fixed.values[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("make_consistent: zero state stays zero, idempotence") {
  const DaeSystem sys = two_by_two();
  const StateVector zero = make_consistent(sys, {Vector::Zero(2), 0.0});
  CHECK(zero.values.norm() == doctest::Approx(0.0));

  const StateVector once = make_consistent(sys, {Vector{{-4.0, 3.0}}, 0.0});
  const StateVector twice = make_consistent(sys, once);
  CHECK((twice.values - once.values).norm() <= 1e-12 * once.values.norm());
}

TEST_CASE("make_consistent: no-op for fully differential systems") {
  models::RodModel m;
  m.n_cells = 8;
  m.sigma_profile.assign(8, 1.0);
  const DaeSystem sys = models::build_rod(m);
  const Vector u = Vector::Constant(sys.n, 0.3);
  const StateVector out = make_consistent(sys, {u, 0.1});
  CHECK(out.values == u);
}

TEST_CASE("make_consistent: singular algebraic block raises") {
  DaeSystem sys = two_by_two();
  sys.stiffness = [](const Vector&) {
    Eigen::MatrixXd k(2, 2);
    k << 2.0, -1.0, 3.0, 0.0;  // constraint violated but not solvable for u2
    return Matrix(k);
  };
  CHECK_THROWS_AS(make_consistent(sys, {Vector{{1.0, 1.0}}, 0.0}), SingularMatrixError);
}

TEST_CASE("make_consistent: iteration budget exhaustion raises with the residual") {
  const DaeSystem sys = two_by_two();
  ConsistencyOptions opts;
  opts.tol = 1e-30;  // unreachable in one pass of floating-point arithmetic
  opts.max_iter = 0;
  try {
    make_consistent(sys, {Vector{{1.0, 99.0}}, 0.0}, opts);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("residual: equilibrium and pure mass action") {
  const DaeSystem sys = two_by_two();
  SUBCASE("consistent stationary state of K u = f") {
    // f = 0 and u = 0 is the stationary state of the homogeneous model.
    const Vector r = residual(sys, {Vector::Zero(2), 0.0}, Vector::Zero(2));
    CHECK(r.norm() == doctest::Approx(0.0));
  }
  SUBCASE("M = I, K = 0, f = 0") {
    DaeSystem ode;
    ode.n = 3;
    ode.mass = Matrix::identity(3);
    ode.stiffness = [](const Vector&) { return Matrix::zero(3, 3); };
    ode.source = [](double) { return Vector::Zero(3); };
    ode.projectors = build_projectors(ode.mass);
    ode.initial_state = {Vector::Zero(3), 0.0};
    const Vector r = residual(ode, {Vector::Zero(3), 0.0}, Vector::Ones(3));
    CHECK(r.isApprox(Vector::Ones(3), 1e-14));
  }
}

TEST_CASE("residual: analytic solution satisfies the equations") {
  // u1(t) = e^{-1.5 t}, u2 = u1/2, du/dt = -1.5 u1 * (1, 0.5).
  const DaeSystem sys = two_by_two();
  const Vector u{{1.0, 0.5}};
  const Vector du{{-1.5, -0.75}};
  const Vector r = residual(sys, {u, 0.0}, du);
  CHECK(std::abs(r[0]) <= 1e-12);
  CHECK(std::abs(r[1]) <= 1e-12);
}

TEST_CASE("residual: exact solution stays on the manifold over time") {
  const DaeSystem sys = two_by_two();
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const Vector u = sys.reference_solution(t, sys.initial_state.values);
    const Vector du = -1.5 * u;
    CHECK(residual(sys, {u, t}, du).norm() <= 1e-12);
  }
}

TEST_CASE("dimension mismatches raise") {
  const DaeSystem sys = two_by_two();
  CHECK_THROWS_AS(split_state(sys, {Vector::Zero(3), 0.0}), StructureError);
  CHECK_THROWS_AS(residual(sys, {Vector::Zero(2), 0.0}, Vector::Zero(3)), StructureError);
  CHECK_THROWS_AS(make_consistent(sys, {Vector::Zero(5), 0.0}), StructureError);
}
