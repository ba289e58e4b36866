// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "pintdae/models.hpp"
#include "pintdae/stepper.hpp"

using namespace pintdae;

namespace {

// Scalar ODE u' = -2u as a 1x1 system.
DaeSystem scalar_decay() {
  DaeSystem sys;
  sys.n = 1;
  sys.mass = Matrix::identity(1);
  sys.stiffness = [](const Vector&) { return Matrix::diagonal(Vector{{2.0}}); };
  sys.source = [](double) { return Vector::Zero(1); };
  sys.projectors = build_projectors(sys.mass);
  sys.t_span = {0.0, 1.0};
  sys.initial_state = {Vector{{1.0}}, 0.0};
  return sys;
}

const PropagatorConfig kTightCfg{1e-3, 1e-10, 25, "test"};

}  // namespace

TEST_CASE("euler_step: closed form for the scalar decay") {
  const DaeSystem sys = scalar_decay();
  const StateVector u1 = euler_step(sys, sys.initial_state, 0.1, kTightCfg);
  CHECK(u1.values[0] == doctest::Approx(1.0 / 1.2).epsilon(1e-14));
  CHECK(u1.time == doctest::Approx(0.1));
}

TEST_CASE("euler_step: stationary state is a fixed point") {
  // Constant source f with K u0 = f: the step must return u0.
  DaeSystem sys = scalar_decay();
  sys.source = [](double) { return Vector{{2.0}}; };  // K=2, u0=1 -> K u0 = f
  const StateVector u1 = euler_step(sys, sys.initial_state, 0.05, kTightCfg);
  CHECK(u1.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("euler_step: inconsistent algebraic input is projected away") {
  const DaeSystem sys = models::build_analytic_2x2();
  const StateVector inconsistent{Vector{{1.0, 99.0}}, 0.0};
  const StateVector u1 = euler_step(sys, inconsistent, 0.1, kTightCfg);
  // Algebraic row of the step system holds exactly: -u1 + 2 u2 = 0.
  CHECK(std::abs(-u1.values[0] + 2.0 * u1.values[1]) <= 1e-12);

  const StateVector consistent = make_consistent(sys, inconsistent);
  const StateVector v1 = euler_step(sys, consistent, 0.1, kTightCfg);
  CHECK((u1.values - v1.values).norm() <= 1e-10 * v1.values.norm());
}

TEST_CASE("euler_step: nonlinear rod keeps the constraint from step one") {
  models::RodModel m;
  m.n_cells = 24;
  models::set_saturation_curve(m, 1.0, 5.0, 1.0);
  const DaeSystem sys = models::build_rod(m, 0.02);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  StateVector u0 = sys.initial_state;
  for (Index k : sys.projectors.algebraic_index_set) u0.values[k] += noise(rng);

  const StateVector u1 = euler_step(sys, u0, 1e-4, kTightCfg);
  const double gate = kTightCfg.newton_tol * (1.0 + sys.source(u1.time).norm());
  CHECK(algebraic_residual_norm(sys, u1) <= gate);

  const StateVector v1 = euler_step(sys, make_consistent(sys, u0), 1e-4, kTightCfg);
  CHECK((u1.values - v1.values).norm() <= 1e-10 * (1.0 + v1.values.norm()));
}

TEST_CASE("euler_step: newton failure reports the last residual") {
  DaeSystem sys = scalar_decay();
  sys.linear = false;
  // A stiffness whose true solution keeps moving: force max_iter = 1 with a
  // strongly state-dependent operator so the first iterate cannot converge.
  sys.stiffness = [](const Vector& u) {
    return Matrix::diagonal(Vector{{2.0 + 10.0 * std::sin(40.0 * u[0])}});
  };
  PropagatorConfig cfg = kTightCfg;
  cfg.newton_max_iter = 1;
  cfg.newton_tol = 1e-14;
  CHECK_THROWS_AS(euler_step(sys, {Vector{{1.0}}, 0.0}, 0.3, cfg), NonConvergenceError);
}

TEST_CASE("euler_step: frozen-stiffness fallback without a jacobian action") {
  models::RodModel m;
  m.n_cells = 20;
  models::set_saturation_curve(m, 1.0, 5.0, 1.0);
  const DaeSystem with_action = models::build_rod(m, 0.02);

  models::RodModel m2 = m;
  m2.reluctivity_derivative = nullptr;  // forces the fixed-point iteration
  const DaeSystem without_action = models::build_rod(m2, 0.02);
  CHECK_FALSE(bool(without_action.stiffness_jacobian_action));

  StateVector u = with_action.initial_state;
  u.values.setConstant(0.05);
  u = make_consistent(with_action, u);
  const StateVector a = euler_step(with_action, u, 1e-4, kTightCfg);
  const StateVector b = euler_step(without_action, u, 1e-4, kTightCfg);
  // Both solve the same nonlinear system to the same residual tolerance.
  CHECK((a.values - b.values).norm() <= 1e-8 * (1.0 + a.values.norm()));
}

TEST_CASE("euler_step: singular iteration matrix raises") {
  DaeSystem sys;
  sys.n = 2;
  sys.mass = Matrix::diagonal(Vector{{1.0, 0.0}});
  sys.stiffness = [](const Vector&) {
    Eigen::MatrixXd k(2, 2);
    k << 2.0, -1.0, 0.0, 0.0;  // algebraic row vanishes: M/dt + K is singular
    return Matrix(k);
  };
  sys.source = [](double) { return Vector::Zero(2); };
  sys.projectors = build_projectors(sys.mass);
  sys.initial_state = {Vector{{1.0, 0.0}}, 0.0};
  CHECK_THROWS_AS(euler_step(sys, sys.initial_state, 0.1, kTightCfg), SingularMatrixError);
}

TEST_CASE("propagate: failures carry the step index") {
  DaeSystem sys;
  sys.n = 1;
  sys.mass = Matrix::identity(1);
  sys.linear = false;
  sys.stiffness = [](const Vector& u) {
    return Matrix::diagonal(Vector{{2.0 + 10.0 * std::sin(40.0 * u[0])}});
  };
  sys.source = [](double) { return Vector::Zero(1); };
  sys.projectors = build_projectors(sys.mass);
  sys.initial_state = {Vector{{1.0}}, 0.0};

  PropagatorConfig cfg{0.3, 1e-14, 1, "fine"};
  const Propagator p(sys, cfg);
  try {
    p.propagate(0.9, 0.0, sys.initial_state);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(std::string(e.what()).find("step 1/3") != std::string::npos);
  }
}

TEST_CASE("propagate: repeated closed-form steps") {
  const DaeSystem sys = scalar_decay();
  const double dt = 0.01;
  const Propagator p(sys, {dt, 1e-10, 25, "fine"});
  const StateVector out = p.propagate(10.0 * dt, 0.0, sys.initial_state);
  CHECK(out.values[0] == doctest::Approx(std::pow(1.0 / (1.0 + 2.0 * dt), 10)).epsilon(1e-13));
  CHECK(out.time == doctest::Approx(0.1));
}

TEST_CASE("propagate: single step equals euler_step") {
  const DaeSystem sys = scalar_decay();
  const double dt = 0.05;
  const Propagator p(sys, {dt, 1e-10, 25, "fine"});
  const StateVector via_propagate = p.propagate(dt, 0.0, sys.initial_state);
  const StateVector via_step = euler_step(sys, sys.initial_state, dt, kTightCfg);
  CHECK(via_propagate.values[0] == doctest::Approx(via_step.values[0]).epsilon(1e-15));
}

TEST_CASE("propagate: zero source and zero state stay zero") {
  models::RodModel m;
  m.n_cells = 16;
  m.source_amplitude = 0.0;
  const DaeSystem sys = models::build_rod(m, 0.1);
  const Propagator p(sys, {1e-3, 1e-10, 25, "fine"});
  const StateVector out = p.propagate(0.1, 0.0, sys.initial_state);
  CHECK(out.values.norm() == doctest::Approx(0.0));
}

TEST_CASE("propagate: non-divisible span lands exactly on the target") {
  const DaeSystem sys = scalar_decay();
  const Propagator p(sys, {0.03, 1e-10, 25, "fine"});
  const StateVector out = p.propagate(0.1, 0.0, sys.initial_state);  // 4 steps of 0.025
  CHECK(out.time == 0.1);
  CHECK(out.values[0] == doctest::Approx(std::pow(1.0 / (1.0 + 2.0 * 0.025), 4)).epsilon(1e-13));
}

TEST_CASE("propagate: first-order convergence on the scalar decay") {
  const DaeSystem sys = scalar_decay();
  double previous_error = 0.0;
  int level = 0;
  for (const double dt : {0.1, 0.05, 0.025, 0.0125}) {
    const Propagator p(sys, {dt, 1e-12, 25, "fine"});
    const StateVector out = p.propagate(1.0, 0.0, sys.initial_state);
    const double error = std::abs(out.values[0] - std::exp(-2.0));
    if (level > 0) {
      const double ratio = previous_error / error;
      CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));  // 2 +/- 0.2
    }
    previous_error = error;
    ++level;
  }
}

TEST_CASE("propagate: semigroup property on aligned grids") {
  models::RodModel m;
  m.n_cells = 20;
  const DaeSystem sys = models::build_rod(m, 0.1);
  const Propagator p(sys, {1e-3, 1e-10, 25, "fine"});

  const StateVector direct = p.propagate(0.06, 0.0, sys.initial_state);
  const StateVector half = p.propagate(0.02, 0.0, sys.initial_state);
  const StateVector chained = p.propagate(0.06, 0.02, half);
  CHECK((chained.values - direct.values).norm() <= 1e-12 * (1.0 + direct.values.norm()));
}

TEST_CASE("propagate: argument validation") {
  const DaeSystem sys = scalar_decay();
  const Propagator p(sys, {0.1, 1e-10, 25, "fine"});
  CHECK_THROWS_AS(p.propagate(0.0, 0.0, sys.initial_state), StructureError);
  CHECK_THROWS_AS(p.propagate(1.0, 0.5, sys.initial_state), StructureError);  // time mismatch
  CHECK_THROWS_AS(Propagator(sys, {-1.0, 1e-10, 25, ""}), StructureError);
}
