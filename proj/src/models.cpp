// SPDX-License-Identifier: Apache-2.0
#include "pintdae/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pintdae::models {

namespace {

// Signed differences of the interior-node vector against zero boundary
// values: one entry per cell, (Au)_j = u_j - u_{j-1}.
Vector cell_differences(const Vector& u, int n_cells) {
  Vector d(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    const double right = (j <= n_cells - 2) ? u[j] : 0.0;
    const double left = (j >= 1) ? u[j - 1] : 0.0;
    d[j] = right - left;
  }
  return d;
}

// Adjoint of cell_differences: maps per-cell values back to interior nodes.
Vector cell_adjoint(const Vector& phi, int n_cells) {
  Vector out(n_cells - 1);
  for (int k = 0; k < n_cells - 1; ++k) out[k] = phi[k] - phi[k + 1];
  return out;
}

Matrix assemble_diffusion(const Vector& nu_cells, double h) {
  const Index n = nu_cells.size() - 1;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    k(i, i) = (nu_cells[i] + nu_cells[i + 1]) / h;
    if (i > 0) k(i, i - 1) = -nu_cells[i] / h;
    if (i + 1 < n) k(i, i + 1) = -nu_cells[i + 1] / h;
  }
  return Matrix(std::move(k), true);
}

}  // namespace

std::vector<double> RodModel::resolved_sigma_profile() const {
  if (!sigma_profile.empty()) return sigma_profile;
  std::vector<double> profile(static_cast<std::size_t>(n_cells), 0.0);
  const double h = length / n_cells;
  for (int j = 0; j < n_cells; ++j) {
    const double center = (j + 0.5) * h;
    if (center >= core_lo * length && center < core_hi * length) {
      profile[static_cast<std::size_t>(j)] = sigma;
    }
  }
  return profile;
}

void RodModel::validate() const {
  if (n_cells < 4) throw StructureError("rod needs at least 4 cells");
  if (!(length > 0.0)) throw StructureError("rod length must be positive");
  if (!sigma_profile.empty() &&
      sigma_profile.size() != static_cast<std::size_t>(n_cells)) {
    throw StructureError("sigma_profile length must equal n_cells");
  }
  const auto profile = resolved_sigma_profile();
  bool any_positive = false;
  for (double s : profile) {
    if (s < 0.0) throw StructureError("conductivity must be non-negative");
    any_positive = any_positive || s > 0.0;
  }
  if (!any_positive) throw StructureError("at least one cell must be conducting");
  if (sigma_profile.empty() && core_lo <= 0.0 && core_hi >= 1.0) {
    throw StructureError("default rod requires a non-conducting region; "
                         "pass an explicit sigma_profile for a pure-ODE configuration");
  }
  if (reluctivity) {
    // Spot checks of positivity and monotonicity of the saturation curve.
    double prev = 0.0;
    for (double s : {0.0, 1e-2, 1.0, 1e2, 1e6}) {
      const double v = reluctivity(s);
      if (!(v > 0.0)) throw StructureError("reluctivity curve must be positive");
      if (v + 1e-14 < prev) throw StructureError("reluctivity curve must be non-decreasing");
      prev = v;
    }
  } else if (!(nu > 0.0)) {
    throw StructureError("linear reluctivity must be positive");
  }
  if (!(winding_hi > winding_lo) || winding_lo < 0.0 || winding_hi > 1.0) {
    throw StructureError("winding interval must satisfy 0 <= lo < hi <= 1");
  }
  if (!(source_frequency > 0.0)) throw StructureError("source frequency must be positive");
}

void set_saturation_curve(RodModel& m, double nu_min, double nu_max, double b_sat) {
  if (!(nu_min > 0.0) || !(nu_max >= nu_min) || !(b_sat > 0.0)) {
    throw StructureError("saturation curve requires 0 < nu_min <= nu_max and b_sat > 0");
  }
  const double b2 = b_sat * b_sat;
  m.reluctivity = [=](double s) { return nu_min + (nu_max - nu_min) * s / (s + b2); };
  m.reluctivity_derivative = [=](double s) {
    const double d = s + b2;
    return (nu_max - nu_min) * b2 / (d * d);
  };
}

void CoupledToyModel::validate() const {
  field.validate();
  if (!(inertia > 0.0)) throw StructureError("inertia must be positive");
  if (torsion < 0.0) throw StructureError("torsion coefficient must be non-negative");
}

DaeSystem build_analytic_2x2(double t_end, double u1_initial) {
  DaeSystem sys;
  sys.n = 2;
  sys.mass = Matrix::diagonal(Vector{{1.0, 0.0}});
  Eigen::MatrixXd k(2, 2);
  k << 2.0, -1.0, -1.0, 2.0;
  const Matrix stiffness(std::move(k), true);
  sys.stiffness = [stiffness](const Vector&) { return stiffness; };
  sys.source = [](double) { return Vector::Zero(2); };
  sys.projectors = build_projectors(sys.mass);
  sys.linear = true;
  sys.t_span = {0.0, t_end};
  sys.initial_state = {Vector{{u1_initial, 0.5 * u1_initial}}, 0.0};
  sys.reference_solution = [](double t, const Vector& u0) {
    const double u1 = u0[0] * std::exp(-1.5 * t);
    return Vector{{u1, 0.5 * u1}};
  };
  sys.validate();
  return sys;
}

DaeSystem build_rod(const RodModel& m, double t_end) {
  m.validate();
  const auto sigma = m.resolved_sigma_profile();
  const int n_cells = m.n_cells;
  const Index n = n_cells - 1;
  const double h = m.length / n_cells;

  DaeSystem sys;
  sys.n = n;

  Vector mass_diag(n);
  for (Index k = 0; k < n; ++k) {
    mass_diag[k] = 0.5 * h * (sigma[static_cast<std::size_t>(k)] +
                              sigma[static_cast<std::size_t>(k + 1)]);
  }
  sys.mass = Matrix::diagonal(mass_diag);

  if (!m.reluctivity) {
    const Matrix k0 = assemble_diffusion(Vector::Constant(n_cells, m.nu), h);
    sys.stiffness = [k0](const Vector&) { return k0; };
    sys.linear = true;
  } else {
    const auto nu_curve = m.reluctivity;
    sys.stiffness = [nu_curve, n_cells, h](const Vector& u) {
      const Vector d = cell_differences(u, n_cells);
      Vector nu_cells(n_cells);
      for (int j = 0; j < n_cells; ++j) {
        const double b = d[j] / h;
        nu_cells[j] = nu_curve(b * b);
      }
      return assemble_diffusion(nu_cells, h);
    };
    sys.linear = false;
    if (m.reluctivity_derivative) {
      const auto nu_deriv = m.reluctivity_derivative;
      // d/du [K(u)u]·v = Aᵀ((ν(b²) + 2b²ν'(b²)) ⊙ Av)/h with b = Au/h.
      sys.stiffness_jacobian_action = [nu_curve, nu_deriv, n_cells, h](const Vector& u,
                                                                       const Vector& v) {
        const Vector du = cell_differences(u, n_cells);
        const Vector dv = cell_differences(v, n_cells);
        Vector phi(n_cells);
        for (int j = 0; j < n_cells; ++j) {
          const double b = du[j] / h;
          const double b2 = b * b;
          phi[j] = (nu_curve(b2) + 2.0 * b2 * nu_deriv(b2)) * dv[j] / h;
        }
        return cell_adjoint(phi, n_cells);
      };
    }
  }

  Vector load(n);
  for (Index k = 0; k < n; ++k) {
    const double x = (k + 1) * h;
    load[k] = (x >= m.winding_lo * m.length && x <= m.winding_hi * m.length)
                  ? m.source_amplitude * h
                  : 0.0;
  }
  const double omega = 2.0 * std::numbers::pi * m.source_frequency;
  sys.source = [load, omega](double t) { return Vector(load * std::sin(omega * t)); };

  sys.projectors = build_projectors(sys.mass);
  sys.t_span = {0.0, t_end};
  sys.initial_state = {Vector::Zero(n), 0.0};
  sys.validate();
  return sys;
}

DaeSystem build_coupled(const CoupledToyModel& m, double t_end) {
  m.validate();
  DaeSystem field = build_rod(m.field, t_end);
  const Index nf = field.n;
  const Index n = nf + 2;
  const Index i_theta = nf;
  const Index i_omega = nf + 1;
  const double h = m.field.length / m.field.n_cells;

  DaeSystem sys;
  sys.n = n;

  Vector mass_diag(n);
  mass_diag.head(nf) = field.mass.data().diagonal();
  mass_diag[i_theta] = 1.0;
  mass_diag[i_omega] = m.inertia;
  sys.mass = Matrix::diagonal(mass_diag);

  // Linear torque functional: scaled length-weighted mean of the field over
  // the conducting nodes.
  Vector torque_weights = Vector::Zero(nf);
  const double core_len =
      h * static_cast<double>(field.projectors.differential_index_set.size());
  for (Index k : field.projectors.differential_index_set) {
    torque_weights[k] = m.torque_scale * h / core_len;
  }

  const double kappa = m.torsion;
  const StiffnessFn field_stiffness = field.stiffness;
  sys.stiffness = [field_stiffness, torque_weights, kappa, nf, n, i_theta,
                   i_omega](const Vector& u) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    k.topLeftCorner(nf, nf) = field_stiffness(u.head(nf)).data();
    k(i_theta, i_omega) = -1.0;             // dθ/dt - ω = 0
    k(i_omega, i_theta) = kappa;            // I dω/dt + κθ - T(a) = 0
    k.row(i_omega).head(nf) = -torque_weights.transpose();
    return Matrix(std::move(k));
  };

  sys.linear = field.linear;
  if (!field.linear && field.stiffness_jacobian_action) {
    const JacobianActionFn field_action = field.stiffness_jacobian_action;
    sys.stiffness_jacobian_action = [field_action, torque_weights, kappa, nf, n, i_theta,
                                     i_omega](const Vector& u, const Vector& v) {
      Vector out(n);
      out.head(nf) = field_action(u.head(nf), v.head(nf));
      out[i_theta] = -v[i_omega];
      out[i_omega] = kappa * v[i_theta] - torque_weights.dot(v.head(nf));
      return out;
    };
  }

  const SourceFn field_source = field.source;
  sys.source = [field_source, nf, n](double t) {
    Vector f = Vector::Zero(n);
    f.head(nf) = field_source(t);
    return f;
  };

  sys.projectors = build_projectors(sys.mass);
  sys.t_span = {0.0, t_end};
  Vector u0 = Vector::Zero(n);
  u0[i_theta] = m.theta0;
  u0[i_omega] = m.omega0;
  sys.initial_state = {std::move(u0), 0.0};
  sys.validate();
  return sys;
}

}  // namespace pintdae::models
