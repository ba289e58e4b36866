// SPDX-License-Identifier: Apache-2.0
#include "pintdae/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "pintdae/io.hpp"

namespace pintdae::cli {

namespace {

using Clock = std::chrono::steady_clock;

double pop_override(std::map<std::string, double>& kv, const std::string& key,
                    double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const double v = it->second;
  kv.erase(it);
  return v;
}

models::RodModel rod_from_overrides(std::map<std::string, double>& kv, bool nonlinear) {
  models::RodModel m;
  m.n_cells = static_cast<int>(pop_override(kv, "n_cells", m.n_cells));
  m.length = pop_override(kv, "length", m.length);
  m.sigma = pop_override(kv, "sigma", m.sigma);
  m.core_lo = pop_override(kv, "core_lo", m.core_lo);
  m.core_hi = pop_override(kv, "core_hi", m.core_hi);
  m.nu = pop_override(kv, "nu", m.nu);
  m.source_amplitude = pop_override(kv, "source_amplitude", m.source_amplitude);
  m.source_frequency = pop_override(kv, "source_frequency", m.source_frequency);
  m.winding_lo = pop_override(kv, "winding_lo", m.winding_lo);
  m.winding_hi = pop_override(kv, "winding_hi", m.winding_hi);
  if (nonlinear) {
    const double nu_min = pop_override(kv, "nu_min", 1.0);
    const double nu_max = pop_override(kv, "nu_max", 5.0);
    const double b_sat = pop_override(kv, "b_sat", 1.0);
    models::set_saturation_curve(m, nu_min, nu_max, b_sat);
  }
  return m;
}

void require_consumed(const std::map<std::string, double>& kv) {
  if (kv.empty()) return;
  std::ostringstream msg;
  msg << "unknown model override(s):";
  for (const auto& [k, v] : kv) msg << " " << k;
  throw StructureError(msg.str());
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

void log_kv(std::ostream& log, const char* key, const std::string& value) {
  log << key << " = " << value << "\n";
}

}  // namespace

ModelKind parse_model(const std::string& name) {
  if (name == "analytic2x2") return ModelKind::analytic2x2;
  if (name == "rod") return ModelKind::rod;
  if (name == "rod_nonlinear") return ModelKind::rod_nonlinear;
  if (name == "coupled") return ModelKind::coupled;
  throw StructureError("unknown model '" + name +
                       "' (expected analytic2x2 | rod | rod_nonlinear | coupled)");
}

NormMode parse_norm_mode(const std::string& name) {
  if (name == "differential") return NormMode::differential;
  if (name == "full") return NormMode::full;
  throw StructureError("unknown norm mode '" + name + "' (expected differential | full)");
}

UpdateMode parse_update_mode(const std::string& name) {
  if (name == "projected_consistent") return UpdateMode::projected_consistent;
  if (name == "plain") return UpdateMode::plain;
  throw StructureError("unknown update mode '" + name +
                       "' (expected projected_consistent | plain)");
}

void RunConfig::validate() const {
  if (!(dt_coarse > dt_fine)) throw StructureError("dt_coarse must exceed dt_fine");
  if (n_windows < 1) throw StructureError("n_windows must be at least 1");
  if (workers < 1) throw StructureError("workers must be at least 1");
  if (!(t_end > 0.0)) throw StructureError("t_end must be positive");
  if (!(tol > 0.0)) throw StructureError("tol must be positive");
  if (perturb_algebraic < 0.0) throw StructureError("perturbation magnitude must be >= 0");
}

PararealConfig RunConfig::parareal_config() const {
  PararealConfig p;
  p.n_windows = n_windows;
  p.fine = PropagatorConfig{dt_fine, 1e-10, 25, "fine"};
  p.coarse = PropagatorConfig{dt_coarse, 1e-10, 25, "coarse"};
  p.tol = tol;
  p.max_iter = max_iter;
  p.norm_mode = norm_mode;
  p.update_mode = update_mode;
  p.workers = workers;
  return p;
}

DaeSystem build_model(ModelKind kind, const std::map<std::string, double>& overrides,
                      double t_end) {
  std::map<std::string, double> kv = overrides;
  switch (kind) {
    case ModelKind::analytic2x2: {
      const double u1 = pop_override(kv, "u1_initial", 1.0);
      require_consumed(kv);
      return models::build_analytic_2x2(t_end, u1);
    }
    case ModelKind::rod: {
      const auto m = rod_from_overrides(kv, false);
      require_consumed(kv);
      return models::build_rod(m, t_end);
    }
    case ModelKind::rod_nonlinear: {
      const auto m = rod_from_overrides(kv, true);
      require_consumed(kv);
      return models::build_rod(m, t_end);
    }
    case ModelKind::coupled: {
      models::CoupledToyModel c;
      c.inertia = pop_override(kv, "inertia", c.inertia);
      c.torsion = pop_override(kv, "torsion", c.torsion);
      c.torque_scale = pop_override(kv, "torque_scale", c.torque_scale);
      c.theta0 = pop_override(kv, "theta0", c.theta0);
      c.omega0 = pop_override(kv, "omega0", c.omega0);
      c.field = rod_from_overrides(kv, false);
      require_consumed(kv);
      return models::build_coupled(c, t_end);
    }
  }
  throw StructureError("unreachable model kind");
}

StateVector initial_state(const DaeSystem& sys, double perturb_algebraic, unsigned seed) {
  StateVector u0 = sys.initial_state;
  if (perturb_algebraic > 0.0 && sys.has_algebraic()) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> noise(-perturb_algebraic, perturb_algebraic);
    for (Index k : sys.projectors.algebraic_index_set) u0.values[k] += noise(rng);
  }
  return u0;
}

int cmd_sequential(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const DaeSystem sys = build_model(cfg.model, cfg.model_overrides, cfg.t_end);
  const StateVector u0 = initial_state(sys, cfg.perturb_algebraic, cfg.seed);
  const WindowGrid grid = WindowGrid::uniform(sys.t_span.first, sys.t_span.second, cfg.n_windows);
  const PropagatorConfig fine{cfg.dt_fine, 1e-10, 25, "fine"};

  const auto t0 = Clock::now();
  const auto traj = sequential_trajectory(sys, u0, grid.boundaries, fine);
  const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

  log_kv(log, "command", "sequential");
  log_kv(log, "n", std::to_string(sys.n));
  log_kv(log, "snapshots", std::to_string(traj.size()));
  log_kv(log, "dt_fine", io::format_double(cfg.dt_fine));
  log_kv(log, "t_end", io::format_double(cfg.t_end));
  log_kv(log, "wall_seconds", io::format_double(wall));
  if (!cfg.output_path.empty()) {
    io::write_trajectory_csv(cfg.output_path, traj);
    log_kv(log, "output", cfg.output_path);
  }
  return 0;
}

int cmd_parareal(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const DaeSystem sys = build_model(cfg.model, cfg.model_overrides, cfg.t_end);
  const StateVector u0 = initial_state(sys, cfg.perturb_algebraic, cfg.seed);
  const WindowGrid grid = WindowGrid::uniform(sys.t_span.first, sys.t_span.second, cfg.n_windows);

  std::vector<StateVector> reference;
  if (!cfg.reference_path.empty()) {
    const auto rows = io::read_trajectory_csv(cfg.reference_path);
    for (double t : grid.boundaries) {
      const auto hit = std::find_if(rows.begin(), rows.end(), [&](const StateVector& s) {
        return std::abs(s.time - t) <= 1e-9 * std::max(1.0, std::abs(t));
      });
      if (hit == rows.end()) {
        std::ostringstream msg;
        msg << "reference trajectory lacks window boundary t = " << t;
        throw StructureError(msg.str());
      }
      if (hit->values.size() != sys.n) {
        throw StructureError("reference trajectory dimension does not match the model");
      }
      reference.push_back(*hit);
    }
  }

  const auto [state, report] =
      run(sys, u0, cfg.parareal_config(), reference.empty() ? nullptr : &reference);

  log_kv(log, "command", "parareal");
  log_kv(log, "n", std::to_string(sys.n));
  log_kv(log, "n_windows", std::to_string(cfg.n_windows));
  log_kv(log, "iterations", std::to_string(report.iterations_used));
  log_kv(log, "converged", yes_no(report.converged));
  log_kv(log, "input_made_consistent", yes_no(report.input_made_consistent));
  log_kv(log, "max_increment",
         io::format_double(report.iterations.back().max_increment));
  log_kv(log, "modeled_speedup", io::format_double(report.modeled_speedup));
  const double actual = std::isfinite(cfg.reference_seconds)
                            ? cfg.reference_seconds / report.total_seconds
                            : std::numeric_limits<double>::quiet_NaN();
  log_kv(log, "actual_speedup", io::format_double(actual));
  log_kv(log, "coarse_seconds", io::format_double(report.coarse_seconds));
  log_kv(log, "fine_seconds", io::format_double(report.fine_seconds));
  log_kv(log, "total_seconds", io::format_double(report.total_seconds));
  if (!cfg.output_path.empty()) {
    io::write_text_file(cfg.output_path, io::parareal_csv(report, grid));
    log_kv(log, "output", cfg.output_path);
  }
  return report.converged ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, const SweepSpec& spec, std::ostream& log) {
  cfg.validate();
  const std::vector<int> n_windows = spec.n_windows.empty()
                                         ? std::vector<int>{cfg.n_windows}
                                         : spec.n_windows;
  const std::vector<double> dt_fine =
      spec.dt_fine.empty() ? std::vector<double>{cfg.dt_fine} : spec.dt_fine;
  const std::vector<double> dt_coarse =
      spec.dt_coarse.empty() ? std::vector<double>{cfg.dt_coarse} : spec.dt_coarse;
  const std::vector<double> tol = spec.tol.empty() ? std::vector<double>{cfg.tol} : spec.tol;

  std::ostringstream out;
  out << "run_index,model,n_windows,dt_fine,dt_coarse,tol,iteration,max_increment,"
         "iterations_used,converged,modeled_speedup,coarse_seconds,fine_seconds,"
         "total_seconds,status\n";

  const char* model_name = [&] {
    switch (cfg.model) {
      case ModelKind::analytic2x2: return "analytic2x2";
      case ModelKind::rod: return "rod";
      case ModelKind::rod_nonlinear: return "rod_nonlinear";
      case ModelKind::coupled: return "coupled";
    }
    return "?";
  }();

  int run_index = 0;
  int failures = 0;
  for (int nw : n_windows) {
    for (double df : dt_fine) {
      for (double dc : dt_coarse) {
        for (double tl : tol) {
          RunConfig c = cfg;
          c.n_windows = nw;
          c.dt_fine = df;
          c.dt_coarse = dc;
          c.tol = tl;
          const std::string prefix = std::to_string(run_index) + "," + model_name + "," +
                                     std::to_string(nw) + "," + io::format_double(df) + "," +
                                     io::format_double(dc) + "," + io::format_double(tl) + ",";
          try {
            c.validate();
            const DaeSystem sys = build_model(c.model, c.model_overrides, c.t_end);
            const StateVector u0 = initial_state(sys, c.perturb_algebraic, c.seed);
            const auto [state, report] = run(sys, u0, c.parareal_config());
            for (const auto& rec : report.iterations) {
              out << prefix << rec.iteration << "," << io::format_double(rec.max_increment)
                  << "," << report.iterations_used << "," << yes_no(report.converged) << ","
                  << io::format_double(report.modeled_speedup) << ","
                  << io::format_double(rec.coarse_seconds) << ","
                  << io::format_double(rec.fine_seconds) << ","
                  << io::format_double(report.total_seconds) << ",ok\n";
            }
          } catch (const std::exception& e) {
            ++failures;
            std::string reason = e.what();
            std::replace(reason.begin(), reason.end(), ',', ';');
            std::replace(reason.begin(), reason.end(), '\n', ' ');
            const std::string nan = io::format_double(std::numeric_limits<double>::quiet_NaN());
            out << prefix << 0 << "," << nan << ",0,no," << nan << "," << nan << "," << nan
                << "," << nan << ",error: " << reason << "\n";
          }
          ++run_index;
        }
      }
    }
  }

  log_kv(log, "command", "sweep");
  log_kv(log, "runs", std::to_string(run_index));
  log_kv(log, "failed_runs", std::to_string(failures));
  if (!cfg.output_path.empty()) {
    io::write_text_file(cfg.output_path, out.str());
    log_kv(log, "output", cfg.output_path);
  } else {
    log << out.str();
  }
  return 0;
}

}  // namespace pintdae::cli
