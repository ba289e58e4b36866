// SPDX-License-Identifier: Apache-2.0
#include "pintdae/parareal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace pintdae {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double relative_l2(const Vector& diff, const Vector& base) {
  const double denom = std::max(base.norm(), std::numeric_limits<double>::min());
  return diff.norm() / denom;
}

// Runs fn(j) for every window j in [1, N], distributing contiguous chunks
// over `workers` threads. Exceptions are captured per window and the one
// with the lowest window index is rethrown, so failures are deterministic.
template <typename Fn>
void parallel_windows(int n_windows, int workers, Fn&& fn) {
  const int t = std::clamp(workers, 1, n_windows);
  if (t == 1) {
    for (int j = 1; j <= n_windows; ++j) fn(j);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_windows) + 1);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  const int chunk = (n_windows + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    const int lo = 1 + w * chunk;
    const int hi = std::min(n_windows, lo + chunk - 1);
    if (lo > hi) break;
    pool.emplace_back([&, lo, hi] {
      for (int j = lo; j <= hi; ++j) {
        try {
          fn(j);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int j = 1; j <= n_windows; ++j) {
    if (errors[static_cast<std::size_t>(j)]) {
      std::rethrow_exception(errors[static_cast<std::size_t>(j)]);
    }
  }
}

template <typename E>
[[noreturn]] void rethrow_annotated(const E& e, const char* stage, int window, int sweep) {
  std::ostringstream msg;
  msg << stage << " propagator failed in window " << window << " at iteration " << sweep
      << ": " << e.what();
  if constexpr (std::is_same_v<E, NonConvergenceError>) {
    throw NonConvergenceError(msg.str(), e.last_residual());
  } else {
    throw E(msg.str());
  }
}

}  // namespace

WindowGrid WindowGrid::uniform(double t0, double t_end, int n_windows) {
  if (n_windows < 1) throw StructureError("need at least one window");
  if (!(t_end > t0)) throw StructureError("window grid requires t_end > t0");
  WindowGrid grid;
  grid.boundaries.resize(static_cast<std::size_t>(n_windows) + 1);
  const double span = t_end - t0;
  for (int j = 0; j <= n_windows; ++j) {
    grid.boundaries[static_cast<std::size_t>(j)] =
        (j == n_windows) ? t_end : t0 + span * static_cast<double>(j) / n_windows;
  }
  return grid;
}

void WindowGrid::validate(double t0, double t_end) const {
  if (boundaries.size() < 2) throw StructureError("window grid needs at least two boundaries");
  for (std::size_t j = 1; j < boundaries.size(); ++j) {
    if (!(boundaries[j] > boundaries[j - 1])) {
      throw StructureError("window boundaries must be strictly increasing");
    }
  }
  const double scale = std::max({1.0, std::abs(t0), std::abs(t_end)});
  if (std::abs(boundaries.front() - t0) > 1e-12 * scale ||
      std::abs(boundaries.back() - t_end) > 1e-12 * scale) {
    throw StructureError("window grid must span the system's t_span");
  }
}

void PararealConfig::validate() const {
  if (n_windows < 1) throw StructureError("n_windows must be at least 1");
  fine.validate();
  coarse.validate();
  if (!(coarse.dt > fine.dt)) {
    throw StructureError("coarse step must be larger than fine step");
  }
  if (!(tol > 0.0)) throw StructureError("tol must be positive");
  if (max_iter < 0) throw StructureError("max_iter must be non-negative");
  if (workers < 1) throw StructureError("workers must be at least 1");
}

double increment_norm(const StateVector& u_new, const StateVector& u_old,
                      const DaeSystem& sys, NormMode mode) {
  if (u_new.values.size() != u_old.values.size()) {
    throw StructureError("increment_norm requires states of equal dimension");
  }
  if (mode == NormMode::full) {
    return relative_l2(u_new.values - u_old.values, u_old.values);
  }
  const Vector diff = sys.projectors.p.apply(u_new.values - u_old.values);
  const Vector base = sys.projectors.p.apply(u_old.values);
  return relative_l2(diff, base);
}

StateVector update_window(int window, const StateVector& coarse_new,
                          const StateVector& coarse_prev, const StateVector& fine_prev,
                          const DaeSystem& sys, UpdateMode mode) {
  StateVector out;
  out.time = coarse_new.time;
  out.values = fine_prev.values + coarse_new.values - coarse_prev.values;
  if (mode == UpdateMode::plain) return out;
  try {
    return make_consistent(sys, out);
  } catch (const SingularMatrixError& e) {
    std::ostringstream msg;
    msg << "consistency solve after the update failed in window " << window << ": " << e.what();
    throw SingularMatrixError(msg.str());
  } catch (const NonConvergenceError& e) {
    std::ostringstream msg;
    msg << "consistency solve after the update failed in window " << window << ": " << e.what();
    throw NonConvergenceError(msg.str(), e.last_residual());
  }
}

std::vector<double> matching_residual(const PararealState& state, const DaeSystem& sys,
                                      const Propagator& fine, NormMode mode) {
  const int n = static_cast<int>(state.u_bounds.size()) - 1;
  std::vector<double> out(static_cast<std::size_t>(n));
  out[0] = increment_norm(state.u_bounds[0], state.initial, sys, mode);
  for (int j = 1; j < n; ++j) {
    const StateVector prop =
        fine.propagate(state.u_bounds[static_cast<std::size_t>(j)].time,
                       state.u_bounds[static_cast<std::size_t>(j - 1)].time,
                       state.u_bounds[static_cast<std::size_t>(j - 1)]);
    out[static_cast<std::size_t>(j)] =
        increment_norm(state.u_bounds[static_cast<std::size_t>(j)], prop, sys, mode);
  }
  return out;
}

std::pair<PararealState, RunReport> run(const DaeSystem& sys, const StateVector& u0,
                                        const PararealConfig& cfg,
                                        const std::vector<StateVector>* reference,
                                        const IterationObserver& observer) {
  cfg.validate();
  sys.validate();
  const auto t_run0 = Clock::now();

  WindowGrid grid = cfg.boundaries.empty()
                        ? WindowGrid::uniform(sys.t_span.first, sys.t_span.second, cfg.n_windows)
                        : WindowGrid{cfg.boundaries};
  grid.validate(sys.t_span.first, sys.t_span.second);
  const int n = grid.n_windows();
  if (n != cfg.n_windows) {
    throw StructureError("boundary list does not match n_windows");
  }

  if (reference != nullptr) {
    if (static_cast<int>(reference->size()) != n + 1) {
      throw StructureError("reference trajectory must hold all window boundaries");
    }
    for (int j = 0; j <= n; ++j) {
      const double t = grid.boundaries[static_cast<std::size_t>(j)];
      if (std::abs((*reference)[static_cast<std::size_t>(j)].time - t) >
          1e-9 * std::max(1.0, std::abs(t))) {
        throw StructureError("reference trajectory grid does not match window boundaries");
      }
    }
  }

  RunReport report;

  // The prescribed initial value must be consistent; sanitize and note it
  // otherwise.
  StateVector initial = u0;
  initial.time = grid.boundaries.front();
  {
    const double res = algebraic_residual_norm(sys, initial);
    const double gate = 1e-8 * (1.0 + sys.source(initial.time).norm());
    if (res > gate) {
      initial = make_consistent(sys, initial);
      report.input_made_consistent = true;
    }
  }

  const Propagator coarse(sys, cfg.coarse);
  const Propagator fine(sys, cfg.fine);

  PararealState state;
  state.initial = initial;
  state.u_bounds.assign(static_cast<std::size_t>(n) + 1, StateVector{});
  state.u_bounds[0] = initial;
  state.coarse_prev.assign(static_cast<std::size_t>(n), StateVector{});
  state.fine_prev.assign(static_cast<std::size_t>(n), StateVector{});
  for (int j = 1; j <= n; ++j) {
    const double t = grid.boundaries[static_cast<std::size_t>(j)];
    state.u_bounds[static_cast<std::size_t>(j)] = {Vector::Zero(sys.n), t};
    state.coarse_prev[static_cast<std::size_t>(j - 1)] = {Vector::Zero(sys.n), t};
    state.fine_prev[static_cast<std::size_t>(j - 1)] = {Vector::Zero(sys.n), t};
  }

  const int sweep_budget = std::max(cfg.max_iter > 0 ? cfg.max_iter : n, 2);
  std::vector<StateVector> coarse_new(static_cast<std::size_t>(n));
  std::vector<StateVector> fine_new(static_cast<std::size_t>(n));
  std::vector<StateVector> previous;

  for (int sweep = 1; sweep <= sweep_budget; ++sweep) {
    IterationRecord rec;
    rec.iteration = sweep;
    previous = state.u_bounds;

    // Sequential coarse stage: each window's correction feeds the next
    // window's coarse solve through the updated boundary value.
    const auto t_coarse0 = Clock::now();
    for (int j = 1; j <= n; ++j) {
      const std::size_t w = static_cast<std::size_t>(j - 1);
      try {
        coarse_new[w] = coarse.propagate(grid.boundaries[static_cast<std::size_t>(j)],
                                         grid.boundaries[w],
                                         state.u_bounds[w]);
      } catch (const NonConvergenceError& e) {
        rethrow_annotated(e, "coarse", j, sweep);
      } catch (const SingularMatrixError& e) {
        rethrow_annotated(e, "coarse", j, sweep);
      }
      state.u_bounds[static_cast<std::size_t>(j)] =
          update_window(j, coarse_new[w], state.coarse_prev[w], state.fine_prev[w], sys,
                        cfg.update_mode);
    }
    rec.coarse_seconds = seconds_since(t_coarse0);

    // Parallel fine stage: windows are independent, each reads the updated
    // left boundary value and writes only its own slot.
    const auto t_fine0 = Clock::now();
    parallel_windows(n, cfg.workers, [&](int j) {
      const std::size_t w = static_cast<std::size_t>(j - 1);
      try {
        fine_new[w] = fine.propagate(grid.boundaries[static_cast<std::size_t>(j)],
                                     grid.boundaries[w],
                                     state.u_bounds[w]);
      } catch (const NonConvergenceError& e) {
        rethrow_annotated(e, "fine", j, sweep);
      } catch (const SingularMatrixError& e) {
        rethrow_annotated(e, "fine", j, sweep);
      }
    });
    rec.fine_seconds = seconds_since(t_fine0);

    state.coarse_prev.swap(coarse_new);
    state.fine_prev.swap(fine_new);
    state.iteration = sweep;

    rec.window_increments.resize(static_cast<std::size_t>(n),
                                 std::numeric_limits<double>::quiet_NaN());
    if (sweep >= 2) {
      double max_inc = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double inc = increment_norm(state.u_bounds[static_cast<std::size_t>(j)],
                                          previous[static_cast<std::size_t>(j)], sys,
                                          cfg.norm_mode);
        rec.window_increments[static_cast<std::size_t>(j - 1)] = inc;
        max_inc = std::max(max_inc, inc);
      }
      rec.max_increment = max_inc;
    }

    if (reference != nullptr) {
      rec.error_differential.resize(static_cast<std::size_t>(n));
      rec.error_full.resize(static_cast<std::size_t>(n));
      for (int j = 1; j <= n; ++j) {
        const auto& u = state.u_bounds[static_cast<std::size_t>(j)];
        const auto& r = (*reference)[static_cast<std::size_t>(j)];
        rec.error_differential[static_cast<std::size_t>(j - 1)] =
            increment_norm(u, r, sys, NormMode::differential);
        rec.error_full[static_cast<std::size_t>(j - 1)] =
            increment_norm(u, r, sys, NormMode::full);
      }
    }

    report.coarse_seconds += rec.coarse_seconds;
    report.fine_seconds += rec.fine_seconds;
    report.iterations.push_back(std::move(rec));

    if (observer) observer(sweep, state.u_bounds);

    if (sweep >= 2 && report.iterations.back().max_increment <= cfg.tol) {
      report.converged = true;
      break;
    }
  }

  report.iterations_used = state.iteration;
  report.modeled_speedup = static_cast<double>(n) / static_cast<double>(state.iteration);
  report.total_seconds = seconds_since(t_run0);
  return {std::move(state), std::move(report)};
}

}  // namespace pintdae
