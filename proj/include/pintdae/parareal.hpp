// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "pintdae/stepper.hpp"

namespace pintdae {

enum class NormMode { differential, full };
enum class UpdateMode { projected_consistent, plain };

/// Time-window boundaries T_0 < T_1 < ... < T_N.
struct WindowGrid {
  std::vector<double> boundaries;

  static WindowGrid uniform(double t0, double t_end, int n_windows);
  int n_windows() const { return static_cast<int>(boundaries.size()) - 1; }
  void validate(double t0, double t_end) const;
};

struct PararealConfig {
  int n_windows = 1;
  PropagatorConfig fine;
  PropagatorConfig coarse;
  double tol = 1e-2;   ///< on the relative increment between consecutive iterates
  int max_iter = 0;    ///< sweeps; 0 means n_windows. At least 2 sweeps always run.
  NormMode norm_mode = NormMode::differential;
  UpdateMode update_mode = UpdateMode::projected_consistent;
  int workers = 1;     ///< worker threads for the parallel fine stage
  std::vector<double> boundaries;  ///< optional non-uniform grid; empty -> uniform

  void validate() const;
};

/// Window boundary values and the cached propagator results they were built
/// from. Entry j-1 of the cached arrays belongs to window j (target T_j).
struct PararealState {
  std::vector<StateVector> u_bounds;     ///< size N+1, U_j at T_j
  std::vector<StateVector> coarse_prev;  ///< size N, coarse value from the last sweep
  std::vector<StateVector> fine_prev;    ///< size N, fine value from the last sweep
  StateVector initial;                   ///< prescribed consistent initial value
  int iteration = 0;                     ///< sweeps completed
};

/// Per-sweep record. The first sweep has no predecessor, so its increments
/// are NaN. Error columns are filled only when a reference trajectory was
/// supplied to run().
struct IterationRecord {
  int iteration = 0;
  double max_increment = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> window_increments;
  std::vector<double> error_differential;
  std::vector<double> error_full;
  double coarse_seconds = 0.0;
  double fine_seconds = 0.0;
};

struct RunReport {
  std::vector<IterationRecord> iterations;
  int iterations_used = 0;
  bool converged = false;
  bool input_made_consistent = false;
  double coarse_seconds = 0.0;
  double fine_seconds = 0.0;
  double total_seconds = 0.0;
  double modeled_speedup = 0.0;  ///< n_windows / iterations_used, coarse cost ignored
  double actual_speedup = std::numeric_limits<double>::quiet_NaN();
};

/// Called after every sweep with the current boundary values U_0..U_N.
using IterationObserver = std::function<void(int iteration, const std::vector<StateVector>&)>;

/// Relative l2 distance between two states: ‖d‖/max(‖u_old‖, tiny), taken on
/// the projected differential components or on the full vector.
double increment_norm(const StateVector& u_new, const StateVector& u_old,
                      const DaeSystem& sys, NormMode mode);

/// Quasi-Newton window correction: fine_prev + coarse_new - coarse_prev.
/// In projected_consistent mode only the differential components take that
/// combination; the algebraic components are recomputed from the constraint.
StateVector update_window(int window, const StateVector& coarse_new,
                          const StateVector& coarse_prev, const StateVector& fine_prev,
                          const DaeSystem& sys, UpdateMode mode);

/// Window-continuity defect of a boundary-value set: entry 0 is the distance
/// of U_0 from the prescribed initial value, entry j the distance of U_j from
/// the fine propagation of U_{j-1}. Diagnostic: re-runs fine propagation.
std::vector<double> matching_residual(const PararealState& state, const DaeSystem& sys,
                                      const Propagator& fine,
                                      NormMode mode = NormMode::differential);

/// Parareal driver. Each sweep runs the sequential coarse stage with the
/// quasi-Newton correction applied window by window, then the fine stage in
/// parallel over windows. Cached coarse/fine values start at zero, so the
/// first sweep reduces to plain sequential coarse propagation. The loop stops
/// once at least two sweeps have run and the maximum relative increment
/// between consecutive iterates drops to cfg.tol, or after max_iter sweeps
/// (non-convergence is flagged in the report, not thrown).
///
/// `reference`, when given, must hold the trajectory at all window
/// boundaries; per-window errors against it are recorded every sweep.
std::pair<PararealState, RunReport> run(const DaeSystem& sys, const StateVector& u0,
                                        const PararealConfig& cfg,
                                        const std::vector<StateVector>* reference = nullptr,
                                        const IterationObserver& observer = {});

}  // namespace pintdae
