// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "pintdae/parareal.hpp"

namespace pintdae::io {

/// Scientific notation with 17 significant digits; round-trips doubles.
std::string format_double(double v);

/// Trajectory file: header "time,u0,...,u{n-1}", one row per snapshot.
std::string trajectory_csv(const std::vector<StateVector>& traj);
void write_trajectory_csv(const std::string& path, const std::vector<StateVector>& traj);
std::vector<StateVector> read_trajectory_csv(const std::string& path);

/// Per-(iteration, window) convergence table for a parareal run.
/// Columns: iteration, window_index, T_j, increment_norm,
/// error_vs_reference_differential, error_vs_reference_full,
/// coarse_seconds, fine_seconds.
std::string parareal_csv(const RunReport& report, const WindowGrid& grid);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pintdae::io
