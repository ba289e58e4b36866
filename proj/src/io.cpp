// SPDX-License-Identifier: Apache-2.0
#include "pintdae/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pintdae/errors.hpp"

namespace pintdae::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string trajectory_csv(const std::vector<StateVector>& traj) {
  if (traj.empty()) throw StructureError("cannot serialize an empty trajectory");
  std::ostringstream out;
  out << "time";
  for (Index i = 0; i < traj.front().values.size(); ++i) out << ",u" << i;
  out << "\n";
  for (const auto& s : traj) {
    out << format_double(s.time);
    for (Index i = 0; i < s.values.size(); ++i) out << "," << format_double(s.values[i]);
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw StructureError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw StructureError("write to '" + path + "' failed");
}

void write_trajectory_csv(const std::string& path, const std::vector<StateVector>& traj) {
  write_text_file(path, trajectory_csv(traj));
}

std::vector<StateVector> read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw StructureError("cannot open trajectory file '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw StructureError("trajectory file '" + path + "' is empty");

  Index n_cols = 0;
  for (char c : line) n_cols += (c == ',');
  if (n_cols < 1 || line.rfind("time", 0) != 0) {
    throw StructureError("trajectory file '" + path + "' lacks a 'time,u0,...' header");
  }

  std::vector<StateVector> traj;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    StateVector s;
    s.values.resize(n_cols);
    std::istringstream row(line);
    std::string cell;
    for (Index i = 0; i <= n_cols; ++i) {
      if (!std::getline(row, cell, ',')) {
        throw StructureError("short row in trajectory file '" + path + "'");
      }
      const double v = std::stod(cell);
      if (i == 0) {
        s.time = v;
      } else {
        s.values[i - 1] = v;
      }
    }
    traj.push_back(std::move(s));
  }
  if (traj.empty()) throw StructureError("trajectory file '" + path + "' has no data rows");
  return traj;
}

std::string parareal_csv(const RunReport& report, const WindowGrid& grid) {
  std::ostringstream out;
  out << "iteration,window_index,T_j,increment_norm,error_vs_reference_differential,"
         "error_vs_reference_full,coarse_seconds,fine_seconds\n";
  const int n = grid.n_windows();
  for (const auto& rec : report.iterations) {
    for (int j = 1; j <= n; ++j) {
      const std::size_t w = static_cast<std::size_t>(j - 1);
      out << rec.iteration << "," << j << ","
          << format_double(grid.boundaries[static_cast<std::size_t>(j)]) << ","
          << format_double(rec.window_increments.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : rec.window_increments[w])
          << ","
          << format_double(rec.error_differential.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : rec.error_differential[w])
          << ","
          << format_double(rec.error_full.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                  : rec.error_full[w])
          << "," << format_double(rec.coarse_seconds) << "," << format_double(rec.fine_seconds)
          << "\n";
    }
  }
  return out.str();
}

}  // namespace pintdae::io
