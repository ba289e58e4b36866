// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "pintdae/io.hpp"
#include "pintdae/models.hpp"

using namespace pintdae;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("format_double: 17 significant digits, round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double v = mantissa(rng) * std::pow(10.0, mag(rng));
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(1.5) == "1.5000000000000000e+00");
}

TEST_CASE("trajectory csv: write/read round-trip preserves values bitwise") {
  std::vector<StateVector> traj;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int i = 0; i < 5; ++i) {
    StateVector s;
    s.time = 0.1 * i;
    s.values = Vector(3);
    for (Index k = 0; k < 3; ++k) s.values[k] = gauss(rng);
    traj.push_back(std::move(s));
  }
  const auto path = temp_file("pintdae_traj_test.csv");
  io::write_trajectory_csv(path.string(), traj);
  const auto back = io::read_trajectory_csv(path.string());
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(back[i].time == traj[i].time);
    CHECK(back[i].values == traj[i].values);
  }
  std::filesystem::remove(path);
}

TEST_CASE("trajectory csv: malformed inputs raise") {
  const auto path = temp_file("pintdae_bad_traj.csv");
  io::write_text_file(path.string(), "not,a,header\n1,2,3\n");
  CHECK_THROWS_AS(io::read_trajectory_csv(path.string()), StructureError);
  io::write_text_file(path.string(), "time,u0\n");
  CHECK_THROWS_AS(io::read_trajectory_csv(path.string()), StructureError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_trajectory_csv(path.string()), StructureError);
}

TEST_CASE("parareal csv: one row per iteration and window") {
  const DaeSystem sys = models::build_analytic_2x2();
  PararealConfig cfg;
  cfg.n_windows = 3;
  cfg.fine = {0.01, 1e-10, 25, "fine"};
  cfg.coarse = {0.1, 1e-10, 25, "coarse"};
  cfg.tol = 1e-4;
  cfg.max_iter = 4;
  const auto [state, report] = run(sys, sys.initial_state, cfg);
  const WindowGrid grid = WindowGrid::uniform(0.0, 1.0, 3);

  const std::string csv = io::parareal_csv(report, grid);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line ==
        "iteration,window_index,T_j,increment_norm,error_vs_reference_differential,"
        "error_vs_reference_full,coarse_seconds,fine_seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3 * report.iterations_used);
}
