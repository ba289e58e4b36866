// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pintdae/io.hpp"
#include "pintdae/models.hpp"
#include "pintdae/parareal.hpp"

namespace py = pybind11;
using namespace pintdae;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parallel-in-time (Parareal) integration of index-1 DAE systems";

  py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<>())
      .def(py::init([](const Vector& values, double time) {
             return StateVector{values, time};
           }),
           py::arg("values"), py::arg("time") = 0.0)
      .def_readwrite("values", &StateVector::values)
      .def_readwrite("time", &StateVector::time)
      .def("__repr__", [](const StateVector& s) {
        return "StateVector(n=" + std::to_string(s.values.size()) +
               ", time=" + std::to_string(s.time) + ")";
      });

  py::class_<DaeSystem>(m, "DaeSystem")
      .def_readonly("n", &DaeSystem::n)
      .def_readonly("linear", &DaeSystem::linear)
      .def_readonly("t_span", &DaeSystem::t_span)
      .def_readonly("initial_state", &DaeSystem::initial_state)
      .def_property_readonly("differential_indices",
                             [](const DaeSystem& s) {
                               return s.projectors.differential_index_set;
                             })
      .def_property_readonly("algebraic_indices",
                             [](const DaeSystem& s) { return s.projectors.algebraic_index_set; })
      .def_property_readonly("mass", [](const DaeSystem& s) { return s.mass.data(); })
      .def_property_readonly(
          "projector_p", [](const DaeSystem& s) { return s.projectors.p.data(); })
      .def_property_readonly(
          "projector_q", [](const DaeSystem& s) { return s.projectors.q.data(); })
      .def("stiffness", [](const DaeSystem& s, const Vector& u) { return s.stiffness(u).data(); },
           py::arg("u"))
      .def("source", [](const DaeSystem& s, double t) { return s.source(t); }, py::arg("t"))
      .def_property_readonly("has_reference",
                             [](const DaeSystem& s) { return bool(s.reference_solution); })
      .def("reference",
           [](const DaeSystem& s, double t, const Vector& u0) {
             if (!s.reference_solution) {
               throw StructureError("model has no closed-form reference solution");
             }
             return s.reference_solution(t, u0);
           },
           py::arg("t"), py::arg("u0"));

  m.def("build_projectors",
        [](const Eigen::MatrixXd& mass) {
          const auto pair = build_projectors(Matrix(mass));
          return py::make_tuple(pair.p.data(), pair.q.data(), pair.differential_index_set);
        },
        py::arg("mass"),
        "Returns (P, Q, differential_indices) for a possibly singular mass matrix");

  m.def("solve_linear",
        [](const Eigen::MatrixXd& a, const Vector& b) { return solve_linear(Matrix(a), b); },
        py::arg("a"), py::arg("b"));

  m.def("split_state", &split_state, py::arg("system"), py::arg("state"));
  m.def("make_consistent",
        [](const DaeSystem& sys, const StateVector& u, double tol, int max_iter) {
          return make_consistent(sys, u, {tol, max_iter});
        },
        py::arg("system"), py::arg("state"), py::arg("tol") = 1e-8, py::arg("max_iter") = 50);
  m.def("residual", &residual, py::arg("system"), py::arg("state"), py::arg("du_dt"));
  m.def("algebraic_residual_norm", &algebraic_residual_norm, py::arg("system"),
        py::arg("state"));

  py::class_<PropagatorConfig>(m, "PropagatorConfig")
      .def(py::init([](double dt, double newton_tol, int newton_max_iter, std::string label) {
             return PropagatorConfig{dt, newton_tol, newton_max_iter, std::move(label)};
           }),
           py::arg("dt"), py::arg("newton_tol") = 1e-10, py::arg("newton_max_iter") = 25,
           py::arg("label") = "")
      .def_readwrite("dt", &PropagatorConfig::dt)
      .def_readwrite("newton_tol", &PropagatorConfig::newton_tol)
      .def_readwrite("newton_max_iter", &PropagatorConfig::newton_max_iter)
      .def_readwrite("label", &PropagatorConfig::label);

  m.def("euler_step", &euler_step, py::arg("system"), py::arg("state"), py::arg("dt"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::class_<Propagator>(m, "Propagator")
      .def(py::init<const DaeSystem&, PropagatorConfig>(), py::arg("system"), py::arg("config"),
           py::keep_alive<1, 2>())
      .def("propagate", &Propagator::propagate, py::arg("t_target"), py::arg("t_start"),
           py::arg("state"), py::call_guard<py::gil_scoped_release>());

  m.def("sequential_trajectory", &sequential_trajectory, py::arg("system"), py::arg("u0"),
        py::arg("points"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::enum_<NormMode>(m, "NormMode")
      .value("differential", NormMode::differential)
      .value("full", NormMode::full);
  py::enum_<UpdateMode>(m, "UpdateMode")
      .value("projected_consistent", UpdateMode::projected_consistent)
      .value("plain", UpdateMode::plain);

  py::class_<WindowGrid>(m, "WindowGrid")
      .def_static("uniform", &WindowGrid::uniform, py::arg("t0"), py::arg("t_end"),
                  py::arg("n_windows"))
      .def_readonly("boundaries", &WindowGrid::boundaries)
      .def_property_readonly("n_windows", &WindowGrid::n_windows);

  py::class_<PararealConfig>(m, "PararealConfig")
      .def(py::init<>())
      .def_readwrite("n_windows", &PararealConfig::n_windows)
      .def_readwrite("fine", &PararealConfig::fine)
      .def_readwrite("coarse", &PararealConfig::coarse)
      .def_readwrite("tol", &PararealConfig::tol)
      .def_readwrite("max_iter", &PararealConfig::max_iter)
      .def_readwrite("norm_mode", &PararealConfig::norm_mode)
      .def_readwrite("update_mode", &PararealConfig::update_mode)
      .def_readwrite("workers", &PararealConfig::workers)
      .def_readwrite("boundaries", &PararealConfig::boundaries);

  py::class_<PararealState>(m, "PararealState")
      .def_readonly("u_bounds", &PararealState::u_bounds)
      .def_readonly("coarse_prev", &PararealState::coarse_prev)
      .def_readonly("fine_prev", &PararealState::fine_prev)
      .def_readonly("initial", &PararealState::initial)
      .def_readonly("iteration", &PararealState::iteration);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iteration", &IterationRecord::iteration)
      .def_readonly("max_increment", &IterationRecord::max_increment)
      .def_readonly("window_increments", &IterationRecord::window_increments)
      .def_readonly("error_differential", &IterationRecord::error_differential)
      .def_readonly("error_full", &IterationRecord::error_full)
      .def_readonly("coarse_seconds", &IterationRecord::coarse_seconds)
      .def_readonly("fine_seconds", &IterationRecord::fine_seconds);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("iterations", &RunReport::iterations)
      .def_readonly("iterations_used", &RunReport::iterations_used)
      .def_readonly("converged", &RunReport::converged)
      .def_readonly("input_made_consistent", &RunReport::input_made_consistent)
      .def_readonly("coarse_seconds", &RunReport::coarse_seconds)
      .def_readonly("fine_seconds", &RunReport::fine_seconds)
      .def_readonly("total_seconds", &RunReport::total_seconds)
      .def_readonly("modeled_speedup", &RunReport::modeled_speedup)
      .def_readonly("actual_speedup", &RunReport::actual_speedup);

  m.def("increment_norm", &increment_norm, py::arg("u_new"), py::arg("u_old"),
        py::arg("system"), py::arg("mode") = NormMode::differential);
  m.def("update_window", &update_window, py::arg("window"), py::arg("coarse_new"),
        py::arg("coarse_prev"), py::arg("fine_prev"), py::arg("system"), py::arg("mode"));
  m.def("matching_residual", &matching_residual, py::arg("state"), py::arg("system"),
        py::arg("fine"), py::arg("mode") = NormMode::differential,
        py::call_guard<py::gil_scoped_release>());

  m.def("run",
        [](const DaeSystem& sys, const StateVector& u0, const PararealConfig& cfg,
           std::optional<std::vector<StateVector>> reference, const IterationObserver& observer) {
          py::gil_scoped_release release;
          return run(sys, u0, cfg, reference ? &*reference : nullptr, observer);
        },
        py::arg("system"), py::arg("u0"), py::arg("config"), py::arg("reference") = py::none(),
        py::arg("observer") = py::none(),
        "Parareal driver; returns (PararealState, RunReport)");

  py::class_<models::RodModel>(m, "RodModel")
      .def(py::init<>())
      .def_readwrite("n_cells", &models::RodModel::n_cells)
      .def_readwrite("length", &models::RodModel::length)
      .def_readwrite("sigma", &models::RodModel::sigma)
      .def_readwrite("core_lo", &models::RodModel::core_lo)
      .def_readwrite("core_hi", &models::RodModel::core_hi)
      .def_readwrite("sigma_profile", &models::RodModel::sigma_profile)
      .def_readwrite("nu", &models::RodModel::nu)
      .def_readwrite("reluctivity", &models::RodModel::reluctivity)
      .def_readwrite("reluctivity_derivative", &models::RodModel::reluctivity_derivative)
      .def_readwrite("source_amplitude", &models::RodModel::source_amplitude)
      .def_readwrite("source_frequency", &models::RodModel::source_frequency)
      .def_readwrite("winding_lo", &models::RodModel::winding_lo)
      .def_readwrite("winding_hi", &models::RodModel::winding_hi);

  m.def("set_saturation_curve", &models::set_saturation_curve, py::arg("model"),
        py::arg("nu_min"), py::arg("nu_max"), py::arg("b_sat"));

  py::class_<models::CoupledToyModel>(m, "CoupledToyModel")
      .def(py::init<>())
      .def_readwrite("field", &models::CoupledToyModel::field)
      .def_readwrite("inertia", &models::CoupledToyModel::inertia)
      .def_readwrite("torsion", &models::CoupledToyModel::torsion)
      .def_readwrite("torque_scale", &models::CoupledToyModel::torque_scale)
      .def_readwrite("theta0", &models::CoupledToyModel::theta0)
      .def_readwrite("omega0", &models::CoupledToyModel::omega0);

  m.def("build_analytic_2x2", &models::build_analytic_2x2, py::arg("t_end") = 1.0,
        py::arg("u1_initial") = 1.0);
  m.def("build_rod", &models::build_rod, py::arg("model"), py::arg("t_end") = 0.2);
  m.def("build_coupled", &models::build_coupled, py::arg("model"), py::arg("t_end") = 0.2);

  m.attr("__version__") = "0.1.0";
}
