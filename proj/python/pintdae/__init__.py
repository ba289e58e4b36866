# SPDX-License-Identifier: Apache-2.0
"""Parallel-in-time (Parareal) integration of index-1 DAE systems."""

from ._core import (  # noqa: F401
    CoupledToyModel,
    DaeSystem,
    IterationRecord,
    NonConvergenceError,
    NormMode,
    PararealConfig,
    PararealState,
    Propagator,
    PropagatorConfig,
    RodModel,
    RunReport,
    SingularMatrixError,
    StateVector,
    StructureError,
    UpdateMode,
    WindowGrid,
    __version__,
    algebraic_residual_norm,
    build_analytic_2x2,
    build_coupled,
    build_projectors,
    build_rod,
    euler_step,
    increment_norm,
    make_consistent,
    matching_residual,
    residual,
    run,
    sequential_trajectory,
    set_saturation_curve,
    solve_linear,
    split_state,
    update_window,
)
