"""Adaptive per-coordinate first-order methods (C++ core)."""

from ._adaprox import (
    Algorithm,
    DiagonalScaling,
    FeasibleSet,
    Objective,
    Optimizer,
    ScalingMode,
    SpecError,
    bilinear_gap,
    check_recurrence_bounds,
    diag_quadratic,
    estimate_rate,
    iterations_to_target,
    l2_diameter,
    linf_diameter,
    make_optimizer,
    nesterov_worst,
    project_weighted,
    run,
    run_csv,
    synthetic_table,
)

__all__ = [
    "Algorithm",
    "DiagonalScaling",
    "FeasibleSet",
    "Objective",
    "Optimizer",
    "ScalingMode",
    "SpecError",
    "bilinear_gap",
    "check_recurrence_bounds",
    "diag_quadratic",
    "estimate_rate",
    "iterations_to_target",
    "l2_diameter",
    "linf_diameter",
    "make_optimizer",
    "nesterov_worst",
    "project_weighted",
    "run",
    "run_csv",
    "synthetic_table",
]
