"""Reproduction sweeps, closed-form checks and the scenario-driven self-test."""

from .random_systems import random_canonical, random_coefficients, random_invertible, random_spectrum
from .selftest import (
    CHECK_REGISTRY,
    DEFAULT_SCENARIO,
    CheckResult,
    SelftestReport,
    is_check_registered,
    list_check_kinds,
    load_scenario,
    register_check,
    run_selftest,
)
from .unbroken import UnbrokenExampleReport, verify_unbroken_example
from .zgrid import (
    CSV_COLUMNS,
    ConvergencePoint,
    GridReport,
    ZValues,
    broken_dilation,
    write_grid_csv,
    z_convergence,
    z_grid,
    z_values,
)

__all__ = [
    "CHECK_REGISTRY",
    "CSV_COLUMNS",
    "CheckResult",
    "ConvergencePoint",
    "DEFAULT_SCENARIO",
    "GridReport",
    "SelftestReport",
    "UnbrokenExampleReport",
    "ZValues",
    "broken_dilation",
    "is_check_registered",
    "list_check_kinds",
    "load_scenario",
    "random_canonical",
    "random_coefficients",
    "random_invertible",
    "random_spectrum",
    "register_check",
    "run_selftest",
    "verify_unbroken_example",
    "write_grid_csv",
    "z_convergence",
    "z_grid",
    "z_values",
]
