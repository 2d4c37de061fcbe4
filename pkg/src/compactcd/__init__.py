"""Fourth-order compact 9-point finite-difference solvers for nonlinear
convection-diffusion equations on the unit square."""

from .cases import (
    FluxSpec,
    ManufacturedCase,
    exact_source_check,
    lookup_case,
    register_case,
    registered_names,
)
from .grid import GridSpec, ScalarField, make_grid, sample_scalar, zeros_field
from .harness import (
    ConvergenceReport,
    consistency_probe,
    convergence_study,
    emit_report,
    error_norms,
)
from .solvers import (
    SolveConfig,
    SolutionReport,
    run_bdf3,
    run_bdf4,
    run_cn,
    solve_steady,
)

__all__ = [
    "ConvergenceReport",
    "FluxSpec",
    "GridSpec",
    "ManufacturedCase",
    "ScalarField",
    "SolutionReport",
    "SolveConfig",
    "consistency_probe",
    "convergence_study",
    "emit_report",
    "error_norms",
    "exact_source_check",
    "lookup_case",
    "make_grid",
    "register_case",
    "registered_names",
    "run_bdf3",
    "run_bdf4",
    "run_cn",
    "sample_scalar",
    "solve_steady",
    "zeros_field",
]

__version__ = "0.1.0"
