"""Picard-linearized steady solve and CN/BDF3/BDF4 transient drivers.

Steady: starting from the zero iterate, each of 40 Picard sweeps freezes
a and b at the current iterate, derives stencils, and solves the linear
system; the final iterate is the answer.

Transient drivers march tau = r*h steps to t = 1 with 20 Picard sweeps
per implicit solve, each sweep using the previous sweep's field in a and
b.  The CN scheme solves for the midpoint value with boundary data at
t_{n+1/2} and extrapolates u^{n+1} = 2 u^{n+1/2} - u^n in the interior;
stored levels keep the exact Dirichlet trace at their own time, which the
multistep history needs to sustain third/fourth order.  BDF3 starts from
two CN steps, BDF4 additionally from one BDF3 step, all at the same tau.

Iteration counts are fixed for bit-reproducibility; an optional
early-stop threshold on the max-norm iterate change exits sweeps sooner
(final fields agree with fixed-count runs to ~1e-12).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cases import ManufacturedCase
from .coefficients import (
    CoefficientTables,
    bdf3_context,
    bdf4_context,
    cn_context,
    steady_context,
    tables_from_context,
)
from .grid import GridSpec, ScalarField, sample_scalar
from .linsys import assemble, solve
from .stencils import build_stencils, mmatrix_report

DEFAULT_STEADY_ITERATIONS = 40
DEFAULT_STEP_ITERATIONS = 20
DEFAULT_R = {"cn": 0.5, "bdf3": 1.0, "bdf4": 1.0}


class SolverError(RuntimeError):
    """Divergent iteration or invalid configuration."""


@dataclass(frozen=True)
class SolveConfig:
    variant: str = "general4"
    steady_iterations: int = DEFAULT_STEADY_ITERATIONS
    step_iterations: int = DEFAULT_STEP_ITERATIONS
    r: float = 0.5
    early_stop_tol: Optional[float] = None
    check_mmatrix: bool = False
    # Available-data (kappa, f) derivatives via the high-order sampling
    # path; set False when those callables cannot leave the closed square.
    exact_data_derivs: bool = True

    def __post_init__(self):
        if self.steady_iterations < 1 or self.step_iterations < 1:
            raise SolverError("iteration counts must be >= 1")
        if self.r <= 0:
            raise SolverError(f"time-step ratio r must be positive, got {self.r}")


@dataclass
class IterationRecord:
    change: float          # max-norm change of the iterate
    solver_method: str
    solver_residual: float
    match_residual: float  # derived variants; 0 for closed forms
    mmatrix_ok: Optional[bool] = None


@dataclass
class SolutionReport:
    field: ScalarField
    diagnostics: list = field(default_factory=list)  # per iteration or step
    elapsed: float = 0.0
    steps: int = 0


def _check_finite(values: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(values)):
        raise SolverError(f"divergence: non-finite iterate at {where}")


def _sweep(tables: CoefficientTables, config: SolveConfig, g: np.ndarray,
           prev_iterate: ScalarField) -> tuple[ScalarField, IterationRecord]:
    stencils = build_stencils(tables, config.variant)
    system = assemble(stencils, g, tables.grid.h)
    new_field, stats = solve(system)
    change = float(np.max(np.abs(new_field.values - prev_iterate.values)))
    match = 0.0
    if stencils.match_residual is not None:
        match = float(stencils.match_residual.max())
    rec = IterationRecord(change=change, solver_method=stats.method,
                          solver_residual=stats.residual, match_residual=match)
    if config.check_mmatrix:
        rec.mmatrix_ok = bool(mmatrix_report(stencils))
    return new_field, rec


def solve_steady(case: ManufacturedCase, grid: GridSpec,
                 config: SolveConfig) -> SolutionReport:
    """Fixed-point iteration on the steady problem from the zero iterate."""
    if not case.is_steady:
        raise SolverError(f"case {case.name!r} is transient; use a time driver")
    t0 = time.perf_counter()
    g = sample_scalar(case.boundary_g, grid, 0.0).values
    iterate = ScalarField(grid, np.zeros((grid.n_nodes, grid.n_nodes)))
    ctx = steady_context(case, grid, exact_data=config.exact_data_derivs)
    diagnostics = []
    for k in range(config.steady_iterations):
        tables = tables_from_context(ctx, iterate)
        new_field, rec = _sweep(tables, config, g, iterate)
        _check_finite(new_field.values, f"steady iteration {k}")
        diagnostics.append(rec)
        iterate = new_field
        if (config.early_stop_tol is not None
                and rec.change <= config.early_stop_tol):
            break
    return SolutionReport(field=iterate, diagnostics=diagnostics,
                          elapsed=time.perf_counter() - t0,
                          steps=len(diagnostics))


def _n_steps(grid: GridSpec, r: float) -> int:
    n2 = grid.n_cells / r
    if abs(n2 - round(n2)) > 1e-9:
        raise SolverError(
            f"tau = r*h with r={r} does not divide [0,1] into integer steps")
    return int(round(n2))


def _stamp_boundary(values: np.ndarray, case: ManufacturedCase,
                    grid: GridSpec, t: float) -> np.ndarray:
    g = sample_scalar(case.boundary_g, grid, t).values
    out = values.copy()
    for sl in (np.s_[0, :], np.s_[-1, :], np.s_[:, 0], np.s_[:, -1]):
        out[sl] = g[sl]
    return out


def _implicit_solve(ctx, case, grid, config, t_bc, initial_iterate,
                    diagnostics, where: str) -> ScalarField:
    """Run the Picard sweeps of one implicit stage."""
    g = sample_scalar(case.boundary_g, grid, t_bc).values
    iterate = initial_iterate
    step_diag = []
    for k in range(config.step_iterations):
        tables = tables_from_context(ctx, iterate)
        new_field, rec = _sweep(tables, config, g, iterate)
        _check_finite(new_field.values, f"{where}, sweep {k}")
        step_diag.append(rec)
        iterate = new_field
        if (config.early_stop_tol is not None
                and rec.change <= config.early_stop_tol):
            break
    diagnostics.append(step_diag)
    return iterate


def run_cn(case: ManufacturedCase, grid: GridSpec,
           config: SolveConfig) -> SolutionReport:
    """Crank-Nicolson midpoint march to t = 1."""
    if case.is_steady:
        raise SolverError(f"case {case.name!r} is steady; use solve_steady")
    if config.variant != "reduced_helmholtz":
        raise SolverError("transient drivers use the reduced_helmholtz variant")
    t0 = time.perf_counter()
    n2 = _n_steps(grid, config.r)
    tau = config.r * grid.h
    u = case.initial_u0(grid)
    diagnostics = []
    for n in range(n2):
        u = _cn_step(case, grid, config, u, n, tau, diagnostics)
    return SolutionReport(field=u, diagnostics=diagnostics,
                          elapsed=time.perf_counter() - t0, steps=n2)


def _cn_step(case, grid, config, u, n, tau, diagnostics) -> ScalarField:
    t_mid = (n + 0.5) * tau
    ctx = cn_context(case, u, t_mid, config.r,
                     exact_data=config.exact_data_derivs)
    mid = _implicit_solve(ctx, case, grid, config, t_mid, u, diagnostics,
                          f"cn step {n}")
    new_vals = 2.0 * mid.values - u.values
    new_vals = _stamp_boundary(new_vals, case, grid, (n + 1) * tau)
    return ScalarField(grid, new_vals)


def run_bdf3(case: ManufacturedCase, grid: GridSpec,
             config: SolveConfig) -> SolutionReport:
    """BDF3 march with CN startup, all at the same tau."""
    if case.is_steady:
        raise SolverError(f"case {case.name!r} is steady; use solve_steady")
    if config.variant != "reduced_helmholtz":
        raise SolverError("transient drivers use the reduced_helmholtz variant")
    t0 = time.perf_counter()
    n2 = _n_steps(grid, config.r)
    if n2 < 3:
        raise SolverError(f"BDF3 needs at least 3 steps, got {n2}")
    tau = config.r * grid.h
    diagnostics = []
    hist = [case.initial_u0(grid)]
    for n in range(2):
        hist.append(_cn_step(case, grid, config, hist[-1], n, tau,
                             diagnostics))
    for n in range(n2 - 2):
        t_new = (n + 3) * tau
        ctx = bdf3_context(case, hist[0], hist[1], hist[2], t_new,
                           config.r, exact_data=config.exact_data_derivs)
        u_new = _implicit_solve(ctx, case, grid, config, t_new, hist[2],
                                diagnostics, f"bdf3 step {n}")
        hist = [hist[1], hist[2], u_new]
    return SolutionReport(field=hist[-1], diagnostics=diagnostics,
                          elapsed=time.perf_counter() - t0, steps=n2)


def run_bdf4(case: ManufacturedCase, grid: GridSpec,
             config: SolveConfig) -> SolutionReport:
    """BDF4 march with CN + BDF3 startup, all at the same tau."""
    if case.is_steady:
        raise SolverError(f"case {case.name!r} is steady; use solve_steady")
    if config.variant != "reduced_helmholtz":
        raise SolverError("transient drivers use the reduced_helmholtz variant")
    t0 = time.perf_counter()
    n2 = _n_steps(grid, config.r)
    if n2 < 4:
        raise SolverError(f"BDF4 needs at least 4 steps, got {n2}")
    tau = config.r * grid.h
    diagnostics = []
    hist = [case.initial_u0(grid)]
    for n in range(2):
        hist.append(_cn_step(case, grid, config, hist[-1], n, tau,
                             diagnostics))
    ctx3 = bdf3_context(case, hist[0], hist[1], hist[2], 3 * tau,
                        config.r, exact_data=config.exact_data_derivs)
    u3 = _implicit_solve(ctx3, case, grid, config, 3 * tau, hist[2],
                         diagnostics, "bdf4 startup")
    hist.append(u3)
    for n in range(n2 - 3):
        t_new = (n + 4) * tau
        ctx = bdf4_context(case, hist[0], hist[1], hist[2], hist[3],
                           t_new, config.r,
                           exact_data=config.exact_data_derivs)
        u_new = _implicit_solve(ctx, case, grid, config, t_new, hist[3],
                                diagnostics, f"bdf4 step {n}")
        hist = [hist[1], hist[2], hist[3], u_new]
    return SolutionReport(field=hist[-1], diagnostics=diagnostics,
                          elapsed=time.perf_counter() - t0, steps=n2)


ALGORITHMS = {
    "steady": solve_steady,
    "cn": run_cn,
    "bdf3": run_bdf3,
    "bdf4": run_bdf4,
}


def run_algorithm(name: str, case: ManufacturedCase, grid: GridSpec,
                  config: SolveConfig) -> SolutionReport:
    try:
        driver = ALGORITHMS[name]
    except KeyError:
        raise SolverError(
            f"unknown algorithm {name!r}; pick from {sorted(ALGORITHMS)}")
    return driver(case, grid, config)
