"""Error norms, convergence studies, consistency probes, and reports.

Norms follow the discrete definitions used for the published tables:

    ||e||_2^2 = h^2 sum_{i,j=0}^{N} e_{i,j}^2,    ||e||_inf = max |e_{i,j}|,

summed over all nodes including the boundary, with the transient error
measured at t = 1.  Observed orders are log2(e(h)/e(h/2)) reported on the
finer level's row; the coarsest level has none.

The consistency probe applies an assembled stencil operator to the exact
solution with coefficients built FROM the exact solution, so it measures
the scheme's truncation rather than the solver error.  Coefficient
tables for the probe come from high-order sampling of analytic data
(13-point stencils on padded coordinates), keeping table noise far below
the h^4 truncation signal that the probe is trying to resolve.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .cases import ManufacturedCase
from .coefficients import (
    MAX_COEFF_ORDER,
    MAX_PSI_ORDER,
    CoefficientTables,
    _table_from_extended,
    available_table,
)
from .grid import GridSpec, ScalarField, make_grid, sample_scalar
from .solvers import SolveConfig, run_algorithm
from .stencils import StencilField, build_stencils


class HarnessError(ValueError):
    pass


def error_norms(numeric: ScalarField, exact: ScalarField) -> tuple[float, float]:
    """(l2, linf) of the difference, boundary nodes included."""
    if numeric.grid != exact.grid:
        raise HarnessError("fields live on different grids")
    diff = numeric.values - exact.values
    h = numeric.grid.h
    l2 = math.sqrt(h * h * float(np.sum(diff * diff)))
    return l2, float(np.max(np.abs(diff)))


@dataclass
class ConvergenceRow:
    h: float
    tau: Optional[float]
    l2: float
    linf: float
    l2_order: Optional[float] = None
    linf_order: Optional[float] = None


@dataclass
class ConvergenceReport:
    case: str
    algorithm: str
    variant: str
    r: Optional[float]
    rows: list = field(default_factory=list)
    elapsed: float = 0.0

    def attach_orders(self) -> None:
        for prev, cur in zip(self.rows, self.rows[1:]):
            if prev.l2 > 0 and cur.l2 > 0:
                cur.l2_order = math.log2(prev.l2 / cur.l2)
            if prev.linf > 0 and cur.linf > 0:
                cur.linf_order = math.log2(prev.linf / cur.linf)


def _run_level(case, algorithm, n_cells, config):
    grid = make_grid(n_cells)
    report = run_algorithm(algorithm, case, grid, config)
    t_final = 0.0 if case.is_steady else 1.0
    exact = sample_scalar(case.exact_u, grid, t_final)
    l2, linf = error_norms(report.field, exact)
    tau = None if case.is_steady else config.r * grid.h
    return ConvergenceRow(h=grid.h, tau=tau, l2=l2, linf=linf)


def convergence_study(case: ManufacturedCase, algorithm: str, variant: str,
                      n_list, r: float = 0.5,
                      config: Optional[SolveConfig] = None,
                      threads: int = 1) -> ConvergenceReport:
    """Solve at each refinement level and tabulate errors and orders.

    n_list holds cells-per-side counts, each double the last.
    """
    n_list = [int(n) for n in n_list]
    for a, b in zip(n_list, n_list[1:]):
        if b != 2 * a:
            raise HarnessError(f"levels must halve h: got {a} then {b}")
    if config is None:
        config = SolveConfig(variant=variant, r=r)
    t0 = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda n: _run_level(case, algorithm, n, config), n_list))
    else:
        rows = [_run_level(case, algorithm, n, config) for n in n_list]
    report = ConvergenceReport(case=case.name, algorithm=algorithm,
                               variant=variant,
                               r=None if case.is_steady else config.r,
                               rows=rows,
                               elapsed=time.perf_counter() - t0)
    report.attach_orders()
    return report


# ---------------------------------------------------------------------------
# Consistency probes
# ---------------------------------------------------------------------------

def _probe_tables(case: ManufacturedCase, grid: GridSpec, variant: str,
                  r: float, t: float) -> CoefficientTables:
    """Coefficient tables built from the exact solution via high-order
    sampling, shaped for the requested stencil variant.

    general4 / reduced_elliptic take the case's own linearization
    (psi = -f/kappa).  special4 symmetrizes the convection (b := a) and
    manufactures psi = Lap(u) + a (u_x + u_y); reduced_helmholtz adds the
    zeroth-order term c = -2/(r kappa) and psi = Lap(u) + a u_x + b u_y
    + (c/h) u.  The synthesized psi fields need the case's analytic
    derivative callable.
    """
    pad = 6
    h = grid.h
    coords = np.arange(-2 * pad, grid.n_cells + 2 * pad + 1) * h
    X, Y = np.meshgrid(coords, coords, indexing="ij")
    kap = np.broadcast_to(np.asarray(case.kappa(X, Y, t), dtype=float),
                          X.shape)
    u = np.broadcast_to(np.asarray(case.exact_u(X, Y, t), dtype=float),
                        X.shape)

    def ho_d1(vals, axis):
        from .coefficients import _convolve_axis
        d = _convolve_axis(vals, 1, h, axis=axis)
        keep = slice(pad, -pad)
        return d[:, keep] if axis == 0 else d[keep, :]

    inner = slice(pad, -pad)
    kx = ho_d1(kap, 0)
    ky = ho_d1(kap, 1)
    kap1, u1 = kap[inner, inner], u[inner, inner]
    a_ext = (kx - case.flux.alpha_u(u1)) / kap1
    b_ext = (ky - case.flux.beta_u(u1)) / kap1

    if variant == "special4":
        b_ext = a_ext
    a_table = _table_from_extended(a_ext, grid, MAX_COEFF_ORDER)
    b_table = _table_from_extended(b_ext, grid, MAX_COEFF_ORDER)

    c_table = None
    mode = "steady"
    if variant == "reduced_helmholtz":
        mode = "helmholtz"
        c_ext = -2.0 / (r * kap1)
        c_table = _table_from_extended(c_ext, grid, MAX_COEFF_ORDER)

    if variant in ("general4", "reduced_elliptic"):
        psi_table = available_table(
            lambda x, y, tt: -case.source_f(x, y, tt) / case.kappa(x, y, tt),
            grid, t, MAX_PSI_ORDER)
    else:
        if case.exact_deriv is None:
            raise HarnessError(
                f"case {case.name!r} lacks analytic derivatives; the "
                f"{variant} probe needs them")
        xi, yi = X[inner, inner], Y[inner, inner]
        lap = case.exact_deriv(2, 0, xi, yi, t) + case.exact_deriv(0, 2, xi, yi, t)
        ux = case.exact_deriv(1, 0, xi, yi, t)
        uy = case.exact_deriv(0, 1, xi, yi, t)
        psi_ext = lap + a_ext * ux + b_ext * uy
        if variant == "reduced_helmholtz":
            psi_ext = psi_ext + (c_ext / h) * u1
        psi_table = _table_from_extended(psi_ext, grid, MAX_PSI_ORDER)
    return CoefficientTables(grid=grid, mode=mode, a_table=a_table,
                             b_table=b_table, c_table=c_table,
                             psi_table=psi_table,
                             r=None if mode == "steady" else r)


def apply_stencil_operator(stencils: StencilField,
                           u_values: np.ndarray) -> np.ndarray:
    """h^-2 sum C_{k,l} u_{i+k,j+l} - F over interior nodes."""
    grid = stencils.grid
    n = grid.n_cells
    acc = np.zeros((n - 1, n - 1))
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            acc += stencils.C[:, :, k + 1, l + 1] * u_values[1 + k:n + k,
                                                             1 + l:n + l]
    return acc / grid.h**2 - stencils.F


@dataclass
class ProbeResult:
    variant: str
    h_list: list
    residuals: list
    observed_order: float          # log2 slope between the two finest levels
    center_ratio: Optional[float]  # leading-coefficient ratio at (0.5, 0.5),
                                   # derived variants only (see below)


def consistency_probe(case: ManufacturedCase, variant: str, n_list,
                      r: float = 0.5, t: float = 0.0) -> ProbeResult:
    """Truncation-order study of one stencil variant on the exact solution.

    For the derived variants, center_ratio compares the h^4 leading error
    at the midpoint node against the predicted coefficient
    (a^(0,1) - b^(1,0)) u^(1,3) / 90.  The raw residual/h^4 quotient still
    carries an O(h^2) tail (the next truncation term), so the leading
    coefficient is extracted by Richardson extrapolation over the two
    finest levels; with one level the raw quotient is reported.
    """
    residuals = []
    hs = []
    center_ratios = []
    for n in n_list:
        grid = make_grid(n)
        tables = _probe_tables(case, grid, variant, r, t)
        stencils = build_stencils(tables, variant)
        u = sample_scalar(case.exact_u, grid, t)
        R = apply_stencil_operator(stencils, u.values)
        hs.append(grid.h)
        residuals.append(float(np.max(np.abs(R))))
        if (variant in ("reduced_elliptic", "reduced_helmholtz")
                and case.exact_deriv is not None and n % 2 == 0):
            i = j = n // 2
            a01 = tables.a_table.value(0, 1, i, j)
            b10 = tables.b_table.value(1, 0, i, j)
            u13 = float(case.exact_deriv(1, 3, 0.5, 0.5, t))
            lead = (a01 - b10) * u13 / 90.0
            if lead != 0.0:
                center_ratios.append(float(R[i - 1, j - 1] / grid.h**4 / lead))
    order = math.log2(residuals[-2] / residuals[-1])
    center = None
    if len(center_ratios) >= 2:
        center = (4.0 * center_ratios[-1] - center_ratios[-2]) / 3.0
    elif center_ratios:
        center = center_ratios[-1]
    return ProbeResult(variant=variant, h_list=hs, residuals=residuals,
                       observed_order=order, center_ratio=center)


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

def _fmt(x, digits=5):
    return "" if x is None else f"{x:.{digits}e}"


def emit_report(report: ConvergenceReport, path, fmt: str = "csv") -> None:
    """Write a study as CSV (h, tau, l2, l2_order, linf, linf_order) or JSON."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["h", "tau", "l2", "l2_order", "linf",
                             "linf_order"])
            for row in report.rows:
                writer.writerow([
                    _fmt(row.h), _fmt(row.tau), _fmt(row.l2),
                    "" if row.l2_order is None else f"{row.l2_order:.2f}",
                    _fmt(row.linf),
                    "" if row.linf_order is None else f"{row.linf_order:.2f}",
                ])
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump(asdict(report), fh, indent=2)
    else:
        raise HarnessError(f"unknown report format {fmt!r}")


def format_report(report: ConvergenceReport) -> str:
    """Human-readable table matching the published layout."""
    lines = [f"case={report.case} algorithm={report.algorithm} "
             f"variant={report.variant}"
             + ("" if report.r is None else f" r={report.r}")]
    header = f"{'h':>10} {'tau':>10} {'l2':>12} {'ord':>6} {'linf':>12} {'ord':>6}"
    lines.append(header)
    for row in report.rows:
        lines.append(
            f"{row.h:>10.6f} "
            + (f"{row.tau:>10.6f} " if row.tau is not None else f"{'-':>10} ")
            + f"{row.l2:>12.4e} "
            + (f"{row.l2_order:>6.2f} " if row.l2_order is not None
               else f"{'-':>6} ")
            + f"{row.linf:>12.4e} "
            + (f"{row.linf_order:>6.2f}" if row.linf_order is not None
               else f"{'-':>6}"))
    return "\n".join(lines)
