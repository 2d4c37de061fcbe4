"""Coefficient fields of the linearized convection-diffusion problem.

The Picard-linearized steady problem is

    Lap(u) + a u_x + b u_y = psi,
    a = (kappa_x - alpha_u(u_k))/kappa,  b = (kappa_y - beta_u(u_k))/kappa,
    psi = -f/kappa,

with u_k the current iterate.  The Crank-Nicolson / BDF3 / BDF4 steps all
reduce to the same zeroth-order ("helmholtz") form

    Lap(u) + a u_x + b u_y + d u = psi,    d = c/h,

with scheme-specific constants (tau = r h):

    CN:    c = -2/(r kappa),      phi = -2 u^n / (r kappa)
    BDF3:  c = -11/(6 r kappa),   phi = -(3 u^{n+2} - 3/2 u^{n+1}
                                          + 1/3 u^n) / (r kappa)
    BDF4:  c = -25/(12 r kappa),  phi = -(4 u^{n+3} - 3 u^{n+2}
                                          + 4/3 u^{n+1} - 1/4 u^n) / (r kappa)

and psi = -f/kappa + phi/h stored as a single grid field at the node
spacing h (the 1/h factor is a plain number once h is fixed).

Derivatives split by data provenance, following the scheme's own usage:
the u-dependent composites alpha_u(u_k)/kappa, beta_u(u_k)/kappa and the
history term (u-history)/kappa exist only as grid data and are
differenced by the boundary-aware formulas of the fd module; kappa and f
are available callables, so their derivative tables default to a
high-order sampling path (13-point centered stencils on a padded
coordinate set, formal accuracy at least O(h^8)) that stands in for
analytic derivatives.  Passing exact_data=False differences everything
on the grid instead, for callables that cannot be evaluated outside the
closed square.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cases import ManufacturedCase, fd_weights
from .fd import DerivativeTable, axis_derivative, derivative_table
from .grid import GridSpec, ScalarField, sample_scalar
from .taylor import MAX_COEFF_ORDER, MAX_PSI_ORDER


class CoefficientError(ValueError):
    """Non-positive diffusion, bad time-step ratio, or grid mismatch."""


# ---------------------------------------------------------------------------
# High-order derivative tables of available (callable) data
# ---------------------------------------------------------------------------

_HO_PAD = 6
_HO_OFFS = np.arange(-_HO_PAD, _HO_PAD + 1)  # 13-point centered stencils
_HO_WEIGHTS = {order: fd_weights(_HO_OFFS, order) for order in range(1, 6)}


def _sample_extended(fn, grid: GridSpec, t: float, pad: int) -> np.ndarray:
    coords = np.arange(-pad, grid.n_cells + pad + 1) * grid.h
    X, Y = np.meshgrid(coords, coords, indexing="ij")
    vals = np.broadcast_to(np.asarray(fn(X, Y, t), dtype=float), X.shape)
    if not np.all(np.isfinite(vals)):
        raise CoefficientError(
            "available-function sampling hit a non-finite value outside the "
            "unit square; rerun with exact_data=False")
    return np.array(vals)


def _convolve_axis(ext: np.ndarray, order: int, h: float, axis: int
                   ) -> np.ndarray:
    """Differentiate along one axis, shedding the stencil reach per side."""
    n_keep = ext.shape[axis] - 2 * _HO_PAD
    shape = list(ext.shape)
    shape[axis] = n_keep
    out = np.zeros(shape)
    ctr = [slice(None)] * ext.ndim
    ctr[axis] = slice(_HO_PAD, _HO_PAD + n_keep)
    base = ext[tuple(ctr)]
    # Difference against the center value so constants come out exactly
    # zero despite the weights' floating-point row-sum noise.
    for off, w in zip(_HO_OFFS, _HO_WEIGHTS[order]):
        lo = _HO_PAD + off
        sl = [slice(None)] * ext.ndim
        sl[axis] = slice(lo, lo + n_keep)
        out += w * (ext[tuple(sl)] - base)
    return out / h**order


def _table_from_extended(ext: np.ndarray, grid: GridSpec,
                         max_order: int) -> DerivativeTable:
    """Derivative table from values padded by _HO_PAD on both axes."""
    h, pad = grid.h, _HO_PAD
    entries = {}
    for m in range(0, max_order + 1):
        xd = ext if m == 0 else _convolve_axis(ext, m, h, axis=0)
        # xd keeps the y-pad; x-pad is gone for m >= 1.
        xin = xd[pad:-pad] if m == 0 else xd
        entries[(m, 0)] = ScalarField(grid, xin[:, pad:-pad])
        for n in range(1, max_order - m + 1):
            entries[(m, n)] = ScalarField(grid, _convolve_axis(xin, n, h,
                                                               axis=1))
    return DerivativeTable(entries[(0, 0)], entries)


def available_table(fn, grid: GridSpec, t: float,
                    max_order: int) -> DerivativeTable:
    """Derivative table of an available function via 13-point stencils.

    Evaluates fn up to 6h outside the closed square; every entry carries
    formal accuracy O(h^(13-order)), so these tables behave like analytic
    derivatives next to the scheme's h^4 resolution.
    """
    ext = _sample_extended(fn, grid, t, _HO_PAD)
    return _table_from_extended(ext, grid, max_order)


def _kappa_ratio_extended(case, grid: GridSpec, t: float, axis: int
                          ) -> np.ndarray:
    """kappa_x/kappa (axis 0) or kappa_y/kappa on the padded node set."""
    h, pad = grid.h, _HO_PAD
    ext2 = _sample_extended(case.kappa, grid, t, 2 * pad)
    grad = _convolve_axis(ext2, 1, h, axis=axis)
    keep = slice(pad, -pad)
    grad = grad[:, keep] if axis == 0 else grad[keep, :]
    kap = ext2[keep, keep]
    if kap.min() <= 0.0:
        raise CoefficientError("kappa <= 0 on the padded sample")
    return grad / kap


def _table_diff(plus: DerivativeTable, minus: DerivativeTable,
                grid: GridSpec) -> DerivativeTable:
    entries = {k: ScalarField(grid, plus[k].values - minus[k].values)
               for k in plus.keys()}
    return DerivativeTable(entries[(0, 0)], entries)


def _table_axpy(base: DerivativeTable, scale: float,
                other: DerivativeTable, grid: GridSpec) -> DerivativeTable:
    entries = {k: ScalarField(grid, base[k].values + scale * other[k].values)
               for k in base.keys()}
    return DerivativeTable(entries[(0, 0)], entries)


@dataclass(frozen=True)
class PointCoefficients:
    """All coefficient derivatives at one grid node.

    a, b hold (m,n) -> value for m+n <= 4; c likewise (helmholtz only);
    psi for m+n <= 5.  Extraction from CoefficientTables is lossless.
    """

    a: dict
    b: dict
    c: Optional[dict]
    psi: dict
    h: float
    mode: str


@dataclass(frozen=True)
class CoefficientTables:
    """Derivative tables of a, b (and c) to order 4 and psi to order 5."""

    grid: GridSpec
    mode: str  # "steady" | "helmholtz"
    a_table: DerivativeTable
    b_table: DerivativeTable
    c_table: Optional[DerivativeTable]
    psi_table: DerivativeTable
    r: Optional[float] = None

    @property
    def h(self) -> float:
        return self.grid.h

    def point(self, i: int, j: int) -> PointCoefficients:
        a = {k: self.a_table.value(*k, i, j) for k in self.a_table.keys()}
        b = {k: self.b_table.value(*k, i, j) for k in self.b_table.keys()}
        c = None
        if self.c_table is not None:
            c = {k: self.c_table.value(*k, i, j) for k in self.c_table.keys()}
        psi = {k: self.psi_table.value(*k, i, j) for k in self.psi_table.keys()}
        return PointCoefficients(a=a, b=b, c=c, psi=psi, h=self.h,
                                 mode=self.mode)

    def interior_arrays(self, table: str) -> dict:
        """(m,n) -> flattened interior-node value arrays for one table."""
        tab = getattr(self, f"{table}_table")
        if tab is None:
            return None
        return {k: tab[k].values[1:-1, 1:-1].reshape(-1)
                for k in tab.keys()}


def _check_kappa(kap: ScalarField) -> None:
    if kap.values.min() <= 0.0:
        i, j = np.argwhere(kap.values <= 0.0)[0]
        raise CoefficientError(
            f"kappa <= 0 at node ({i}, {j}): {kap.values[i, j]:.6g}")


@dataclass(frozen=True)
class StepContext:
    """Iterate-independent pieces of a Picard stage, built once per step.

    Within a time step (or the whole steady solve) the Picard sweeps only
    change the iterate entering a and b; everything built from kappa, f,
    and the solution history is fixed and cached here.
    """

    case: ManufacturedCase
    grid: GridSpec
    mode: str
    kappa_nodal: ScalarField
    ka_table: DerivativeTable       # derivatives of kappa_x / kappa
    kb_table: DerivativeTable       # derivatives of kappa_y / kappa
    psi_table: DerivativeTable
    c_table: Optional[DerivativeTable]
    r: Optional[float]


def _kappa_ratio_tables(case, grid, t, kap, exact_data):
    if exact_data:
        ka = _table_from_extended(_kappa_ratio_extended(case, grid, t, 0),
                                  grid, MAX_COEFF_ORDER)
        kb = _table_from_extended(_kappa_ratio_extended(case, grid, t, 1),
                                  grid, MAX_COEFF_ORDER)
    else:
        kx = axis_derivative(kap, "x", 1).values
        ky = axis_derivative(kap, "y", 1).values
        ka = derivative_table(ScalarField(grid, kx / kap.values),
                              MAX_COEFF_ORDER)
        kb = derivative_table(ScalarField(grid, ky / kap.values),
                              MAX_COEFF_ORDER)
    return ka, kb


def tables_from_context(ctx: StepContext,
                        iterate: ScalarField) -> CoefficientTables:
    """Finish the coefficient tables for one Picard sweep."""
    grid = ctx.grid
    if iterate.grid != grid:
        raise CoefficientError("iterate grid does not match target grid")
    kap = ctx.kappa_nodal.values
    conv_a = ScalarField(grid, ctx.case.flux.alpha_u(iterate.values) / kap)
    conv_b = ScalarField(grid, ctx.case.flux.beta_u(iterate.values) / kap)
    a_table = _table_diff(ctx.ka_table,
                          derivative_table(conv_a, MAX_COEFF_ORDER), grid)
    b_table = _table_diff(ctx.kb_table,
                          derivative_table(conv_b, MAX_COEFF_ORDER), grid)
    return CoefficientTables(grid=grid, mode=ctx.mode, a_table=a_table,
                             b_table=b_table, c_table=ctx.c_table,
                             psi_table=ctx.psi_table, r=ctx.r)


def _psi_available_table(case, grid, t, exact_data) -> DerivativeTable:
    if exact_data and case.psi_deriv is not None:
        entries = {}
        for m in range(MAX_PSI_ORDER + 1):
            for n in range(MAX_PSI_ORDER + 1 - m):
                entries[(m, n)] = sample_scalar(
                    lambda x, y, tt, _m=m, _n=n: case.psi_deriv(_m, _n, x, y, tt),
                    grid, t)
        return DerivativeTable(entries[(0, 0)], entries)
    if exact_data:
        return available_table(
            lambda x, y, tt: -case.source_f(x, y, tt) / case.kappa(x, y, tt),
            grid, t, MAX_PSI_ORDER)
    kap = sample_scalar(case.kappa, grid, t)
    f_vals = sample_scalar(case.source_f, grid, t).values
    return derivative_table(ScalarField(grid, -f_vals / kap.values),
                            MAX_PSI_ORDER)


def steady_context(case: ManufacturedCase, grid: GridSpec, t: float = 0.0,
                   exact_data: bool = True) -> StepContext:
    kap = sample_scalar(case.kappa, grid, t)
    _check_kappa(kap)
    ka, kb = _kappa_ratio_tables(case, grid, t, kap, exact_data)
    return StepContext(case=case, grid=grid, mode="steady", kappa_nodal=kap,
                       ka_table=ka, kb_table=kb,
                       psi_table=_psi_available_table(case, grid, t,
                                                      exact_data),
                       c_table=None, r=None)


def steady_coefficients(case: ManufacturedCase, iterate: ScalarField,
                        t: float = 0.0,
                        exact_data: bool = True) -> CoefficientTables:
    """Coefficient tables for one steady Picard iteration."""
    ctx = steady_context(case, iterate.grid, t, exact_data)
    return tables_from_context(ctx, iterate)


def _helmholtz_context(case, grid, t_eval, r, c_scale,
                       history: ScalarField, exact_data: bool) -> StepContext:
    if r <= 0.0:
        raise CoefficientError(f"time-step ratio r must be positive, got {r}")
    kap = sample_scalar(case.kappa, grid, t_eval)
    _check_kappa(kap)
    ka, kb = _kappa_ratio_tables(case, grid, t_eval, kap, exact_data)
    if exact_data:
        c_table = available_table(
            lambda x, y, tt: -c_scale / (r * case.kappa(x, y, tt)),
            grid, t_eval, MAX_COEFF_ORDER)
    else:
        c_table = derivative_table(
            ScalarField(grid, -c_scale / (r * kap.values)), MAX_COEFF_ORDER)
    phi = ScalarField(grid, -history.values / (r * kap.values))
    phi_table = derivative_table(phi, MAX_PSI_ORDER)
    psi_table = _table_axpy(_psi_available_table(case, grid, t_eval,
                                                 exact_data),
                            1.0 / grid.h, phi_table, grid)
    return StepContext(case=case, grid=grid, mode="helmholtz",
                       kappa_nodal=kap, ka_table=ka, kb_table=kb,
                       psi_table=psi_table, c_table=c_table, r=r)


def cn_context(case: ManufacturedCase, prev: ScalarField, t_mid: float,
               r: float, exact_data: bool = True) -> StepContext:
    hist = ScalarField(prev.grid, 2.0 * prev.values)
    return _helmholtz_context(case, prev.grid, t_mid, r, 2.0, hist,
                              exact_data)


def cn_coefficients(case: ManufacturedCase, prev: ScalarField, t_mid: float,
                    r: float, iterate: Optional[ScalarField] = None,
                    exact_data: bool = True) -> CoefficientTables:
    """Crank-Nicolson midpoint tables; iterate defaults to prev (u^n)."""
    ctx = cn_context(case, prev, t_mid, r, exact_data)
    return tables_from_context(ctx, prev if iterate is None else iterate)


def bdf3_context(case: ManufacturedCase, u_n: ScalarField, u_n1: ScalarField,
                 u_n2: ScalarField, t_new: float, r: float,
                 exact_data: bool = True) -> StepContext:
    hist = ScalarField(u_n.grid,
                       3.0 * u_n2.values - 1.5 * u_n1.values
                       + u_n.values / 3.0)
    return _helmholtz_context(case, u_n.grid, t_new, r, 11.0 / 6.0, hist,
                              exact_data)


def bdf3_coefficients(case: ManufacturedCase, u_n: ScalarField,
                      u_n1: ScalarField, u_n2: ScalarField, t_new: float,
                      r: float, iterate: Optional[ScalarField] = None,
                      exact_data: bool = True) -> CoefficientTables:
    """BDF3 tables at t_{n+3}; iterate defaults to u^{n+2}."""
    ctx = bdf3_context(case, u_n, u_n1, u_n2, t_new, r, exact_data)
    return tables_from_context(ctx, u_n2 if iterate is None else iterate)


def bdf4_context(case: ManufacturedCase, u_n: ScalarField, u_n1: ScalarField,
                 u_n2: ScalarField, u_n3: ScalarField, t_new: float, r: float,
                 exact_data: bool = True) -> StepContext:
    hist = ScalarField(u_n.grid,
                       4.0 * u_n3.values - 3.0 * u_n2.values
                       + (4.0 / 3.0) * u_n1.values - 0.25 * u_n.values)
    return _helmholtz_context(case, u_n.grid, t_new, r, 25.0 / 12.0, hist,
                              exact_data)


def bdf4_coefficients(case: ManufacturedCase, u_n: ScalarField,
                      u_n1: ScalarField, u_n2: ScalarField, u_n3: ScalarField,
                      t_new: float, r: float,
                      iterate: Optional[ScalarField] = None,
                      exact_data: bool = True) -> CoefficientTables:
    """BDF4 tables at t_{n+4}; iterate defaults to u^{n+3}."""
    ctx = bdf4_context(case, u_n, u_n1, u_n2, u_n3, t_new, r, exact_data)
    return tables_from_context(ctx, u_n3 if iterate is None else iterate)
