"""Nine-band sparse assembly and solve over interior nodes.

Interior unknowns are ordered row-major in (i, j), i, j = 1..N-1.  The
stencil equation at a node is

    sum_{k,l} C_{k,l} u_{i+k, j+l} = h^2 F_{i,j},

and neighbor values on the boundary move to the right-hand side with
their Dirichlet data.  The default solver is a sparse direct
factorization; if its residual misses the 1e-12 target an ILU-BiCGStab
fallback runs (relative tolerance 1e-12, at most 10,000 iterations).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grid import GridSpec, ScalarField
from .stencils import StencilField

DIRECT_RESIDUAL_TOL = 1e-12
ITER_TOL = 1e-12
ITER_MAXITER = 10_000


class SolveError(RuntimeError):
    """Singular system or non-convergent iteration."""


@dataclass(frozen=True)
class NineBandSystem:
    """CSR system over the (N-1)^2 interior nodes with folded boundary."""

    grid: GridSpec
    matrix: sp.csr_matrix
    rhs: np.ndarray
    boundary: np.ndarray  # full-grid array with boundary values filled

    @property
    def n_interior(self) -> int:
        return (self.grid.n_cells - 1) ** 2


@dataclass(frozen=True)
class SolveStats:
    method: str
    residual: float
    elapsed: float


def assemble(stencils: StencilField, g: np.ndarray, h: float) -> NineBandSystem:
    """Assemble the interior system with boundary data g.

    g is a full-grid (N+1, N+1) array; only its boundary ring is read.
    """
    grid = stencils.grid
    n = grid.n_cells
    ni = n - 1
    if g.shape != (n + 1, n + 1):
        raise SolveError(f"boundary array shape {g.shape} != {(n + 1, n + 1)}")

    idx = np.arange(ni * ni).reshape(ni, ni)
    rows, cols, vals = [], [], []
    rhs = (h * h) * stencils.F.reshape(-1).copy()

    inner_i, inner_j = np.meshgrid(np.arange(1, n), np.arange(1, n),
                                   indexing="ij")
    for k in (-1, 0, 1):
        for l in (-1, 0, 1):
            w = stencils.C[:, :, k + 1, l + 1]
            ti, tj = inner_i + k, inner_j + l
            interior = (ti >= 1) & (ti <= ni) & (tj >= 1) & (tj <= ni)
            src = idx[inner_i[interior] - 1, inner_j[interior] - 1]
            dst = idx[ti[interior] - 1, tj[interior] - 1]
            rows.append(src)
            cols.append(dst)
            vals.append(w[interior])
            edge = ~interior
            if np.any(edge):
                src_e = idx[inner_i[edge] - 1, inner_j[edge] - 1]
                contrib = w[edge] * g[ti[edge], tj[edge]]
                np.subtract.at(rhs, src_e, contrib)

    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(ni * ni, ni * ni)).tocsr()
    if np.any(mat.diagonal() == 0.0):
        raise SolveError("assembled system has a zero diagonal entry")

    bvals = np.zeros((n + 1, n + 1))
    for sl in (np.s_[0, :], np.s_[-1, :], np.s_[:, 0], np.s_[:, -1]):
        bvals[sl] = g[sl]
    return NineBandSystem(grid=grid, matrix=mat, rhs=rhs, boundary=bvals)


def solve(system: NineBandSystem) -> tuple[ScalarField, SolveStats]:
    """Solve and scatter back to a full field with boundary values set."""
    mat, rhs = system.matrix, system.rhs
    bnorm = np.linalg.norm(rhs)
    scale = bnorm if bnorm > 0 else 1.0
    t0 = time.perf_counter()
    stats = None
    try:
        lu = spla.splu(mat.tocsc())
        x = lu.solve(rhs)
        res = np.linalg.norm(mat @ x - rhs) / scale
        if np.isfinite(res) and res <= DIRECT_RESIDUAL_TOL:
            stats = SolveStats("direct", float(res),
                               time.perf_counter() - t0)
    except RuntimeError as exc:  # singular factorization
        if "singular" not in str(exc).lower():
            raise
        x = None

    if stats is None:
        try:
            ilu = spla.spilu(mat.tocsc(), drop_tol=1e-8, fill_factor=20)
            precond = spla.LinearOperator(mat.shape, ilu.solve)
        except RuntimeError as exc:
            raise SolveError(f"factorization failed: {exc}") from exc
        x0 = x if x is not None else np.zeros_like(rhs)
        x, info = spla.bicgstab(mat, rhs, x0=x0, rtol=ITER_TOL, atol=0.0,
                                maxiter=ITER_MAXITER, M=precond)
        res = np.linalg.norm(mat @ x - rhs) / scale
        if info != 0 or not np.isfinite(res):
            raise SolveError(
                f"iterative fallback failed (info={info}, residual={res:.3e})")
        stats = SolveStats("bicgstab", float(res), time.perf_counter() - t0)

    n = system.grid.n_cells
    full = system.boundary.copy()
    full[1:-1, 1:-1] = x.reshape(n - 1, n - 1)
    return ScalarField(system.grid, full), stats
