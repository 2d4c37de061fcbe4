"""Compact 9-point stencils: closed forms and reduced-pollution derivation.

Four variants produce the nine weights C_{k,l} and right-hand side F at a
node:

* general4 / special4 - the printed fourth-order coefficient blocks for
  the steady problem (the special block requires a = b at the node).
* reduced_elliptic / reduced_helmholtz - weights C_{k,l} = sum_p c_{k,l,p} h^p
  derived per node by matching h-power coefficients of

      I_{7,m,n} = sum_{k,l} C_{k,l} G_{7,m,n}(k h, l h)

  for all (m,n) with m in {0,1}, m+n <= 7 and powers h^0..h^7.  All
  targets are zero except the pollution slots: the h^6 coefficient for
  (1,3) equals (a^(0,1) - b^(1,0))/90, and in helmholtz mode the h^7
  coefficients for (1,3), (1,4), (0,5) absorb the printed correction term
  (with the free variable c_{1,1,1} = 0).  The h^0 weights are pinned to
  the sign-condition constants (1/6 corners, 2/3 edges, -10/3 center) and
  the published free variables are pinned to zero, which makes the
  solution unique; the least-squares residual of the matching system is
  recorded per node and must stay below 1e-9 relative to the largest
  matrix entry.

F for the derived variants keeps the powers <= 5 of
h^-2 sum_{m+n<=5} psi^(m,n) sum_{k,l} C_{k,l} H_{7,m,n}(k h, l h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coefficients import CoefficientTables, PointCoefficients
from .grid import GridSpec
from .taylor import (
    KL,
    L1_INDEX,
    LAMBDA_PSI,
    M_ORDER,
    PSI_INDEX,
    reduction_rows,
    taylor_tables_batch,
)

VARIANTS = ("general4", "special4", "reduced_elliptic", "reduced_helmholtz")

KL_INDEX = {kl: i for i, kl in enumerate(KL)}

# h^0 weights shared by every variant (the M-matrix limit constants).
PIN0 = np.array([1 / 6 if k * l != 0 else (-10 / 3 if k == l == 0 else 2 / 3)
                 for k, l in KL])

# Free variables pinned to zero in the derived variants, kl -> powers.
_FREE_STEADY = {
    (-1, 0): (7,), (-1, 1): (6, 7), (0, -1): (7,), (0, 0): (6, 7),
    (0, 1): (5, 6, 7), (1, -1): (5, 6, 7), (1, 0): (4, 5, 6, 7),
    (1, 1): (2, 3, 4, 5, 6, 7),
}
_FREE_HELMHOLTZ = {**_FREE_STEADY, (1, 1): (1, 2, 3, 4, 5, 6, 7)}

MATCH_TOL = 1e-9  # relative residual ceiling for a trusted derivation

SPECIAL_AB_TOL = 1e-12  # |a - b| gate for the special block


class StencilError(ValueError):
    """Variant misuse or a matching system that failed to close."""


@dataclass(frozen=True)
class StencilWeights:
    """Nine weights and right-hand side at one node."""

    C: np.ndarray          # (3, 3), C[k+1, l+1]
    F: float
    variant: str
    match_residual: Optional[float] = None
    cklp: Optional[np.ndarray] = None  # (9, 8) for derived variants

    def center(self) -> float:
        return float(self.C[1, 1])

    def weight(self, k: int, l: int) -> float:
        return float(self.C[k + 1, l + 1])


@dataclass(frozen=True)
class StencilField:
    """Stencils at every interior node of a grid, (i, j) zero-based from 1."""

    grid: GridSpec
    variant: str
    C: np.ndarray                     # (N-1, N-1, 3, 3)
    F: np.ndarray                     # (N-1, N-1)
    match_residual: Optional[np.ndarray] = None
    cklp: Optional[np.ndarray] = None  # (N-1, N-1, 9, 8)

    def at(self, i: int, j: int) -> StencilWeights:
        res = None if self.match_residual is None else float(
            self.match_residual[i - 1, j - 1])
        ck = None if self.cklp is None else self.cklp[i - 1, j - 1]
        return StencilWeights(C=self.C[i - 1, j - 1], F=float(self.F[i - 1, j - 1]),
                              variant=self.variant, match_residual=res, cklp=ck)


# ---------------------------------------------------------------------------
# Closed-form blocks (fourth order, steady)
# ---------------------------------------------------------------------------

def _general_arrays(t: dict, psi: dict, h: float):
    a, b = t[("a", 0, 0)], t[("b", 0, 0)]
    a10, a01 = t[("a", 1, 0)], t[("a", 0, 1)]
    b10, b01 = t[("b", 1, 0)], t[("b", 0, 1)]
    lap_a = t[("a", 2, 0)] + t[("a", 0, 2)]
    lap_b = t[("b", 2, 0)] + t[("b", 0, 2)]
    r1, r2, r3 = a + b, a01 + a10, b10 - b01
    r4, r5 = a01 + b10, a - b
    r6, r7 = a01 - a10, b10 + b01
    lap_r1 = lap_a + lap_b
    h2, h3 = h * h, h**3

    C = {}
    C[(-1, -1)] = 1 / 6 - r1 * h / 12 + (r3 * a - (2 * a01 + a10) * b + lap_r1) * h3 / 24
    C[(-1, 0)] = 2 / 3 - a * h / 3 + (a * a + a * b + r2 + r3) * h2 / 12 \
        + (r2 * b - r3 * a - lap_r1) * h3 / 12
    C[(-1, 1)] = 1 / 6 - r5 * h / 12 - (a * b + r4) * h2 / 12 \
        + (a * b10 - r2 * b + lap_b) * h3 / 24
    C[(0, -1)] = 2 / 3 - b * h / 3 + (a * b + b * b + r6 + r7) * h2 / 12 \
        + (r2 * b - r3 * a - lap_r1) * h3 / 12
    C[(0, 0)] = -10 / 3 - (a * a + a * b + b * b + r4) * h2 / 6 \
        + (r3 * a - r2 * b + lap_r1) * h3 / 12
    C[(0, 1)] = 2 / 3 + b * h / 3 + (a * b + b * b + r6 + r7) * h2 / 12
    C[(1, -1)] = 1 / 6 + r5 * h / 12 - (a * b + r4) * h2 / 12 \
        + (lap_a - a * b01) * h3 / 24
    C[(1, 0)] = 2 / 3 + a * h / 3 + (a * a + a * b + r2 + r3) * h2 / 12
    C[(1, 1)] = 1 / 6 + r1 * h / 12 + a01 * b * h3 / 24

    p, p10, p01 = psi[(0, 0)], psi[(1, 0)], psi[(0, 1)]
    lap_p = psi[(2, 0)] + psi[(0, 2)]
    F = p - ((a10 + b01) * p - a * p10 - b * p01 - lap_p) * h2 / 12
    return C, F


def _special_arrays(t: dict, psi: dict, h: float):
    a = t[("a", 0, 0)]
    a10, a01 = t[("a", 1, 0)], t[("a", 0, 1)]
    lap_a = t[("a", 2, 0)] + t[("a", 0, 2)]
    h2, h3 = h * h, h**3

    C = {}
    C[(-1, -1)] = 1 / 6 - a * h / 6 + lap_a * h3 / 12
    C[(-1, 0)] = 2 / 3 - a * h / 3 + (a * a + a10) * h2 / 6 - lap_a * h3 / 6
    C[(-1, 1)] = 1 / 6 - (a * a + a01 + a10) * h2 / 12 + lap_a * h3 / 24
    C[(0, -1)] = 2 / 3 - a * h / 3 + (a * a + a01) * h2 / 6 - lap_a * h3 / 6
    C[(0, 0)] = -10 / 3 - (3 * a * a + a01 + a10) * h2 / 6 + lap_a * h3 / 6
    C[(0, 1)] = 2 / 3 + a * h / 3 + (a * a + a01) * h2 / 6
    C[(1, -1)] = C[(-1, 1)]
    C[(1, 0)] = 2 / 3 + a * h / 3 + (a * a + a10) * h2 / 6
    C[(1, 1)] = 1 / 6 + a * h / 6

    p, p10, p01 = psi[(0, 0)], psi[(1, 0)], psi[(0, 1)]
    lap_p = psi[(2, 0)] + psi[(0, 2)]
    F = p - ((a10 + a01) * p - a * p10 - a * p01 - lap_p) * h2 / 12
    return C, F


def _pc_dicts(pc: PointCoefficients):
    t = {}
    for name in ("a", "b"):
        for key, val in getattr(pc, name).items():
            t[(name, *key)] = val
    return t, dict(pc.psi)


def closed_form_general(pc: PointCoefficients, h: float) -> StencilWeights:
    """Printed fourth-order block for Lap(u) + a u_x + b u_y = psi."""
    if pc.mode != "steady":
        raise StencilError("closed-form blocks apply to the steady mode only")
    t, psi = _pc_dicts(pc)
    C, F = _general_arrays(t, psi, h)
    mat = np.array([[C[(k, l)] for l in (-1, 0, 1)] for k in (-1, 0, 1)])
    return StencilWeights(C=mat, F=float(F), variant="general4")


def closed_form_special(pc: PointCoefficients, h: float) -> StencilWeights:
    """Printed block for a = b; rejects nodes where they differ."""
    if pc.mode != "steady":
        raise StencilError("closed-form blocks apply to the steady mode only")
    gap = abs(pc.a[(0, 0)] - pc.b[(0, 0)])
    if gap > SPECIAL_AB_TOL:
        raise StencilError(
            f"special block needs a = b; |a - b| = {gap:.3e} at this node")
    t, psi = _pc_dicts(pc)
    C, F = _special_arrays(t, psi, h)
    mat = np.array([[C[(k, l)] for l in (-1, 0, 1)] for k in (-1, 0, 1)])
    return StencilWeights(C=mat, F=float(F), variant="special4")


# ---------------------------------------------------------------------------
# Reduced-pollution derivation (least-squares matching per node)
# ---------------------------------------------------------------------------

def _matching_structure(mode: str):
    """Equation/column index maps shared by every node of a mode."""
    free = _FREE_STEADY if mode == "steady" else _FREE_HELMHOLTZ
    cols = [(ki, p) for ki, kl in enumerate(KL) for p in range(1, M_ORDER + 1)
            if p not in free.get(kl, ())]
    # G_{7,m,n} has no h-power below m+n, so equations with s < m+n are
    # identically 0 = 0 and are dropped.
    eqs = [(mi, s) for (m, n), mi in L1_INDEX.items()
           for s in range(m + n, M_ORDER + 1)]
    # Flat gather indices into g.reshape(B, 15*9*8); -1 marks a zero entry.
    gather = np.full((len(eqs), len(cols)), -1, dtype=np.int64)
    for e, (mi, s) in enumerate(eqs):
        for u, (ki, p) in enumerate(cols):
            w = s - p
            if 0 <= w <= M_ORDER:
                gather[e, u] = (mi * 9 + ki) * (M_ORDER + 1) + w
    return cols, eqs, gather


_STRUCTURE_CACHE: dict = {}


def _structure(mode: str):
    if mode not in _STRUCTURE_CACHE:
        _STRUCTURE_CACHE[mode] = _matching_structure(mode)
    return _STRUCTURE_CACHE[mode]


def _targets(mode: str, a: dict, b: dict, c: Optional[dict],
             bsz: int) -> np.ndarray:
    T = np.zeros((bsz, len(L1_INDEX), M_ORDER + 1))
    a01, b10 = a[(0, 1)], b[(1, 0)]
    T[:, L1_INDEX[(1, 3)], 6] = (a01 - b10) / 90.0
    if mode == "helmholtz":
        a0, b0, c0 = a[(0, 0)], b[(0, 0)], c[(0, 0)]
        c10, c01 = c[(1, 0)], c[(0, 1)]
        zeta13 = (10.0 * a0 * (6.0 * b0 * c0 - 21.0 * (a01 - b10) - 8.0 * c01)
                  - 210.0 * (a01 - b10 + c10) * b0
                  - (49.0 * a01 + 91.0 * b10) * c0) / 37800.0
        zeta14 = -(a0 * c0 + 14.0 * c10) / 7560.0
        zeta05 = (b0 * c0 - c01) / 540.0
        T[:, L1_INDEX[(1, 3)], 7] = zeta13
        T[:, L1_INDEX[(1, 4)], 7] = zeta14
        T[:, L1_INDEX[(0, 5)], 7] = zeta05
    return T


def _match_solve(g: np.ndarray, T: np.ndarray, mode: str):
    """Solve the pinned matching system for a batch of nodes.

    Returns (cklp, rel_residual): cklp is (B, 9, 8) with pinned values
    filled in; rel_residual is the max equation defect over the matrix
    magnitude, per node.
    """
    cols, eqs, gather = _structure(mode)
    bsz = g.shape[0]
    gflat = g.reshape(bsz, -1)
    # ascontiguousarray keeps the batched BLAS fast path in play below.
    A = np.ascontiguousarray(
        np.where(gather[None, :, :] >= 0,
                 gflat[:, np.clip(gather, 0, None)], 0.0))
    pinned = np.einsum("bmks,k->bms", g, PIN0)
    eq_mi = np.array([mi for mi, _ in eqs])
    eq_s = np.array([s for _, s in eqs])
    rhs = (T - pinned)[:, eq_mi, eq_s]

    scale = np.sqrt(np.einsum("beu,beu->bu", A, A))
    scale = np.where(scale > 0, scale, 1.0)
    As = np.ascontiguousarray(A / scale[:, None, :])
    At = As.transpose(0, 2, 1)
    gram = At @ As
    x = None
    try:
        x = np.linalg.solve(gram, (At @ rhs[:, :, None]))
        # The Gram matrix squares the conditioning, so a few rounds of
        # iterative refinement are needed to push the defect to roundoff;
        # the residual check below catches anything left over.
        for _ in range(3):
            res = rhs[:, :, None] - As @ x
            x = x + np.linalg.solve(gram, At @ res)
    except np.linalg.LinAlgError:
        pass

    amax = np.maximum(np.abs(A).max(axis=(1, 2)), 1e-300)
    if x is None:
        rel = np.full(bsz, np.inf)
        xs = np.zeros((bsz, len(cols)))
    else:
        xs = x[:, :, 0] / scale
        defect = np.abs(np.einsum("beu,bu->be", A, xs) - rhs).max(axis=1)
        rel = defect / amax

    bad = np.flatnonzero(rel > 1e-10)
    for nb in bad:
        sol, *_ = np.linalg.lstsq(A[nb], rhs[nb], rcond=None)
        d = np.abs(A[nb] @ sol - rhs[nb]).max() / amax[nb]
        if d < rel[nb]:
            xs[nb], rel[nb] = sol, d

    cklp = np.zeros((bsz, 9, M_ORDER + 1))
    cklp[:, :, 0] = PIN0[None, :]
    for u, (ki, p) in enumerate(cols):
        cklp[:, ki, p] = xs[:, u]
    return cklp, rel


def _rhs_batch(cklp: np.ndarray, hh: np.ndarray, psi: dict,
               h: float) -> np.ndarray:
    """F values from the derived weights and the H tables."""
    bsz = cklp.shape[0]
    J = np.zeros((bsz, len(LAMBDA_PSI), M_ORDER + 1))
    for w in range(M_ORDER + 1):
        for p in range(w + 1):
            J[:, :, w] += np.einsum("bk,bmk->bm", cklp[:, :, p],
                                    hh[:, :, :, w - p])
    F = np.zeros(bsz)
    hpow = np.array([h**(w - 2) if w >= 2 else 0.0
                     for w in range(M_ORDER + 1)])
    for (m, n), mi in PSI_INDEX.items():
        F += psi[(m, n)] * (J[:, mi, :] @ hpow)
    return F


def derive_reduced_batch(a: dict, b: dict, c: Optional[dict], psi: dict,
                         h: float, keep_cklp: bool = False):
    """Derived stencils for a batch of nodes given coefficient arrays.

    a, b, c map (m,n) -> (B,) arrays; psi maps (m,n) -> (B,) arrays for
    m+n <= 5.  Returns (C (B,3,3), F (B,), residual (B,), cklp or None).
    """
    mode = "steady" if c is None else "helmholtz"
    rows = reduction_rows(a, b, c)
    tabs = taylor_tables_batch(a, b, c, rows=rows)
    T = _targets(mode, a, b, c, tabs.g.shape[0])
    cklp, rel = _match_solve(tabs.g, T, mode)
    hpow = h ** np.arange(M_ORDER + 1)
    C = (cklp * hpow[None, None, :]).sum(axis=2).reshape(-1, 3, 3)
    F = _rhs_batch(cklp, tabs.h, psi, h)
    return C, F, rel, (cklp if keep_cklp else None)


def derive_reduced(pc: PointCoefficients, h: float) -> StencilWeights:
    """Reduced-pollution stencil at one node."""
    mode = pc.mode
    a = {k: np.asarray([v], dtype=float) for k, v in pc.a.items()}
    b = {k: np.asarray([v], dtype=float) for k, v in pc.b.items()}
    c = None
    if mode == "helmholtz":
        if pc.c is None:
            raise StencilError("helmholtz stencil needs c coefficients")
        c = {k: np.asarray([v], dtype=float) for k, v in pc.c.items()}
    psi = {k: np.asarray([v], dtype=float) for k, v in pc.psi.items()}
    C, F, rel, cklp = derive_reduced_batch(a, b, c, psi, h, keep_cklp=True)
    if rel[0] > MATCH_TOL:
        raise StencilError(
            f"stencil derivation failed at node: relative residual "
            f"{rel[0]:.3e} > {MATCH_TOL:.0e}")
    variant = "reduced_elliptic" if mode == "steady" else "reduced_helmholtz"
    return StencilWeights(C=C[0], F=float(F[0]), variant=variant,
                          match_residual=float(rel[0]), cklp=cklp[0])


def rhs_value(pc: PointCoefficients, cklp: np.ndarray) -> float:
    """F at one node from a derived c_{k,l,p} table (degree <= 5 rule)."""
    a = {k: np.asarray([v], dtype=float) for k, v in pc.a.items()}
    b = {k: np.asarray([v], dtype=float) for k, v in pc.b.items()}
    c = None
    if pc.mode == "helmholtz":
        c = {k: np.asarray([v], dtype=float) for k, v in pc.c.items()}
    tabs = taylor_tables_batch(a, b, c)
    psi = {k: np.asarray([v], dtype=float) for k, v in pc.psi.items()}
    F = _rhs_batch(np.asarray(cklp, dtype=float)[None], tabs.h, psi, pc.h)
    return float(F[0])


# ---------------------------------------------------------------------------
# Whole-grid builders
# ---------------------------------------------------------------------------

def _interior_dicts(tables: CoefficientTables):
    a = tables.interior_arrays("a")
    b = tables.interior_arrays("b")
    c = tables.interior_arrays("c") if tables.mode == "helmholtz" else None
    psi = tables.interior_arrays("psi")
    return a, b, c, psi


def build_stencils(tables: CoefficientTables, variant: str,
                   keep_cklp: bool = False,
                   chunk: int = 4096) -> StencilField:
    """Stencils at every interior node for the requested variant."""
    if variant not in VARIANTS:
        raise StencilError(f"unknown variant {variant!r}; pick from {VARIANTS}")
    steady_variant = variant in ("general4", "special4", "reduced_elliptic")
    if steady_variant and tables.mode != "steady":
        raise StencilError(f"{variant} requires steady coefficients")
    if variant == "reduced_helmholtz" and tables.mode != "helmholtz":
        raise StencilError("reduced_helmholtz requires helmholtz coefficients")

    grid = tables.grid
    h = grid.h
    ni = grid.n_cells - 1
    a, b, c, psi = _interior_dicts(tables)

    if variant in ("general4", "special4"):
        t = {("a", m, n): arr for (m, n), arr in a.items()}
        t.update({("b", m, n): arr for (m, n), arr in b.items()})
        if variant == "special4":
            gap = np.abs(a[(0, 0)] - b[(0, 0)]).max()
            if gap > SPECIAL_AB_TOL:
                raise StencilError(
                    f"special block needs a = b, max |a - b| = {gap:.3e}")
            Cd, F = _special_arrays(t, psi, h)
        else:
            Cd, F = _general_arrays(t, psi, h)
        C = np.empty((ni * ni, 3, 3))
        for (k, l), arr in Cd.items():
            C[:, k + 1, l + 1] = arr
        return StencilField(grid=grid, variant=variant,
                            C=C.reshape(ni, ni, 3, 3),
                            F=np.asarray(F).reshape(ni, ni))

    n_nodes = ni * ni
    C = np.empty((n_nodes, 3, 3))
    F = np.empty(n_nodes)
    rel = np.empty(n_nodes)
    cklp = np.empty((n_nodes, 9, M_ORDER + 1)) if keep_cklp else None
    for lo in range(0, n_nodes, chunk):
        hi = min(lo + chunk, n_nodes)
        sl = slice(lo, hi)
        a_c = {k: v[sl] for k, v in a.items()}
        b_c = {k: v[sl] for k, v in b.items()}
        c_c = None if c is None else {k: v[sl] for k, v in c.items()}
        p_c = {k: v[sl] for k, v in psi.items()}
        Cc, Fc, rc, kc = derive_reduced_batch(a_c, b_c, c_c, p_c, h,
                                              keep_cklp=keep_cklp)
        C[sl], F[sl], rel[sl] = Cc, Fc, rc
        if keep_cklp:
            cklp[sl] = kc
    if rel.max() > MATCH_TOL:
        flat = int(np.argmax(rel))
        i, j = divmod(flat, ni)
        raise StencilError(
            f"stencil derivation failed at node ({i + 1}, {j + 1}): "
            f"relative residual {rel.max():.3e} > {MATCH_TOL:.0e}")
    return StencilField(
        grid=grid, variant=variant, C=C.reshape(ni, ni, 3, 3),
        F=F.reshape(ni, ni), match_residual=rel.reshape(ni, ni),
        cklp=None if cklp is None else cklp.reshape(ni, ni, 9, M_ORDER + 1))


# ---------------------------------------------------------------------------
# M-matrix diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MMatrixReport:
    passed: bool
    n_checked: int
    violations: tuple  # ((i, j, reason), ...)

    def __bool__(self):
        return self.passed


def mmatrix_report(stencils: StencilField, tol: float = 1e-14) -> MMatrixReport:
    """Sign and row-sum conditions of the negated stencil field.

    For -C the center must be positive, the eight neighbors <= tol, and
    the row sum >= -tol; satisfied stencils generate an M-matrix and the
    discrete maximum principle holds.
    """
    C = stencils.C
    ni = C.shape[0]
    viol = []
    center_bad = -(C[:, :, 1, 1]) <= 0.0
    neigh = -C.copy()
    neigh[:, :, 1, 1] = -np.inf  # exclude the center from the sign check
    neigh_bad = neigh.max(axis=(2, 3)) > tol
    rowsum_bad = -(C.sum(axis=(2, 3))) < -tol
    for name, bad in (("center", center_bad), ("sign", neigh_bad),
                      ("rowsum", rowsum_bad)):
        for i, j in np.argwhere(bad):
            viol.append((int(i + 1), int(j + 1), name))
    return MMatrixReport(passed=not viol, n_checked=ni * ni,
                         violations=tuple(sorted(viol)))


# ---------------------------------------------------------------------------
# Stencil dump (consumed by the symbolic cross-check tool)
# ---------------------------------------------------------------------------

def _coeff_json(arrays: dict, flat_index: int) -> dict:
    return {f"{m},{n}": float(arr[flat_index])
            for (m, n), arr in sorted(arrays.items())}


def stencil_dump(tables: CoefficientTables, stencils: StencilField,
                 n_samples: int = 20) -> dict:
    """JSON-ready dump of sampled derived stencils.

    Schema: {"mode", "h", "records": [{"node": [i, j],
    "coeffs": {"a": {"m,n": value, ...}, "b": ..., "c": ...},
    "c_klp": 9x8 nested lists (rows in row-major (k,l) order, columns
    p = 0..7), "residual": float}]}.
    """
    if stencils.cklp is None:
        raise StencilError("dump needs a stencil field built with keep_cklp")
    ni = stencils.C.shape[0]
    a, b, c, _ = _interior_dicts(tables)
    total = ni * ni
    count = min(n_samples, total)
    picks = np.unique(np.linspace(0, total - 1, count).astype(int))
    records = []
    for flat in picks:
        i, j = divmod(int(flat), ni)
        coeffs = {"a": _coeff_json(a, flat), "b": _coeff_json(b, flat)}
        if c is not None:
            coeffs["c"] = _coeff_json(c, flat)
        records.append({
            "node": [i + 1, j + 1],
            "coeffs": coeffs,
            "c_klp": stencils.cklp[i, j].tolist(),
            "residual": float(stencils.match_residual[i, j]),
        })
    return {"mode": tables.mode, "h": tables.h, "records": records}
