"""Derivative reduction and Taylor tables for compact stencil derivation.

The linearized problem  Lap(u) + a u_x + b u_y [+ d u] = psi  lets every
partial derivative u^(p,q) with p >= 2 be rewritten in terms of u^(m,n)
with m in {0,1} and source derivatives psi^(m,n):

    u^(m+2,n) = -u^(m,n+2)
                - sum_{i<=m, j<=n} C(m,i) C(n,j) [ a^(m-i,n-j) u^(i+1,j)
                                                 + b^(m-i,n-j) u^(i,j+1)
                                                 + d^(m-i,n-j) u^(i,j) ]
                + psi^(m,n),

applied recursively.  The d-term exists only for the time-stepping
("helmholtz") variant, where d = c/h carries one negative power of the
mesh size, so reduction coefficients are Laurent polynomials in h there;
in the steady variant they are plain reals.

Collecting the rewritten Taylor expansion of u around a node yields, for
working order M = 7,

    u(x_i + x, y_j + y) = sum_{(m,n) in L1_7} u^(m,n) G_{7,m,n}(x,y)
                        + sum_{(m,n) in L_5 } psi^(m,n) H_{7,m,n}(x,y) + O(h^8),

and this module evaluates G and H at the nine offsets (k h, l h),
k,l in {-1,0,1}, as coefficient arrays over powers of h.  Everything is
vectorized over a batch of grid nodes: a coefficient value is an array
over the batch, and a Laurent coefficient is a dict power -> array.

Index sets (M = 7): L_M = {m+n <= M}; L1_M = {m in {0,1}} inside L_M;
L2_M = its complement (p >= 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

M_ORDER = 7

# (m,n) with m in {0,1}, m+n <= 7: the unknown-derivative slots.
LAMBDA1 = tuple((m, n) for m in (0, 1) for n in range(M_ORDER + 1 - m))
# (p,q) with p >= 2, p+q <= 7: the reduced slots, ordered so that every
# row's substitutions are already available (increasing p).
LAMBDA2 = tuple((p, q) for p in range(2, M_ORDER + 1)
                for q in range(M_ORDER + 1 - p))
# (m,n) with m+n <= 5: the source-derivative slots entering F.
LAMBDA_PSI = tuple((m, n) for m in range(6) for n in range(6 - m))

L1_INDEX = {mn: i for i, mn in enumerate(LAMBDA1)}
PSI_INDEX = {mn: i for i, mn in enumerate(LAMBDA_PSI)}

# Nine stencil offsets in row-major (k, l) order; fixed everywhere.
KL = tuple((k, l) for k in (-1, 0, 1) for l in (-1, 0, 1))

# Laurent window for reduction coefficients: up to three d factors occur
# for p+q = 6,7 chains, so powers -3..0 suffice; -4 is guard room.
POW_LO = -4

MAX_COEFF_ORDER = 4   # a, b, c derivative tables reach total order 4
MAX_PSI_ORDER = 5     # psi tables reach total order 5


class ReductionError(ValueError):
    """Laurent window violation or unsupported reduction request."""


def _binom(m, i):
    return math.comb(m, i)


def _add(acc: dict, key, power: int, arr) -> None:
    if power < POW_LO:
        raise ReductionError(f"Laurent power {power} below window for {key}")
    slot = acc.setdefault(key, {})
    if power in slot:
        slot[power] = slot[power] + arr
    else:
        slot[power] = +arr


def _add_scaled(acc: dict, entry: dict, factor, shift: int) -> None:
    for power, arr in entry.items():
        _add_arr = factor * arr
        p = power + shift
        if p < POW_LO:
            raise ReductionError(f"Laurent power {p} below window")
        # inline _add without key: caller supplies slot dict
        if p in acc:
            acc[p] = acc[p] + _add_arr
        else:
            acc[p] = _add_arr


def reduction_rows(a: dict, b: dict, c: Optional[dict]) -> dict:
    """Reduction rows for every (p,q) in L2_7, vectorized over nodes.

    a, b map (m,n) -> value array for m+n <= 4 (missing orders are treated
    as zero; order-5 factors only ever multiply the pinned zeroth-power
    stencil constants in combinations that cancel by parity, so zeros are
    exact there).  c is None for the steady variant; otherwise it maps
    (m,n) -> value array of the zeroth-order coefficient, and the
    reduction consumes d^(m,n) = c^(m,n)/h as power -1 terms.

    Returns {(p,q): {('u', m, n) | ('psi', m, n): {power: array}}}.
    """
    rows: dict = {}
    for p, q in LAMBDA2:
        m, n = p - 2, q
        acc: dict = {}

        def put(key, factor, shift=0):
            """Add factor * u^key (or psi^key), reducing u with m >= 2."""
            kind = key[0]
            if kind == "u" and key[1] >= 2:
                sub = rows[(key[1], key[2])]
                for k2, entry in sub.items():
                    slot = acc.setdefault(k2, {})
                    _add_scaled(slot, entry, factor, shift)
            else:
                _add(acc, key, shift, factor)

        ones = 1.0
        put(("u", m, n + 2), -ones)
        for i in range(m + 1):
            for j in range(n + 1):
                w = float(_binom(m, i) * _binom(n, j))
                da = a.get((m - i, n - j))
                if da is not None:
                    put(("u", i + 1, j), -w * da)
                db = b.get((m - i, n - j))
                if db is not None:
                    put(("u", i, j + 1), -w * db)
                if c is not None:
                    dc = c.get((m - i, n - j))
                    if dc is not None:
                        put(("u", i, j), -w * dc, shift=-1)
        _add(acc, ("psi", m, n), 0, ones)
        rows[(p, q)] = acc
    return rows


@dataclass
class TaylorTables:
    """G and H evaluated at the nine offsets, as h-power coefficients.

    g[node, L1 slot, KL slot, power] holds the coefficient of h^power in
    G_{7,m,n}(k h, l h); powers run 0..7 (higher powers cannot influence
    the h^0..h^7 matching equations and are dropped).  h likewise with
    minimum structural power m+n+2 (>= 2).
    """

    g: np.ndarray  # (B, 15, 9, 8)
    h: np.ndarray  # (B, 21, 9, 8)


def taylor_tables_batch(a: dict, b: dict, c: Optional[dict],
                        rows: Optional[dict] = None) -> TaylorTables:
    """Assemble G/H coefficient arrays for a batch of nodes."""
    if rows is None:
        rows = reduction_rows(a, b, c)
    some = next(iter(a.values()))
    bsz = np.shape(some)[0] if np.ndim(some) else 1

    g = np.zeros((bsz, len(LAMBDA1), 9, M_ORDER + 1))
    hh = np.zeros((bsz, len(LAMBDA_PSI), 9, M_ORDER + 1))

    # Leading monomial of G: x^m y^n / (m! n!) at (k h, l h).
    for (m, n), mi in L1_INDEX.items():
        if m + n <= M_ORDER:
            for ki, (k, l) in enumerate(KL):
                g[:, mi, ki, m + n] += (k**m) * (l**n) / (
                    math.factorial(m) * math.factorial(n))

    for (p, q), row in rows.items():
        mono = np.array([(k**p) * (l**q) for k, l in KL]) / (
            math.factorial(p) * math.factorial(q))
        base = p + q
        for key, entry in row.items():
            kind, m, n = key
            target = g if kind == "u" else hh
            ti = L1_INDEX[(m, n)] if kind == "u" else PSI_INDEX[(m, n)]
            for power, arr in entry.items():
                tp = base + power
                if tp > M_ORDER:
                    continue
                if tp < 0:
                    raise ReductionError(
                        f"negative net h-power {tp} in Taylor table for "
                        f"(p,q)=({p},{q}) -> {key}")
                vals = np.atleast_1d(np.asarray(arr, dtype=float))
                if vals.shape == (1,) and bsz > 1:
                    vals = np.broadcast_to(vals, (bsz,))
                target[:, ti, :, tp] += vals[:, None] * mono[None, :]
    return TaylorTables(g=g, h=hh)


# ---------------------------------------------------------------------------
# Per-node views used by the public stencil API and by tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HPolynomial:
    """Sparse polynomial in h with integer powers (Laurent near zero).

    Powers live in the guard window -4..10; anything outside raises, since
    the derivation never produces such terms and their appearance would
    mean a bug upstream.
    """

    coeffs: tuple  # ((power, value), ...) sorted by power

    @staticmethod
    def from_dict(d: dict) -> "HPolynomial":
        items = tuple(sorted((int(p), float(v)) for p, v in d.items()
                             if v != 0.0))
        for p, _ in items:
            if p < -4 or p > 10:
                raise ReductionError(f"h-power {p} outside guard window")
        return HPolynomial(items)

    def coeff(self, power: int) -> float:
        for p, v in self.coeffs:
            if p == power:
                return v
        return 0.0

    def __call__(self, h: float) -> float:
        return float(sum(v * h**p for p, v in self.coeffs))

    def min_power(self) -> int:
        return self.coeffs[0][0] if self.coeffs else 0


@dataclass(frozen=True)
class ReductionRow:
    """One rewriting u^(p,q) = sum xi u^(m,n) + sum eta psi^(m,n).

    Values are floats in steady mode and HPolynomials in helmholtz mode
    (d = c/h contributes negative powers).
    """

    p: int
    q: int
    xi: dict
    eta: dict


def _entry_value(entry: dict, node: int, steady: bool):
    if steady:
        return float(sum(np.atleast_1d(arr)[node] if np.ndim(arr) else arr
                         for p, arr in entry.items()))
    d = {}
    for p, arr in entry.items():
        v = float(np.atleast_1d(arr)[node]) if np.ndim(arr) else float(arr)
        if v != 0.0:
            d[p] = d.get(p, 0.0) + v
    return HPolynomial.from_dict(d)


def reduce_derivative(pc, p: int, q: int, cap: int = M_ORDER) -> ReductionRow:
    """ReductionRow for one node's PointCoefficients.

    pc must expose dicts a, b (and c when mode == 'helmholtz') mapping
    (m,n) -> float.  Raises if (p,q) exceeds the cap or p < 2.
    """
    if p < 2 or q < 0:
        raise ReductionError(f"reduction needs p >= 2, got ({p}, {q})")
    if p + q > cap or cap > M_ORDER:
        raise ReductionError(f"total order {p + q} exceeds cap {cap}")
    steady = pc.mode == "steady"
    a = {k: np.asarray([v]) for k, v in pc.a.items()}
    b = {k: np.asarray([v]) for k, v in pc.b.items()}
    c = None if steady else {k: np.asarray([v]) for k, v in pc.c.items()}
    rows = reduction_rows(a, b, c)
    row = rows[(p, q)]
    xi, eta = {}, {}
    for key, entry in row.items():
        kind, m, n = key
        val = _entry_value(entry, 0, steady)
        if kind == "u":
            xi[(m, n)] = val
        else:
            eta[(m, n)] = val
    return ReductionRow(p=p, q=q, xi=xi, eta=eta)
