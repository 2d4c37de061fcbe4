"""Numeric validation of stencil-dump files.

The solver's stencil dumps record, per sampled node, the coefficient
derivative values a/b (and c), the derived c_{k,l,p} table (9 rows in
row-major (k,l) order, columns p = 0..7), and the solver's own matching
residual.  This module REBUILDS the matching equations from the dumped
coefficient values with its own reduction implementation and confirms:

* pinned entries hold exactly: c_{k,l,0} equals (1/6, 2/3, -10/3) and the
  published free variables are zero;
* every matching equation (coefficients of h^0..h^7 of
  sum_{k,l} C_{k,l} G_{7,m,n}(k h, l h), with the pollution slots moved
  to the right-hand side) has residual at most 1e-10 relative to the
  largest equation coefficient.

Laurent bookkeeping in h uses plain dicts power -> float, which is exact
for this finite computation.
"""

from __future__ import annotations

import json
import math

from .reduction import reduction_rows

M_ORDER = 7
KL = tuple((k, l) for k in (-1, 0, 1) for l in (-1, 0, 1))
LAMBDA1 = tuple((m, n) for m in (0, 1) for n in range(M_ORDER + 1 - m))

PIN0 = {kl: (1.0 / 6.0 if kl[0] * kl[1] != 0 else
             (-10.0 / 3.0 if kl == (0, 0) else 2.0 / 3.0)) for kl in KL}

FREE_STEADY = {
    (-1, 0): (7,), (-1, 1): (6, 7), (0, -1): (7,), (0, 0): (6, 7),
    (0, 1): (5, 6, 7), (1, -1): (5, 6, 7), (1, 0): (4, 5, 6, 7),
    (1, 1): (2, 3, 4, 5, 6, 7),
}
FREE_HELMHOLTZ = {**FREE_STEADY, (1, 1): (1, 2, 3, 4, 5, 6, 7)}

RESIDUAL_TOL = 1e-10


class _Laurent(dict):
    """power -> coefficient, with shift-and-scale accumulation."""

    def add(self, power, value):
        self[power] = self.get(power, 0.0) + value


def _parse_coeffs(record: dict, name: str) -> dict:
    out = {}
    for key, value in record["coeffs"].get(name, {}).items():
        m, n = key.split(",")
        out[(int(m), int(n))] = float(value)
    return out


def _numeric_rows(a: dict, b: dict, c: dict | None):
    """Reduction rows with Laurent-valued coefficients."""
    HINV = object()  # sentinel multiplied in via tuples below

    # reduction_rows works over any ring; feed it (power, value) pairs via
    # small Laurent dicts wrapped in a trivial algebra.
    class L:
        __slots__ = ("d",)

        def __init__(self, d):
            self.d = d

        def __mul__(self, other):
            if isinstance(other, L):
                out = {}
                for p1, v1 in self.d.items():
                    for p2, v2 in other.d.items():
                        out[p1 + p2] = out.get(p1 + p2, 0.0) + v1 * v2
                return L(out)
            return L({p: v * other for p, v in self.d.items()})

        __rmul__ = __mul__

        def __add__(self, other):
            if other == 0:
                return self
            out = dict(self.d)
            for p, v in other.d.items():
                out[p] = out.get(p, 0.0) + v
            return L(out)

        __radd__ = __add__

        def __neg__(self):
            return L({p: -v for p, v in self.d.items()})

    def get_a(m, n):
        v = a.get((m, n))
        return None if v is None else L({0: v})

    def get_b(m, n):
        v = b.get((m, n))
        return None if v is None else L({0: v})

    get_d = None
    if c is not None:
        def get_d(m, n):
            v = c.get((m, n))
            return None if v is None else L({-1: v})

    rows = reduction_rows(get_a, get_b, get_d)
    return rows, L


def _g_tables(a: dict, b: dict, c: dict | None) -> dict:
    """G_{7,m,n}(k h, l h) as {(m,n): {(k,l): {power: coeff}}}."""
    rows, L = _numeric_rows(a, b, c)
    g = {mn: {kl: {} for kl in KL} for mn in LAMBDA1}
    for (m, n) in LAMBDA1:
        if m + n <= M_ORDER:
            w = 1.0 / (math.factorial(m) * math.factorial(n))
            for (k, l) in KL:
                val = (k**m) * (l**n) * w
                if val:
                    slot = g[(m, n)][(k, l)]
                    slot[m + n] = slot.get(m + n, 0.0) + val
    for (p, q), (xi, eta) in rows.items():
        base = p + q
        w = 1.0 / (math.factorial(p) * math.factorial(q))
        for (m, n), coef in xi.items():
            d = coef.d if hasattr(coef, "d") else {0: float(coef)}
            for (k, l) in KL:
                mono = (k**p) * (l**q) * w
                if not mono:
                    continue
                slot = g[(m, n)][(k, l)]
                for power, val in d.items():
                    tp = base + power
                    if tp <= M_ORDER:
                        slot[tp] = slot.get(tp, 0.0) + val * mono
    return g


def _targets(a: dict, b: dict, c: dict | None) -> dict:
    a01, b10 = a[(0, 1)], b[(1, 0)]
    T = {((1, 3), 6): (a01 - b10) / 90.0}
    if c is not None:
        a0, b0, c0 = a[(0, 0)], b[(0, 0)], c[(0, 0)]
        c10, c01 = c[(1, 0)], c[(0, 1)]
        T[((1, 3), 7)] = (10.0 * a0 * (6.0 * b0 * c0 - 21.0 * (a01 - b10)
                                       - 8.0 * c01)
                          - 210.0 * (a01 - b10 + c10) * b0
                          - (49.0 * a01 + 91.0 * b10) * c0) / 37800.0
        T[((1, 4), 7)] = -(a0 * c0 + 14.0 * c10) / 7560.0
        T[((0, 5), 7)] = (b0 * c0 - c01) / 540.0
    return T


def check_record(record: dict, mode: str) -> dict:
    """Validate one dumped node; returns {passed, max_residual, issues}."""
    a = _parse_coeffs(record, "a")
    b = _parse_coeffs(record, "b")
    c = _parse_coeffs(record, "c") if mode == "helmholtz" else None
    cklp = record["c_klp"]
    issues = []

    free = FREE_STEADY if mode == "steady" else FREE_HELMHOLTZ
    for ki, kl in enumerate(KL):
        if cklp[ki][0] != PIN0[kl]:
            issues.append(f"c_{kl},0 = {cklp[ki][0]!r} != pinned {PIN0[kl]!r}")
        for p in free.get(kl, ()):
            if cklp[ki][p] != 0.0:
                issues.append(f"free c_{kl},{p} = {cklp[ki][p]!r} != 0")

    g = _g_tables(a, b, c)
    targets = _targets(a, b, c)
    max_res = 0.0
    max_entry = max((abs(v) for mn in LAMBDA1 for kl in KL
                     for v in g[mn][kl].values()), default=1.0)
    for (m, n) in LAMBDA1:
        for s in range(M_ORDER + 1):
            total = 0.0
            for ki, kl in enumerate(KL):
                slot = g[(m, n)][kl]
                for p in range(0, s + 1):
                    coeff = slot.get(s - p)
                    if coeff:
                        total += cklp[ki][p] * coeff
            total -= targets.get(((m, n), s), 0.0)
            max_res = max(max_res, abs(total))
    rel = max_res / max_entry
    if rel > RESIDUAL_TOL:
        issues.append(f"matching residual {rel:.3e} > {RESIDUAL_TOL:.0e}")
    return {"passed": not issues, "max_residual": rel, "issues": issues}


def crosscheck_stencil_dump(path) -> dict:
    """Validate every record of a dump file; returns a pass/fail report."""
    with open(path) as fh:
        dump = json.load(fh)
    mode = dump["mode"]
    if mode not in ("steady", "helmholtz"):
        raise ValueError(f"dump has unknown mode {mode!r}")
    results = []
    worst = 0.0
    for record in dump["records"]:
        res = check_record(record, mode)
        worst = max(worst, res["max_residual"])
        results.append({"node": record["node"], **res})
    failed = [r for r in results if not r["passed"]]
    return {
        "path": str(path),
        "mode": mode,
        "h": dump["h"],
        "n_records": len(results),
        "max_residual": worst,
        "passed": not failed,
        "failures": failed,
    }
