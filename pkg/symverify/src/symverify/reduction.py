"""Symbolic derivative-reduction tables.

For the linearized equation Lap(u) + a u_x + b u_y [+ d u] = psi, every
u^(p,q) with p >= 2 rewrites into u^(m,n) with m in {0,1} plus source
derivatives, by recursively applying

    u^(m+2,n) = -u^(m,n+2)
                - sum C(m,i) C(n,j) [a^(m-i,n-j) u^(i+1,j)
                                     + b^(m-i,n-j) u^(i,j+1)
                                     + d^(m-i,n-j) u^(i,j)]
                + psi^(m,n).

The tables here are fully symbolic in the coefficient derivatives
(a_mn, b_mn, and c_mn with d = c/h for the time-stepping variant) and are
checked verbatim against the published fourth-derivative coefficients.
"""

from __future__ import annotations

import math
from functools import lru_cache

import sympy as sp

M_ORDER = 7

LAMBDA2 = tuple((p, q) for p in range(2, M_ORDER + 1)
                for q in range(M_ORDER + 1 - p))

H = sp.Symbol("h", positive=True)


def coeff_symbol(name: str, m: int, n: int) -> sp.Symbol:
    return sp.Symbol(f"{name}{m}{n}")


def _sym_lookup(name, max_order=5):
    table = {(m, n): coeff_symbol(name, m, n)
             for m in range(max_order + 1) for n in range(max_order + 1 - m)}

    def get(m, n):
        return table.get((m, n))

    return get


def reduction_rows(get_a, get_b, get_d=None, cap: int = M_ORDER) -> dict:
    """Rows {(p,q): (xi {(m,n): expr}, eta {(m,n): expr})}.

    get_a(m, n) returns the coefficient derivative (symbol or number) or
    None when it is unavailable/zero; get_d is None for the steady form,
    otherwise it must return the d^(m,n) entries themselves (for the
    time-stepping form pass lambdas wrapping c_mn / h).
    """
    rows: dict = {}
    for p, q in LAMBDA2:
        if p + q > cap:
            continue
        m, n = p - 2, q
        xi: dict = {}
        eta: dict = {}

        def add(tgt, key, coef):
            tgt[key] = tgt.get(key, 0) + coef

        def put_u(mm, nn, coef):
            if mm >= 2:
                sub_xi, sub_eta = rows[(mm, nn)]
                for key, val in sub_xi.items():
                    add(xi, key, coef * val)
                for key, val in sub_eta.items():
                    add(eta, key, coef * val)
            else:
                add(xi, (mm, nn), coef)

        put_u(m, n + 2, -1)
        for i in range(m + 1):
            for j in range(n + 1):
                w = math.comb(m, i) * math.comb(n, j)
                va = get_a(m - i, n - j)
                if va is not None:
                    put_u(i + 1, j, -w * va)
                vb = get_b(m - i, n - j)
                if vb is not None:
                    put_u(i, j + 1, -w * vb)
                if get_d is not None:
                    vd = get_d(m - i, n - j)
                    if vd is not None:
                        put_u(i, j, -w * vd)
        add(eta, (m, n), 1)
        rows[(p, q)] = (xi, eta)
    return rows


@lru_cache(maxsize=4)
def sym_reduction_table(mode: str = "steady", cap: int = M_ORDER) -> dict:
    """Symbolic xi/eta tables in the abstract coefficient derivatives."""
    if mode not in ("steady", "helmholtz"):
        raise ValueError(f"unknown mode {mode!r}")
    get_a = _sym_lookup("a")
    get_b = _sym_lookup("b")
    get_d = None
    if mode == "helmholtz":
        get_c = _sym_lookup("c")

        def get_d(m, n):
            c = get_c(m, n)
            return None if c is None else c / H
    return reduction_rows(get_a, get_b, get_d, cap=cap)


def printed_xi40_expressions() -> dict:
    """The published fourth-derivative coefficients, typed verbatim."""
    a = coeff_symbol("a", 0, 0)
    b = coeff_symbol("b", 0, 0)
    a10, a01 = coeff_symbol("a", 1, 0), coeff_symbol("a", 0, 1)
    a20, a02 = coeff_symbol("a", 2, 0), coeff_symbol("a", 0, 2)
    b10, b01 = coeff_symbol("b", 1, 0), coeff_symbol("b", 0, 1)
    b20, b02 = coeff_symbol("b", 2, 0), coeff_symbol("b", 0, 2)
    return {
        (0, 1): 2 * a10 * b - a**2 * b + b01 * b + a * b10 + b02 - b20,
        (0, 2): 2 * a10 - a**2 + b**2 + 2 * b01,
        (1, 0): 3 * a * a10 - a**3 + a01 * b + a02 - a20,
        (1, 1): 2 * a * b + 2 * a01 - 2 * b10,
    }


def verify_printed_xi40() -> dict:
    """Compare the recursion's xi_{4,0,*} against the printed table."""
    rows = sym_reduction_table("steady")
    xi, eta = rows[(4, 0)]
    report = {"checked": [], "mismatches": []}
    for key, printed in printed_xi40_expressions().items():
        ours = sp.expand(xi.get(key, 0))
        delta = sp.simplify(ours - printed)
        report["checked"].append(str(key))
        if delta != 0:
            report["mismatches"].append({"key": str(key),
                                         "difference": str(delta)})
    # The second-derivative row is short enough to check in full.
    xi2, eta2 = rows[(2, 0)]
    expected2 = {(0, 2): sp.Integer(-1),
                 (1, 0): -coeff_symbol("a", 0, 0),
                 (0, 1): -coeff_symbol("b", 0, 0)}
    for key, want in expected2.items():
        if sp.simplify(xi2.get(key, 0) - want) != 0:
            report["mismatches"].append({"key": f"xi_2,0 {key}",
                                         "difference": str(xi2.get(key))})
    if sp.simplify(eta2.get((0, 0), 0) - 1) != 0:
        report["mismatches"].append({"key": "eta_2,0 (0,0)",
                                     "difference": str(eta2.get((0, 0)))})
    report["passed"] = not report["mismatches"]
    return report


def evaluate_row(rows: dict, p: int, q: int, values: dict, h: float = 1.0
                 ) -> tuple[dict, dict]:
    """Substitute numeric coefficient values into a symbolic row.

    Coefficient symbols missing from `values` count as zero.
    """
    subs = dict(values)
    subs[H] = h

    def num(expr):
        expr = sp.sympify(expr).subs(subs)
        if expr.free_symbols:
            expr = expr.subs({s: 0 for s in expr.free_symbols})
        return float(expr)

    xi, eta = rows[(p, q)]
    return ({k: num(v) for k, v in xi.items()},
            {k: num(v) for k, v in eta.items()})
