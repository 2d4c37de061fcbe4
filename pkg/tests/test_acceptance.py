"""Acceptance suite: reproduces the published error tables and the
scheme-level guarantees at their stated tolerances.

Solver runs are shared across criteria through a module-level cache, and
every criterion prints one PASS/FAIL line (visible with pytest -s or on
failure).  Transient runs enable the early-stop threshold at 1e-11: the
Picard sweeps contract by ~1e2 per sweep and plateau at the derivation
noise floor near 1e-10, so the skipped sweeps perturb fields orders of
magnitude below the factor-of-three tolerances used here.

Printed reference values (l2 unless noted):

Table 1, example1, h = 1/8..1/64
  general: 1.2164e-03  7.2612e-05  4.5074e-06  2.8133e-07   (orders 4.07 4.01 4.00)
  linf:    3.0974e-03  2.0035e-04  1.2469e-05  7.7980e-07
  reduced: 1.1144e-04  2.2191e-06  1.1455e-07  7.1254e-09
Table 2, example2
  special: 1.0157e-02  3.9676e-04  3.3975e-05  2.0859e-06   (order 4.03 at 1/64)
  reduced at 1/64: 2.8940e-08
Table 3, example3 (tau = h)
  BDF3: 3.1777e-04  2.7632e-05  2.5943e-06  2.6848e-07      (orders 3.52 3.41 3.27)
  BDF4: 2.3851e-04  8.2563e-06  5.8285e-07  3.7437e-08      (orders 4.85 3.82 3.96)
Table 4, example4
  CN (tau = h/2): 3.3269e-03  7.1559e-04  3.3296e-05        (orders 2.22 4.43;
      the printed column continues to 2.00 at h = 1/256, reproducible via
      the convergence CLI at levels 8..256)
  BDF3 (tau = h): 1.8605e-03  3.9588e-04  8.7041e-06  2.0001e-07
"""

import math
import time

import numpy as np
import pytest

from compactcd.cases import lookup_case
from compactcd.coefficients import cn_context, steady_context, tables_from_context
from compactcd.grid import make_grid, sample_scalar
from compactcd.harness import consistency_probe, error_norms
from compactcd.solvers import SolveConfig, run_algorithm
from compactcd.stencils import PIN0, build_stencils, derive_reduced, mmatrix_report

FACTOR = 3.0
ORDER_TOL = 0.3

_cache = {}
_max_match_residual = [0.0]


def _criterion(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}")
    assert ok, f"{name}: {detail}"


def _collect_match(report):
    for d in report.diagnostics:
        recs = d if isinstance(d, list) else [d]
        for r in recs:
            _max_match_residual[0] = max(_max_match_residual[0],
                                         r.match_residual)


def run_cached(case_name, algorithm, variant, n, r=0.5, early_stop=None):
    key = (case_name, algorithm, variant, n, r, early_stop)
    if key not in _cache:
        case = lookup_case(case_name)
        grid = make_grid(n)
        config = SolveConfig(variant=variant, r=r, early_stop_tol=early_stop)
        t0 = time.perf_counter()
        report = run_algorithm(algorithm, case, grid, config)
        elapsed = time.perf_counter() - t0
        _collect_match(report)
        t_final = 0.0 if case.is_steady else 1.0
        exact = sample_scalar(case.exact_u, grid, t_final)
        l2, linf = error_norms(report.field, exact)
        _cache[key] = (l2, linf, elapsed)
    return _cache[key]


def _orders(errs):
    return [math.log2(a / b) for a, b in zip(errs, errs[1:])]


# ---------------------------------------------------------------------------
# Table 1
# ---------------------------------------------------------------------------

T1_GENERAL_L2 = [1.2164e-03, 7.2612e-05, 4.5074e-06, 2.8133e-07]
T1_GENERAL_LINF = [3.0974e-03, 2.0035e-04, 1.2469e-05, 7.7980e-07]
T1_REDUCED_L2 = [1.1144e-04, 2.2191e-06, 1.1455e-07, 7.1254e-09]


def test_table1_general_reproduction():
    levels = (8, 16, 32, 64)
    t0 = time.perf_counter()
    runs = [run_cached("example1", "steady", "general4", n,
                       early_stop=1e-13) for n in levels]
    elapsed = time.perf_counter() - t0
    l2s = [r[0] for r in runs]
    linfs = [r[1] for r in runs]
    ok = all(1 / FACTOR <= got / ref <= FACTOR
             for got, ref in zip(l2s, T1_GENERAL_L2))
    ok &= all(1 / FACTOR <= got / ref <= FACTOR
              for got, ref in zip(linfs, T1_GENERAL_LINF))
    orders = _orders(l2s)
    ok &= abs(orders[-1] - 4.0) <= ORDER_TOL and abs(orders[-2] - 4.0) <= ORDER_TOL
    ok &= elapsed <= 120.0
    _criterion("Table 1 general (example1, h=1/8..1/64, <=2min)", ok,
               f"l2={['%.3e' % e for e in l2s]} orders={['%.2f' % o for o in orders]} "
               f"elapsed={elapsed:.0f}s")


def test_table1_reduced_beats_general():
    levels = (16, 32, 64)
    reduced = [run_cached("example1", "steady", "reduced_elliptic", n,
                          early_stop=1e-13)[0] for n in levels]
    general = [run_cached("example1", "steady", "general4", n,
                          early_stop=1e-13)[0] for n in levels]
    ok = 1 / FACTOR <= reduced[0] / 2.2191e-06 <= FACTOR
    ok &= all(r < g for r, g in zip(reduced, general))
    ok &= all(1 / FACTOR <= got / ref <= FACTOR
              for got, ref in zip(reduced, T1_REDUCED_L2[1:]))
    _criterion("Table 1 reduced (factor 3 at 1/16; smaller than general)",
               ok, f"reduced={['%.3e' % e for e in reduced]}")


# ---------------------------------------------------------------------------
# Table 2
# ---------------------------------------------------------------------------

def test_table2_example2():
    t0 = time.perf_counter()
    special = [run_cached("example2", "steady", "special4", n,
                          early_stop=1e-13)[0] for n in (32, 64)]
    reduced64 = run_cached("example2", "steady", "reduced_elliptic", 64,
                           early_stop=1e-13)[0]
    elapsed = time.perf_counter() - t0
    order = math.log2(special[0] / special[1])
    ok = 1 / FACTOR <= special[1] / 2.0859e-06 <= FACTOR
    ok &= abs(order - 4.03) <= ORDER_TOL
    ok &= 1 / FACTOR <= reduced64 / 2.8940e-08 <= FACTOR
    ok &= elapsed <= 180.0
    _criterion("Table 2 (example2, special+reduced at 1/64, <=3min)", ok,
               f"special64={special[1]:.3e} order={order:.2f} "
               f"reduced64={reduced64:.3e} elapsed={elapsed:.0f}s")


# ---------------------------------------------------------------------------
# Table 3
# ---------------------------------------------------------------------------

T3_BDF3 = [3.1777e-04, 2.7632e-05, 2.5943e-06, 2.6848e-07]
T3_BDF3_ORDERS = [3.52, 3.41, 3.27]
T3_BDF4 = [2.3851e-04, 8.2563e-06, 5.8285e-07, 3.7437e-08]
T3_BDF4_ORDERS = [4.85, 3.82, 3.96]


@pytest.mark.parametrize("algo,refs,ref_orders", [
    ("bdf3", T3_BDF3, T3_BDF3_ORDERS),
    ("bdf4", T3_BDF4, T3_BDF4_ORDERS),
])
def test_table3_example3(algo, refs, ref_orders):
    levels = (8, 16, 32, 64)
    l2s = [run_cached("example3", algo, "reduced_helmholtz", n, r=1.0,
                      early_stop=1e-11)[0] for n in levels]
    orders = _orders(l2s)
    ok = all(1 / FACTOR <= got / ref <= FACTOR for got, ref in zip(l2s, refs))
    ok &= all(abs(o - ref) <= ORDER_TOL for o, ref in zip(orders, ref_orders))
    _criterion(f"Table 3 {algo.upper()} (example3, tau=h, h=1/8..1/64)", ok,
               f"l2={['%.3e' % e for e in l2s]} "
               f"orders={['%.2f' % o for o in orders]}")


# ---------------------------------------------------------------------------
# Table 4
# ---------------------------------------------------------------------------

def test_table4_cn():
    levels = (8, 16, 32)
    refs = [3.3269e-03, 7.1559e-04, 3.3296e-05]
    l2s = [run_cached("example4", "cn", "reduced_helmholtz", n, r=0.5,
                      early_stop=1e-11)[0] for n in levels]
    orders = _orders(l2s)
    ok = 1 / FACTOR <= l2s[-1] / refs[-1] <= FACTOR
    ok &= all(1 / FACTOR <= got / ref <= FACTOR for got, ref in zip(l2s, refs))
    ok &= all(abs(o - ref) <= ORDER_TOL
              for o, ref in zip(orders, [2.22, 4.43]))
    _criterion("Table 4 CN (example4, tau=h/2, factor 3 at 1/32)", ok,
               f"l2={['%.3e' % e for e in l2s]} "
               f"orders={['%.2f' % o for o in orders]}")


def test_table4_bdf3():
    levels = (8, 16, 32, 64)
    refs = [1.8605e-03, 3.9588e-04, 8.7041e-06, 2.0001e-07]
    l2s = [run_cached("example4", "bdf3", "reduced_helmholtz", n, r=1.0,
                      early_stop=1e-11)[0] for n in levels]
    ok = all(1 / FACTOR <= got / ref <= FACTOR for got, ref in zip(l2s, refs))
    _criterion("Table 4 BDF3 (example4, tau=h, factor 3 at 1/64)", ok,
               f"l2={['%.3e' % e for e in l2s]}")


# ---------------------------------------------------------------------------
# Consistency probes
# ---------------------------------------------------------------------------

def test_consistency_probe_orders():
    results = {}
    for variant in ("general4", "special4", "reduced_elliptic",
                    "reduced_helmholtz"):
        pr = consistency_probe(lookup_case("example1"), variant, (32, 64),
                               r=0.5)
        results[variant] = pr.observed_order
    ok = all(order >= 3.7 for order in results.values())
    _criterion("Consistency order >= 3.7 (all variants, example1, 1/32-1/64)",
               ok, str({k: f"{v:.2f}" for k, v in results.items()}))


def test_consistency_leading_term():
    pr = consistency_probe(lookup_case("example1"), "reduced_elliptic",
                           (64, 128))
    ok = pr.center_ratio is not None and abs(pr.center_ratio - 1.0) <= 0.10
    _criterion("Reduced leading error = (a01-b10)u13/90 within 10% at 1/128",
               ok, f"ratio={pr.center_ratio:.4f}")


# ---------------------------------------------------------------------------
# M-matrix property
# ---------------------------------------------------------------------------

def _exact_tables(case_name, variant, n):
    case = lookup_case(case_name)
    grid = make_grid(n)
    if variant == "reduced_helmholtz":
        t_eval = 0.0 if case.is_steady else 0.5
        prev = sample_scalar(case.exact_u, grid, t_eval)
        ctx = cn_context(case, prev, t_eval, 0.5)
        return tables_from_context(ctx, prev)
    ctx = steady_context(case, grid)
    return tables_from_context(ctx, sample_scalar(case.exact_u, grid, 0.0))


def test_mmatrix_examples_and_limits():
    # special4 requires a = b, which only example2 satisfies; every other
    # applicable variant is checked on both examples at h = 1/64.
    #
    # KNOWN RED: example2's reduced_elliptic stencil violates the sign
    # conditions at the layer-crossing node (0.797, 0.797).  The unique
    # pinned-zero derived stencil there carries coefficients scaled by
    # the layer's high derivatives (c_{k,l,1} ~ 3e2, so the h -> 0 limit
    # dominates only for far smaller h; the violation persists at 1/128
    # and 1/256 and reproduces with fully analytic coefficient tables and
    # under the independent symbolic rebuild of the matching system).
    # The "sufficiently small h" guarantee simply is not reached at 1/64
    # for this problem; see the decisions ledger.
    checks = [("example1", "general4"), ("example1", "reduced_elliptic"),
              ("example1", "reduced_helmholtz"),
              ("example2", "general4"), ("example2", "special4"),
              ("example2", "reduced_elliptic"),
              ("example2", "reduced_helmholtz")]
    failures = []
    for case_name, variant in checks:
        tables = _exact_tables(case_name, variant, 64)
        stencils = build_stencils(tables, variant)
        if not mmatrix_report(stencils).passed:
            failures.append((case_name, variant))
    # Pinned h->0 limits are exact by construction; verify on a sample.
    tables = _exact_tables("example1", "reduced_elliptic", 16)
    w = derive_reduced(tables.point(8, 8), tables.h)
    limits_ok = (np.array_equal(w.cklp[:, 0], PIN0)
                 and PIN0[4] == -10.0 / 3.0
                 and PIN0[0] == 1.0 / 6.0 and PIN0[1] == 2.0 / 3.0)
    ok = not failures and limits_ok
    _criterion("M-matrix at 1/64 (examples 1-2, applicable variants) "
               "and exact h->0 limits", ok,
               f"failures={failures} limits_ok={limits_ok} "
               "(example2/reduced_elliptic is a known irreducible failure "
               "at the sharp-layer node; see notes/decisions.md)")


# ---------------------------------------------------------------------------
# Property suite (no paper numbers)
# ---------------------------------------------------------------------------

def test_property_formula_exactness():
    from compactcd.fd import all_formulas
    worst = 0.0
    for order in (1, 2, 3, 4, 5):
        for offsets, coeffs in all_formulas(order):
            for d in range(6):
                x0, h = 0.4, 0.1
                exact = 0.0
                if d >= order:
                    exact = (math.factorial(d) / math.factorial(d - order)
                             * x0 ** (d - order))
                val = sum(c * (x0 + o * h) ** d
                          for o, c in zip(offsets, coeffs)) / h**order
                worst = max(worst, abs(val - exact))
    ok = worst < 5e-9
    _criterion("Derivative formulas exact to degree 5 (all variants)", ok,
               f"worst={worst:.2e}")


def test_property_reduction_identity():
    # Same construction as the unit-level property test, asserted here as
    # an acceptance gate across both modes and every (p,q).
    from test_taylor import _identity_setup
    from compactcd.taylor import LAMBDA2, HPolynomial, reduce_derivative
    worst = 0.0
    for mode in ("steady", "helmholtz"):
        h = 0.07
        pc, u, PSI, (x0, y0) = _identity_setup(mode, h, seed=11)
        for (p, q) in LAMBDA2:
            row = reduce_derivative(pc, p, q)
            rhs = sum((xi(h) if isinstance(xi, HPolynomial) else xi)
                      * u.d(m, n, x0, y0) for (m, n), xi in row.xi.items())
            rhs += sum((e(h) if isinstance(e, HPolynomial) else e)
                       * PSI[(m, n)] for (m, n), e in row.eta.items())
            worst = max(worst, abs(rhs - u.d(p, q, x0, y0)))
    ok = worst <= 1e-8
    _criterion("Reduction identity <= 1e-8 for all (p,q), both modes", ok,
               f"worst={worst:.2e}")


def test_property_error_norm_closed_forms():
    from compactcd.grid import GridSpec, ScalarField
    grid = GridSpec(4)
    delta = 0.37
    uniform = ScalarField(grid, np.full((5, 5), delta))
    zero = ScalarField(grid, np.zeros((5, 5)))
    l2, linf = error_norms(uniform, zero)
    ok = (abs(linf - delta) < 1e-15
          and abs(l2 - 1.25 * delta) < 1e-15)
    single = np.zeros((5, 5))
    single[2, 1] = delta
    l2s, linfs = error_norms(ScalarField(grid, single), zero)
    ok &= abs(l2s - 0.25 * delta) < 1e-15 and abs(linfs - delta) < 1e-15
    _criterion("Error-norm closed forms", ok)


def test_property_early_stop_equivalence():
    # With early_stop_tol = 1e-14 the final fields agree with fixed-count
    # runs to 1e-12 in the max norm at N1 = 32.  When the threshold never
    # fires the trajectories are identical by determinism (checked via the
    # executed sweep counts); where it fires, a fixed-count rerun is
    # compared directly.
    setups = [("example1", "steady", "general4", 0.5, 40),
              ("example2", "steady", "special4", 0.5, 40),
              ("example3", "bdf3", "reduced_helmholtz", 1.0, 20),
              ("example4", "cn", "reduced_helmholtz", 0.5, 20)]
    worst = 0.0
    for case_name, algo, variant, r, fixed_count in setups:
        case = lookup_case(case_name)
        grid = make_grid(32)
        stopped = run_algorithm(algo, case, grid,
                                SolveConfig(variant=variant, r=r,
                                            early_stop_tol=1e-14))
        _collect_match(stopped)
        fired = any(
            len(d if isinstance(d, list) else [d]) < fixed_count
            for d in ([stopped.diagnostics] if algo == "steady"
                      else stopped.diagnostics))
        if algo == "steady":
            fired = len(stopped.diagnostics) < fixed_count
        if fired:
            fixed = run_algorithm(algo, case, grid,
                                  SolveConfig(variant=variant, r=r))
            _collect_match(fixed)
            gap = float(np.abs(stopped.field.values
                               - fixed.field.values).max())
        else:
            gap = 0.0
        worst = max(worst, gap)
    ok = worst <= 1e-12
    _criterion("Early stop 1e-14 matches fixed-count runs to 1e-12 (N=32)",
               ok, f"worst gap={worst:.2e}")


def test_property_match_residual_every_run():
    # Runs from the table reproductions above populate the cache; their
    # recorded per-sweep match residuals must all sit below 1e-9.
    assert _cache, "table tests must run first"
    ok = _max_match_residual[0] <= 1e-9
    _criterion("Derived-stencil match residual <= 1e-9 on every run", ok,
               f"max={_max_match_residual[0]:.2e}")
