import csv
import json

import numpy as np
import pytest

from compactcd.cases import lookup_case
from compactcd.grid import ScalarField, make_grid, sample_scalar, zeros_field
from compactcd.harness import (
    ConvergenceReport,
    ConvergenceRow,
    HarnessError,
    consistency_probe,
    convergence_study,
    emit_report,
    error_norms,
    format_report,
)
from compactcd.solvers import SolveConfig


def test_error_norms_zero():
    g = make_grid(8)
    f = zeros_field(g)
    assert error_norms(f, f) == (0.0, 0.0)


def test_error_norms_uniform_offset():
    g = make_grid(4) if False else None
    # N1 = 4 grid built directly (harness norms have no stencil needs)
    from compactcd.grid import GridSpec
    grid = GridSpec(4)
    delta = 0.3
    a = ScalarField(grid, np.zeros((5, 5)))
    b = ScalarField(grid, np.full((5, 5), delta))
    l2, linf = error_norms(a, b)
    assert linf == pytest.approx(delta)
    assert l2 == pytest.approx(delta * grid.h * 5)  # = 1.25 delta


def test_error_norms_single_node():
    from compactcd.grid import GridSpec
    grid = GridSpec(4)
    delta = 0.7
    vals = np.zeros((5, 5))
    vals[2, 2] = delta
    l2, linf = error_norms(ScalarField(grid, vals),
                           ScalarField(grid, np.zeros((5, 5))))
    assert linf == pytest.approx(delta)
    assert l2 == pytest.approx(delta * grid.h)


def test_error_norms_grid_mismatch():
    a = zeros_field(make_grid(8))
    b = zeros_field(make_grid(16))
    with pytest.raises(HarnessError):
        error_norms(a, b)


def test_l2_bounded_by_linf():
    rng = np.random.default_rng(0)
    g = make_grid(16)
    a = ScalarField(g, rng.normal(size=(17, 17)))
    b = zeros_field(g)
    l2, linf = error_norms(a, b)
    assert l2 <= linf * (1.0 + g.h) + 1e-14


def test_convergence_study_steady():
    case = lookup_case("example1")
    rep = convergence_study(case, "steady", "general4", (8, 16),
                            config=SolveConfig(variant="general4",
                                               early_stop_tol=1e-13))
    assert len(rep.rows) == 2
    assert rep.rows[0].l2_order is None
    assert rep.rows[1].l2_order == pytest.approx(4.0, abs=0.4)
    assert rep.rows[0].tau is None


def test_convergence_levels_validated():
    case = lookup_case("example1")
    with pytest.raises(HarnessError, match="halve"):
        convergence_study(case, "steady", "general4", (8, 24))


def test_convergence_study_threads_match_serial():
    case = lookup_case("example1")
    cfg = SolveConfig(variant="general4", steady_iterations=5)
    serial = convergence_study(case, "steady", "general4", (8, 16), config=cfg)
    par = convergence_study(case, "steady", "general4", (8, 16), config=cfg,
                            threads=2)
    for r1, r2 in zip(serial.rows, par.rows):
        assert r1.l2 == r2.l2 and r1.linf == r2.linf


def test_probe_polynomial_exactness():
    # Poisson with a cubic solution: the scheme is exact, residuals are
    # solver-roundoff only.
    from compactcd.cases import FluxSpec, ManufacturedCase
    zero = lambda u: np.zeros_like(np.asarray(u, float))
    flux = FluxSpec(alpha=zero, beta=zero, alpha_u=zero, beta_u=zero)

    def exact(x, y, t):
        return x**3 + y**3 - x * y

    def deriv(m, n, x, y, t):
        from math import factorial
        vals = {(0, 0): exact(x, y, t),
                (1, 0): 3 * x**2 - y, (0, 1): 3 * y**2 - x,
                (2, 0): 6 * x, (0, 2): 6 * y, (1, 1): -1.0 + 0 * x,
                (3, 0): 6.0 + 0 * x, (0, 3): 6.0 + 0 * x}
        return vals.get((m, n), 0.0 + 0 * x)

    case = ManufacturedCase(
        "cubic", lambda x, y, t: np.ones_like(np.asarray(x, float)), flux,
        exact, lambda x, y, t: -(6 * x + 6 * y), is_steady=True,
        exact_deriv=deriv)
    pr = consistency_probe(case, "general4", (8, 16))
    assert max(pr.residuals) <= 1e-9


def test_probe_orders_example1():
    case = lookup_case("example1")
    pr = consistency_probe(case, "general4", (16, 32))
    assert pr.observed_order >= 3.7
    pr = consistency_probe(case, "reduced_elliptic", (16, 32))
    assert pr.observed_order >= 3.7


def _tiny_report():
    rep = ConvergenceReport(case="example1", algorithm="steady",
                            variant="general4", r=None)
    rep.rows = [ConvergenceRow(h=0.125, tau=None, l2=1e-3, linf=2e-3),
                ConvergenceRow(h=0.0625, tau=None, l2=6.25e-5, linf=1.25e-4),
                ConvergenceRow(h=0.03125, tau=None, l2=3.9e-6, linf=7.8e-6)]
    rep.attach_orders()
    return rep


def test_emit_csv(tmp_path):
    rep = _tiny_report()
    path = tmp_path / "out.csv"
    emit_report(rep, path, "csv")
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["h", "tau", "l2", "l2_order", "linf", "linf_order"]
    assert len(rows) == 4
    assert rows[1][3] == ""            # first level has no order
    assert rows[2][3] == "4.00"
    assert "e" in rows[1][2]           # scientific notation


def test_emit_csv_empty(tmp_path):
    rep = ConvergenceReport(case="x", algorithm="steady", variant="general4",
                            r=None)
    path = tmp_path / "empty.csv"
    emit_report(rep, path, "csv")
    rows = list(csv.reader(open(path)))
    assert len(rows) == 1


def test_emit_json(tmp_path):
    rep = _tiny_report()
    path = tmp_path / "out.json"
    emit_report(rep, path, "json")
    data = json.load(open(path))
    assert data["case"] == "example1"
    assert len(data["rows"]) == 3
    assert data["rows"][1]["l2_order"] == pytest.approx(4.0)


def test_emit_unwritable_path():
    rep = _tiny_report()
    with pytest.raises(OSError):
        emit_report(rep, "/nonexistent-dir/report.csv", "csv")


def test_format_report_readable():
    text = format_report(_tiny_report())
    assert "example1" in text and "general4" in text
    assert text.count("\n") == 4
