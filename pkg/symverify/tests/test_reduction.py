import sympy as sp
import pytest

from symverify.reduction import (
    H,
    coeff_symbol,
    evaluate_row,
    sym_reduction_table,
    verify_printed_xi40,
)


def test_printed_xi40_verbatim():
    report = verify_printed_xi40()
    assert report["passed"], report["mismatches"]


def test_xi40_11_expression():
    rows = sym_reduction_table("steady")
    xi, _ = rows[(4, 0)]
    a, b = coeff_symbol("a", 0, 0), coeff_symbol("b", 0, 0)
    a01, b10 = coeff_symbol("a", 0, 1), coeff_symbol("b", 1, 0)
    assert sp.simplify(xi[(1, 1)] - (2 * a * b + 2 * a01 - 2 * b10)) == 0


def test_xi20_row():
    rows = sym_reduction_table("steady")
    xi, eta = rows[(2, 0)]
    assert xi[(0, 2)] == -1
    assert xi[(1, 0)] == -coeff_symbol("a", 0, 0)
    assert xi[(0, 1)] == -coeff_symbol("b", 0, 0)
    assert eta[(0, 0)] == 1


def test_constants_only_evaluation():
    rows = sym_reduction_table("steady")
    values = {coeff_symbol("a", 0, 0): 2.0, coeff_symbol("b", 0, 0): 3.0}
    xi, eta = evaluate_row(rows, 4, 0, values)
    assert xi[(1, 0)] == pytest.approx(-8.0)
    assert xi[(1, 1)] == pytest.approx(12.0)
    assert xi[(0, 2)] == pytest.approx(5.0)


def test_helmholtz_rows_carry_inverse_h():
    rows = sym_reduction_table("helmholtz")
    xi, _ = rows[(2, 0)]
    c00 = coeff_symbol("c", 0, 0)
    assert sp.simplify(xi[(0, 0)] + c00 / H) == 0


def test_denominators_free_of_derivatives():
    # Coefficient derivatives never appear in a denominator; the only
    # division is by the mesh size.
    rows = sym_reduction_table("helmholtz")
    for (p, q), (xi, eta) in rows.items():
        for expr in list(xi.values()) + list(eta.values()):
            denom = sp.denom(sp.together(sp.sympify(expr)))
            assert denom.free_symbols <= {H}, (p, q, expr)
