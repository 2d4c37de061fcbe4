import sympy as sp

from symverify.closedforms import (
    H,
    _PSI,
    general_block,
    special_block,
    verify_closed_forms,
)


def test_closed_forms_order_six():
    report = verify_closed_forms()
    assert report["passed"], report["failures"]


def test_general_poisson_limit():
    C, F = general_block()
    a_zero = {s: 0 for s in sp.Add(*C.values()).free_symbols
              if str(s).startswith(("a", "b"))}
    assert C[(0, 0)].subs(a_zero) == sp.Rational(-10, 3)
    assert C[(1, 1)].subs(a_zero) == sp.Rational(1, 6)
    assert C[(0, 1)].subs(a_zero) == sp.Rational(2, 3)
    # with a = b = 0, F = psi + h^2 Lap(psi)/12 (the Poisson compact rhs)
    F0 = sp.expand(F.subs(a_zero))
    expect = (_PSI[(0, 0)]
              + H**2 / 12 * (_PSI[(2, 0)] + _PSI[(0, 2)]))
    assert sp.simplify(F0 - expect) == 0


def test_f_at_h_zero_is_psi():
    for C, F in (general_block(), special_block()):
        assert sp.simplify(F.subs(H, 0) - _PSI[(0, 0)]) == 0
