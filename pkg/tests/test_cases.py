import numpy as np
import pytest

from compactcd.cases import (
    CaseError,
    FluxSpec,
    ManufacturedCase,
    exact_source_check,
    lookup_case,
    registered_names,
)
from compactcd.grid import make_grid, sample_scalar


def test_registry_contents():
    assert registered_names() == ["example1", "example2", "example3", "example4"]


def test_lookup_example1_values():
    case = lookup_case("example1")
    assert case.is_steady
    assert case.kappa(0.0, 0.0, 0.0) == pytest.approx(2.0)
    assert case.exact_u(np.pi / 6, 0.0, 0.0) == pytest.approx(1.0)
    assert case.flux.alpha(0.0) == pytest.approx(1.0)
    assert case.flux.beta_u(0.0) == pytest.approx(1.0)


def test_lookup_example4_values():
    case = lookup_case("example4")
    assert not case.is_steady
    # u(.,.,0) = 0 and kappa = 1/10
    assert np.all(case.exact_u(np.linspace(0, 1, 5), 0.5, 0.0) == 0.0)
    assert case.kappa(0.3, 0.7, 0.2) == pytest.approx(0.1)
    # at t = 1, u = (e - 1) * x y tanh(10(1-x)) tanh(10(1-y))
    val = case.exact_u(0.5, 0.5, 1.0)
    expect = (np.e - 1) * 0.25 * np.tanh(5.0) ** 2
    assert val == pytest.approx(expect, rel=1e-12)


def test_unknown_case_lists_names():
    with pytest.raises(CaseError, match="example1"):
        lookup_case("nosuch")


def test_boundary_g_is_exact_u():
    for name in registered_names():
        case = lookup_case(name)
        assert case.boundary_g is case.exact_u


def test_flux_derivative_self_check():
    u = np.linspace(-2, 2, 41)
    for name in registered_names():
        lookup_case(name).flux.check_derivatives(u)


def test_flux_derivative_self_check_catches_error():
    bad = FluxSpec(alpha=np.cos, beta=np.sin,
                   alpha_u=np.sin, beta_u=np.cos)  # alpha_u sign wrong
    with pytest.raises(CaseError):
        bad.check_derivatives(np.linspace(-1, 1, 11))


def test_kappa_positive_everywhere():
    g = make_grid(128)
    for name in registered_names():
        case = lookup_case(name)
        for t in (0.0, 0.5, 1.0):
            k = sample_scalar(case.kappa, g, t)
            assert k.values.min() > 0.0


def test_source_check_example1():
    assert exact_source_check(lookup_case("example1"), make_grid(64)) <= 1e-6


def test_source_check_example3_midtime():
    residual = exact_source_check(lookup_case("example3"), make_grid(64), t=0.5)
    assert residual <= 1e-5


def test_source_check_zero_case():
    zero = lambda *a: 0.0
    flux = FluxSpec(alpha=zero, beta=zero, alpha_u=zero, beta_u=zero)
    case = ManufacturedCase("zero", lambda x, y, t: np.ones_like(np.asarray(x, float)),
                            flux, zero, zero, is_steady=True)
    assert exact_source_check(case, make_grid(8)) == 0.0


@pytest.mark.parametrize("name,t", [("example1", 0.0), ("example2", 0.0),
                                    ("example3", 0.5), ("example4", 0.5)])
def test_source_check_refines_at_rate_three(name, t):
    case = lookup_case(name)
    r1 = exact_source_check(case, make_grid(64), t)
    r2 = exact_source_check(case, make_grid(128), t)
    assert np.log2(r1 / r2) >= 3.0


def test_initial_field_matches_exact():
    case = lookup_case("example3")
    g = make_grid(16)
    u0 = case.initial_u0(g)
    assert np.allclose(u0.values, 0.0)
