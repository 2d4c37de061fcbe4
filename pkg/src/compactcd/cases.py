"""Manufactured convection-diffusion problems and their registry.

Each case packages a diffusion coefficient kappa(x, y, t), a flux pair
(alpha(u), beta(u)) with u-derivatives, an exact solution u, and a source
f derived by hand from the expanded operator

    u_t - kappa*Lap(u) - kappa_x*u_x - kappa_y*u_y
        + alpha_u(u)*u_x + beta_u(u)*u_y = f.

The hand-derived sources are long chain-rule expressions, so every case
must pass the finite-difference residual oracle (exact_source_check)
before it is trusted; the registry tests enforce this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import GridSpec, ScalarField, sample_scalar


class CaseError(KeyError):
    """Unknown case name or invalid case data."""


@dataclass(frozen=True)
class FluxSpec:
    """Nonlinear flux pair F(u) = (alpha(u), beta(u)) with u-derivatives."""

    alpha: Callable
    beta: Callable
    alpha_u: Callable
    beta_u: Callable

    def check_derivatives(self, u_samples: np.ndarray, delta: float = 1e-6,
                          tol: float = 1e-4) -> None:
        """Centered-quotient self-check of alpha_u and beta_u."""
        for fn, dfn, name in ((self.alpha, self.alpha_u, "alpha"),
                              (self.beta, self.beta_u, "beta")):
            quot = (fn(u_samples + delta) - fn(u_samples - delta)) / (2 * delta)
            err = np.max(np.abs(quot - dfn(u_samples)))
            if err > tol:
                raise CaseError(f"{name}_u mismatches difference quotient: {err:.3e}")


@dataclass(frozen=True)
class ManufacturedCase:
    """A registered problem with exact solution and closed-form source."""

    name: str
    kappa: Callable                 # kappa(x, y, t) > 0
    flux: FluxSpec
    exact_u: Callable               # u(x, y, t)
    source_f: Callable              # f(x, y, t), hand-derived
    is_steady: bool
    # Optional analytic (m, n) derivative of u, used by consistency probes.
    exact_deriv: Optional[Callable] = None
    # Optional analytic (m, n) derivative of psi = -f/kappa.  Sharp-layer
    # sources need this: sampling-based differencing of an under-resolved
    # layer pollutes the order-5 table entries that feed the stencil
    # right-hand side.
    psi_deriv: Optional[Callable] = None

    @property
    def boundary_g(self) -> Callable:
        """Dirichlet data is the exact solution's trace."""
        return self.exact_u

    def initial_u0(self, grid: GridSpec) -> ScalarField:
        return sample_scalar(self.exact_u, grid, 0.0)


_REGISTRY: dict[str, ManufacturedCase] = {}


def register_case(case: ManufacturedCase, replace: bool = False) -> None:
    if case.name in _REGISTRY and not replace:
        raise CaseError(f"case {case.name!r} already registered")
    _REGISTRY[case.name] = case


def registered_names() -> list[str]:
    return sorted(_REGISTRY)


def lookup_case(name: str) -> ManufacturedCase:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise CaseError(
            f"unknown case {name!r}; registered cases: {', '.join(registered_names())}"
        ) from None


def fd_weights(offsets, order: int) -> np.ndarray:
    """Unit-spacing finite-difference weights for one derivative order.

    Solves the Vandermonde moment system directly, so the weights are
    independent of the production differencing code and serve as an
    oracle-side building block.
    """
    offs = np.asarray(offsets, dtype=float)
    npts = len(offs)
    v = np.vander(offs, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(v, rhs)


_ORACLE_OFFS = np.arange(-3, 4)  # 7-point centered, 6th-order accurate
_ORACLE_W1 = fd_weights(_ORACLE_OFFS, 1)
_ORACLE_W2 = fd_weights(_ORACLE_OFFS, 2)


def _oracle_derivs(fn, grid: GridSpec, t: float):
    """(values, d/dx, d/dy, Laplacian) of fn at the grid nodes.

    Uses 7-point centered stencils at spacing h on an extended coordinate
    set, so fn is evaluated up to 3h outside the closed square.  All
    registered cases are entire in x and y; user cases must be smooth on a
    slightly larger box for this check.
    """
    n, h = grid.n_cells, grid.h
    ext = np.arange(-3, n + 4) * h
    X, Y = np.meshgrid(ext, ext, indexing="ij")
    vals = np.broadcast_to(np.asarray(fn(X, Y, t), dtype=float), X.shape)

    def conv(arr, w, axis):
        out = np.zeros((n + 1, n + 1))
        for off, c in zip(_ORACLE_OFFS, w):
            lo = 3 + off
            sl = slice(lo, lo + n + 1)
            out += c * (arr[sl, 3:n + 4] if axis == 0 else arr[3:n + 4, sl])
        return out

    center = vals[3:n + 4, 3:n + 4]
    d_x = conv(vals, _ORACLE_W1, 0) / h
    d_y = conv(vals, _ORACLE_W1, 1) / h
    lap = (conv(vals, _ORACLE_W2, 0) + conv(vals, _ORACLE_W2, 1)) / h**2
    return center, d_x, d_y, lap


def exact_source_check(case: ManufacturedCase, grid: GridSpec,
                       t: float = 0.0) -> float:
    """Max interior residual |f_closed_form - f_numeric|.

    f_numeric rebuilds the expanded operator from samples of the exact
    solution: spatial derivatives by 6th-order centered stencils built
    here (independent of the production differencing module), the time
    derivative by a centered quotient with step h^2.  Guards the
    hand-derived sources against transcription slips.
    """
    u, u_x, u_y, u_lap = _oracle_derivs(case.exact_u, grid, t)
    kap, k_x, k_y, _ = _oracle_derivs(case.kappa, grid, t)
    f_num = (-kap * u_lap - k_x * u_x - k_y * u_y
             + case.flux.alpha_u(u) * u_x
             + case.flux.beta_u(u) * u_y)
    if not case.is_steady:
        dt = grid.h**2
        up = sample_scalar(case.exact_u, grid, t + dt)
        um = sample_scalar(case.exact_u, grid, t - dt)
        f_num = f_num + (up.values - um.values) / (2 * dt)
    f_exact = sample_scalar(case.source_f, grid, t)
    diff = np.abs(f_exact.values - f_num)[1:-1, 1:-1]
    return float(np.max(diff))


# ---------------------------------------------------------------------------
# Built-in cases
# ---------------------------------------------------------------------------

_KINV = 10.0  # 1/kappa for the sharp-layer cases (kappa = 1/10)


def _layer(s):
    """tanh((1 - s)/kappa) for kappa = 1/10."""
    return np.tanh(_KINV * (1.0 - s))


def _layer_d1(s):
    t = _layer(s)
    return -_KINV * (1.0 - t * t)


def _layer_d2(s):
    t = _layer(s)
    return -2.0 * _KINV**2 * t * (1.0 - t * t)


def _bump(s):
    """s * tanh((1 - s)/kappa) and its first two derivatives."""
    return s * _layer(s)


def _bump_d1(s):
    return _layer(s) + s * _layer_d1(s)


def _bump_d2(s):
    return 2.0 * _layer_d1(s) + s * _layer_d2(s)


def _tanh_deriv_polys(max_k: int) -> list:
    """Coefficient rows of d^k tanh(w)/dw^k as polynomials in tanh(w).

    S_1 = 1 - T^2 and S_{k+1} = S_k'(T) (1 - T^2); rows are ascending
    coefficient lists in T.
    """
    polys = [np.array([1.0]), np.array([1.0, 0.0, -1.0])]  # S_0 = T? see below
    # Store S_0 = T itself so indexing matches derivative order.
    polys[0] = np.array([0.0, 1.0])
    for _ in range(2, max_k + 1):
        prev = polys[-1]
        dprev = prev[1:] * np.arange(1, len(prev))
        one_minus = np.array([1.0, 0.0, -1.0])
        new = np.convolve(dprev, one_minus) if len(dprev) else np.zeros(1)
        polys.append(new)
    return polys


_TANH_POLYS = _tanh_deriv_polys(8)


def _poly_in_t(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for c in coeffs[::-1]:
        out = out * t + c
    return out


def _layer_deriv(k: int, s) -> np.ndarray:
    """k-th derivative of tanh((1 - s)/kappa) for kappa = 1/10."""
    t = _layer(np.asarray(s, dtype=float))
    if k == 0:
        return t
    return (-_KINV) ** k * _poly_in_t(_TANH_POLYS[k], t)


def _bump_deriv(k: int, s) -> np.ndarray:
    """k-th derivative of s * tanh((1 - s)/kappa)."""
    s = np.asarray(s, dtype=float)
    if k == 0:
        return s * _layer_deriv(0, s)
    return s * _layer_deriv(k, s) + k * _layer_deriv(k - 1, s)


def _layer_convection_deriv(m: int, n: int, x, y) -> np.ndarray:
    """(m, n) derivative of w*(w_x + w_y) for w = bump(x) bump(y)."""
    ppx = sum(math.comb(m, i) * _bump_deriv(i, x) * _bump_deriv(m - i + 1, x)
              for i in range(m + 1))
    sqy = sum(math.comb(n, j) * _bump_deriv(j, y) * _bump_deriv(n - j, y)
              for j in range(n + 1))
    sqx = sum(math.comb(m, i) * _bump_deriv(i, x) * _bump_deriv(m - i, x)
              for i in range(m + 1))
    ppy = sum(math.comb(n, j) * _bump_deriv(j, y) * _bump_deriv(n - j + 1, y)
              for j in range(n + 1))
    return ppx * sqy + sqx * ppy


def _layer_source_deriv(m: int, n: int, x, y, e: float, e_dot: float
                        ) -> np.ndarray:
    """(m, n) derivative of f for u = e(t) bump(x) bump(y), kappa = 1/10.

    e is the time amplitude and e_dot its time derivative (0 and 1 give
    the steady variant with e = 1).
    """
    px_m, py_n = _bump_deriv(m, x), _bump_deriv(n, y)
    diff = 0.1 * (_bump_deriv(m + 2, x) * py_n + px_m * _bump_deriv(n + 2, y))
    return (e_dot * px_m * py_n - e * diff
            + e * e * _layer_convection_deriv(m, n, x, y))


def _make_example1() -> ManufacturedCase:
    # u = sin(3x) cos(7y), kappa = 2 + sin(5x - 2y),
    # alpha = cos(u), beta = sin(u)
    def kappa(x, y, t):
        return 2.0 + np.sin(5.0 * x - 2.0 * y)

    def exact_u(x, y, t):
        return np.sin(3.0 * x) * np.cos(7.0 * y)

    def exact_deriv(m, n, x, y, t):
        return (3.0**m * 7.0**n
                * np.sin(3.0 * x + m * np.pi / 2)
                * np.cos(7.0 * y + n * np.pi / 2))

    def source_f(x, y, t):
        u = np.sin(3.0 * x) * np.cos(7.0 * y)
        u_x = 3.0 * np.cos(3.0 * x) * np.cos(7.0 * y)
        u_y = -7.0 * np.sin(3.0 * x) * np.sin(7.0 * y)
        cosw = np.cos(5.0 * x - 2.0 * y)
        # Lap(u) = -58 u; kappa_x = 5 cos(w), kappa_y = -2 cos(w)
        return (58.0 * (2.0 + np.sin(5.0 * x - 2.0 * y)) * u
                - 5.0 * cosw * u_x + 2.0 * cosw * u_y
                - np.sin(u) * u_x + np.cos(u) * u_y)

    flux = FluxSpec(alpha=np.cos, beta=np.sin,
                    alpha_u=lambda u: -np.sin(u), beta_u=np.cos)
    return ManufacturedCase("example1", kappa, flux, exact_u, source_f,
                            is_steady=True, exact_deriv=exact_deriv)


def _make_example2() -> ManufacturedCase:
    # u = x y tanh((1-x)/kappa) tanh((1-y)/kappa), kappa = 1/10,
    # alpha = beta = u^2/2 (steady viscous Burgers-type convection)
    def kappa(x, y, t):
        return np.full_like(np.asarray(x, dtype=float), 0.1)

    def exact_u(x, y, t):
        return _bump(x) * _bump(y)

    def source_f(x, y, t):
        u = _bump(x) * _bump(y)
        u_x = _bump_d1(x) * _bump(y)
        u_y = _bump(x) * _bump_d1(y)
        lap = _bump_d2(x) * _bump(y) + _bump(x) * _bump_d2(y)
        return -0.1 * lap + u * (u_x + u_y)

    def psi_deriv(m, n, x, y, t):
        # psi = -f/kappa = -10 f; steady amplitude e = 1, e_dot = 0
        return -_KINV * _layer_source_deriv(m, n, x, y, 1.0, 0.0)

    flux = FluxSpec(alpha=lambda u: 0.5 * u**2, beta=lambda u: 0.5 * u**2,
                    alpha_u=lambda u: u, beta_u=lambda u: u)
    return ManufacturedCase("example2", kappa, flux, exact_u, source_f,
                            is_steady=True, psi_deriv=psi_deriv)


def _make_example3() -> ManufacturedCase:
    # u = sin(3t) cos(2x - y), kappa = 3 + cos(x + 3y + t),
    # alpha = -u^3/3, beta = sin(u)
    def kappa(x, y, t):
        return 3.0 + np.cos(x + 3.0 * y + t)

    def exact_u(x, y, t):
        return np.sin(3.0 * t) * np.cos(2.0 * x - y)

    def exact_deriv(m, n, x, y, t):
        return (np.sin(3.0 * t) * 2.0**m * (-1.0)**n
                * np.cos(2.0 * x - y + (m + n) * np.pi / 2))

    def source_f(x, y, t):
        s = 2.0 * x - y
        u = np.sin(3.0 * t) * np.cos(s)
        u_t = 3.0 * np.cos(3.0 * t) * np.cos(s)
        u_x = -2.0 * np.sin(3.0 * t) * np.sin(s)
        u_y = np.sin(3.0 * t) * np.sin(s)
        sinw = np.sin(x + 3.0 * y + t)
        # Lap(u) = -5 u; kappa_x = -sin(w), kappa_y = -3 sin(w)
        return (u_t + 5.0 * (3.0 + np.cos(x + 3.0 * y + t)) * u
                + sinw * (u_x + 3.0 * u_y)
                - u * u * u_x + np.cos(u) * u_y)

    flux = FluxSpec(alpha=lambda u: -u**3 / 3.0, beta=np.sin,
                    alpha_u=lambda u: -u**2, beta_u=np.cos)
    return ManufacturedCase("example3", kappa, flux, exact_u, source_f,
                            is_steady=False, exact_deriv=exact_deriv)


def _make_example4() -> ManufacturedCase:
    # u = (exp(t) - 1) x y tanh((1-x)/kappa) tanh((1-y)/kappa), kappa = 1/10,
    # alpha = beta = u^2/2
    def kappa(x, y, t):
        return np.full_like(np.asarray(x, dtype=float), 0.1)

    def exact_u(x, y, t):
        return (np.exp(t) - 1.0) * _bump(x) * _bump(y)

    def source_f(x, y, t):
        e = np.exp(t) - 1.0
        w = _bump(x) * _bump(y)
        w_x = _bump_d1(x) * _bump(y)
        w_y = _bump(x) * _bump_d1(y)
        lap_w = _bump_d2(x) * _bump(y) + _bump(x) * _bump_d2(y)
        return np.exp(t) * w - 0.1 * e * lap_w + e * e * w * (w_x + w_y)

    def psi_deriv(m, n, x, y, t):
        e = np.exp(t) - 1.0
        return -_KINV * _layer_source_deriv(m, n, x, y, e, np.exp(t))

    flux = FluxSpec(alpha=lambda u: 0.5 * u**2, beta=lambda u: 0.5 * u**2,
                    alpha_u=lambda u: u, beta_u=lambda u: u)
    return ManufacturedCase("example4", kappa, flux, exact_u, source_f,
                            is_steady=False, psi_deriv=psi_deriv)


for _case in (_make_example1(), _make_example2(), _make_example3(),
              _make_example4()):
    register_case(_case)
