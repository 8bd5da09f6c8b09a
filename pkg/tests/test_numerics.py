"""Kernel tests: roots, singular quadrature, inversion, finite differences."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biconservative import numerics
from biconservative.errors import (
    DivergentIntegrand,
    NoSignChange,
    OutOfRange,
    StencilOutOfDomain,
)
from biconservative.numerics import (
    QuadratureSpec,
    RootBracket,
    cumulative_integral,
    fd_derivative,
    find_bracketed_root,
    integrate_singular,
    invert_monotone,
)

# Frozen by an independent plain-bisection oracle (tests/oracles.py) run at
# tolerance 1e-14: positive root of 16/9 - 16 x^2 + x^(3/2) on [9/4096, 1].
KAPPA01_CT1 = 0.352400177715175


def test_root_sqrt2():
    r = find_bracketed_root(lambda x: x * x - 2.0, RootBracket(1.0, 2.0), tol=1e-12)
    assert r == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_root_odd_function():
    r = find_bracketed_root(lambda x: x, (-1.0, 1.0), tol=1e-12)
    assert abs(r) < 1e-12


def test_root_quartic_fixture():
    f = lambda x: 16.0 / 9.0 - 16.0 * x * x + x**1.5
    r = find_bracketed_root(f, (9.0 / 4096.0, 1.0), tol=1e-13)
    assert r == pytest.approx(KAPPA01_CT1, abs=1e-12)
    from .oracles import bisection_root

    assert bisection_root(f, 9.0 / 4096.0, 1.0) == pytest.approx(r, abs=1e-12)


def test_root_requires_sign_change():
    with pytest.raises(NoSignChange):
        find_bracketed_root(lambda x: x * x + 1.0, (-1.0, 1.0))


def test_root_accepts_endpoint_zero():
    assert find_bracketed_root(lambda x: x - 1.0, (1.0, 2.0)) == 1.0


@pytest.mark.parametrize("tol", [1e-6, 1e-8, 1e-10])
def test_root_monotone_in_tolerance(tol):
    f = lambda x: math.cos(x) - x
    wide = find_bracketed_root(f, (0.0, 1.0), tol=tol)
    tight = find_bracketed_root(f, (0.0, 1.0), tol=tol / 2.0)
    assert abs(wide - tight) <= tol


def test_integral_inverse_sqrt_lower():
    spec = QuadratureSpec(lower_exponent=-0.5, atol=1e-12)
    val = integrate_singular(lambda t: 1.0 / math.sqrt(t), 0.0, 1.0, spec)
    assert val == pytest.approx(2.0, abs=1e-11)


def test_integral_inverse_sqrt_upper():
    spec = QuadratureSpec(upper_exponent=-0.5, atol=1e-12)
    val = integrate_singular(lambda t: 1.0 / math.sqrt(1.0 - t), 0.0, 1.0, spec)
    assert val == pytest.approx(2.0, abs=1e-11)


def test_integral_linear():
    assert integrate_singular(lambda t: t, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_integral_reversed_limits():
    assert integrate_singular(lambda t: t, 1.0, 0.0) == pytest.approx(-0.5, abs=1e-12)


def test_divergent_exponent_rejected():
    with pytest.raises(DivergentIntegrand):
        QuadratureSpec(lower_exponent=-1.0)


@given(
    st.lists(st.floats(-3.0, 3.0), min_size=4, max_size=4),
)
@settings(max_examples=40, deadline=None)
def test_integral_cubic_exactness(coeffs):
    # Simpson is exact on cubics, so the adaptive pass must be machine-exact.
    a3, a2, a1, a0 = coeffs
    f = lambda t: ((a3 * t + a2) * t + a1) * t + a0
    exact = a3 / 4.0 + a2 / 3.0 + a1 / 2.0 + a0
    val = integrate_singular(f, 0.0, 1.0)
    assert val == pytest.approx(exact, abs=1e-12)


def test_substituted_vs_plain_on_regular_integrand():
    # Declaring a (spurious) singular endpoint must not change the value
    # beyond twice the requested tolerance.
    f = lambda t: math.exp(-t) * (1.0 + t * t)
    plain = integrate_singular(f, 0.0, 2.0, QuadratureSpec(atol=1e-11))
    subbed = integrate_singular(
        f, 0.0, 2.0, QuadratureSpec(lower_exponent=-0.5, upper_exponent=-0.5, atol=1e-11)
    )
    assert abs(plain - subbed) <= 2e-11


def test_cumulative_integral_matches_antiderivative():
    nodes = np.linspace(0.0, 2.0, 257)
    vals = cumulative_integral(lambda x: np.cos(x), nodes)
    assert np.max(np.abs(vals - np.sin(nodes))) < 1e-14


def test_invert_cube():
    assert invert_monotone(lambda x: x**3, 8.0, (0.0, 3.0)) == pytest.approx(2.0, abs=1e-12)


def test_invert_out_of_range():
    with pytest.raises(OutOfRange):
        invert_monotone(lambda x: x, 5.0, (0.0, 1.0))


@given(st.floats(-0.9, 0.9))
@settings(max_examples=40, deadline=None)
def test_invert_roundtrip(y):
    f = lambda x: math.sinh(x)
    x = invert_monotone(f, y, (-2.0, 2.0))
    assert f(x) == pytest.approx(y, abs=1e-11)


def test_fd_square():
    assert fd_derivative(lambda x: x * x, 1.0, order=1, h=1e-4) == pytest.approx(2.0, abs=1e-11)


def test_fd_sin_third_order():
    val = fd_derivative(math.sin, 0.0, order=3, h=1e-2)
    assert val == pytest.approx(-1.0, abs=1e-7)


@pytest.mark.parametrize("order", [1, 2, 3])
@pytest.mark.parametrize("side", ["symmetric", "left", "right"])
def test_fd_polynomial_exactness(order, side):
    # Degree order+1 polynomials are differentiated exactly up to rounding.
    coeffs = [0.7, -1.3, 0.4, 2.0, -0.6][: order + 2]
    poly = np.polynomial.Polynomial(coeffs)
    want = poly.deriv(order)(0.3)
    got = fd_derivative(poly, 0.3, order=order, h=0.05, side=side)
    assert got == pytest.approx(want, abs=1e-9)


def test_fd_one_sided_matches_symmetric_for_smooth():
    f = lambda x: math.exp(0.5 * x)
    sym = fd_derivative(f, 1.0, order=2, h=1e-3)
    right = fd_derivative(f, 1.0, order=2, h=1e-3, side="right")
    assert sym == pytest.approx(right, abs=1e-8)
    assert sym == pytest.approx(0.25 * math.exp(0.5), abs=1e-9)


def test_fd_domain_guard():
    with pytest.raises(StencilOutOfDomain):
        fd_derivative(math.sqrt, 0.0, order=1, h=1e-3, domain=(0.0, 1.0))
    # One-sided stencil stays inside.
    val = fd_derivative(math.sqrt, 0.0 + 1e-12, order=1, h=1e-3, side="right", domain=(0.0, 1.0))
    assert math.isfinite(val)


def test_default_tolerances_exported():
    assert numerics.ROOT_TOL == 1e-12
    assert numerics.QUAD_TOL == 1e-10
