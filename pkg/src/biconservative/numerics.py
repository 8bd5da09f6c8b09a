"""Scalar numeric kernels shared by every other module.

Four families of operations live here:

* bracketed root finding (Brent's method, deterministic),
* adaptive quadrature that understands declared endpoint power
  singularities of the form ``(t - a)**p`` with ``p > -1``,
* inversion of strictly monotone scalar functions,
* finite-difference derivatives of order 1..3 with one Richardson
  refinement step, symmetric or one-sided.

All routines are pure functions of their arguments and keep no global
state, so they are safe to call concurrently.  Inverse-square-root
endpoint behaviour is always removed by the substitution ``t = a + s**2``
(resp. ``t = b - s**2``) before any adaptive refinement happens; naive
refinement against such an endpoint does not converge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DivergentIntegrand,
    NoConvergence,
    NoSignChange,
    OutOfRange,
    StencilOutOfDomain,
    ToleranceNotMet,
)

_EPS = float(np.finfo(float).eps)

#: Default bracket-width tolerance for root solves.
ROOT_TOL = 1e-12

#: Default absolute tolerance for quadrature.
QUAD_TOL = 1e-10

#: Default relative step for finite differences (times the domain scale).
FD_STEP = 1e-4


@dataclass(frozen=True)
class RootBracket:
    """Interval ``[a, b]`` expected to straddle a sign change."""

    a: float
    b: float

    def ordered(self) -> tuple[float, float]:
        return (self.a, self.b) if self.a <= self.b else (self.b, self.a)


@dataclass(frozen=True)
class QuadratureSpec:
    """Declared endpoint behaviour and tolerances for one integral.

    ``lower_exponent`` / ``upper_exponent`` describe the worst power
    behaviour of the integrand near the endpoints: the integrand is
    assumed to be ``O((t - a)**lower_exponent)`` as ``t -> a`` and
    ``O((b - t)**upper_exponent)`` as ``t -> b``.  Exponent 0 means
    regular.  Exponents must stay above -1 or the integral diverges.
    """

    lower_exponent: float = 0.0
    upper_exponent: float = 0.0
    atol: float = QUAD_TOL
    max_subdivisions: int = 60

    def __post_init__(self) -> None:
        if self.atol <= 0:
            raise ValueError("tolerance must be positive")
        if self.lower_exponent <= -1 or self.upper_exponent <= -1:
            raise DivergentIntegrand(
                "endpoint exponent <= -1 is not integrable"
            )


def find_bracketed_root(
    f: Callable[[float], float],
    bracket: RootBracket | tuple[float, float],
    tol: float = ROOT_TOL,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` inside a sign-changing bracket, via Brent's method.

    Returns a point ``r`` with final bracket width at most ``tol``.
    Deterministic: the same inputs always produce the same output.

    Raises ``NoSignChange`` when ``f(a) * f(b) >= 0`` (an exact zero at
    an endpoint is accepted and returned directly), and ``NoConvergence``
    when the iteration budget runs out.
    """
    if not isinstance(bracket, RootBracket):
        bracket = RootBracket(*bracket)
    a, b = bracket.ordered()
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoSignChange(f"f({a}) = {fa} and f({b}) = {fb} have equal signs")

    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        m = 0.5 * (c - b)
        if abs(m) <= tol1 or fb == 0.0:
            return b
        if abs(e) < tol1 or abs(fa) <= abs(fb):
            d = e = m
        else:
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol1 else (tol1 if m > 0 else -tol1)
        fb = f(b)
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            e = d = b - a
    raise NoConvergence(f"no root to width {tol} after {max_iter} iterations")


def _adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    atol: float,
    max_depth: int,
) -> float:
    """Plain adaptive Simpson on a regular integrand."""

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    if a == b:
        return 0.0
    # Panels narrower than this are accepted as-is: below it the integrand
    # is dominated by evaluation noise and refinement cannot help.
    width_floor = max((b - a) * 1e-13, 8.0 * _EPS * max(abs(a), abs(b)))

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        m = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + m), 0.5 * (m + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(lo, m, flo, flm, fmid)
        right = simpson(m, hi, fmid, frm, fhi)
        err = left + right - whole
        if abs(err) <= 15.0 * tol or (hi - lo) <= width_floor:
            return left + right + err / 15.0
        if depth >= max_depth:
            raise ToleranceNotMet(
                f"subdivision limit {max_depth} reached on [{lo}, {hi}]"
            )
        # Halve the budget but never chase below the rounding noise of the
        # panel itself, or refinement near a clamped endpoint cannot stop.
        half = max(0.5 * tol, 4.0 * _EPS * (abs(left) + abs(right)))
        return recurse(lo, m, flo, flm, fmid, left, half, depth + 1) + recurse(
            m, hi, fmid, frm, fhi, right, half, depth + 1
        )

    fa_, fm_, fb_ = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa_, fm_, fb_)
    return recurse(a, b, fa_, fm_, fb_, whole, atol, 0)


def _substitution_order(p: float) -> int:
    """Power ``k`` such that ``t = a + s**k`` bounds ``(t-a)**p`` near ``a``."""
    if p >= 0.0:
        return 1
    if p <= -1.0:
        raise DivergentIntegrand(f"exponent {p} is not integrable")
    k = 2
    while k * (1.0 + p) - 1.0 < 0.0:
        k += 1
    return k


def integrate_singular(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integral of ``f`` over ``[a, b]`` honouring declared singularities.

    Singular endpoints are removed by the power substitution before the
    adaptive pass, e.g. exponent ``-1/2`` at the lower end becomes
    ``t = a + s**2`` and the transformed integrand is regular at ``s = 0``.
    The transformed integrand is never evaluated exactly at a singular
    endpoint.
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return 0.0
    if b < a:
        flipped = QuadratureSpec(
            spec.upper_exponent, spec.lower_exponent, spec.atol, spec.max_subdivisions
        )
        return -integrate_singular(f, b, a, flipped)

    lower_k = _substitution_order(spec.lower_exponent)
    upper_k = _substitution_order(spec.upper_exponent)
    if lower_k == 1 and upper_k == 1:
        return _adaptive_simpson(f, a, b, spec.atol, spec.max_subdivisions)

    mid = 0.5 * (a + b)
    total = 0.0
    atol = spec.atol / 2.0
    # The substituted variable is clamped a few ulps away from the endpoint
    # so f is never evaluated where its argument rounds onto the singularity;
    # the mass omitted this way is O(machine eps), far below any tolerance.
    scale = max(abs(a), abs(b), 1.0)
    if lower_k > 1:
        floor = (4.0 * _EPS * scale) ** (1.0 / lower_k)

        def lower_sub(s: float, k: int = lower_k) -> float:
            s = max(s, floor)
            return k * s ** (k - 1) * f(a + s**k)

        total += _adaptive_simpson(
            lower_sub, 0.0, (mid - a) ** (1.0 / lower_k), atol, spec.max_subdivisions
        )
    else:
        total += _adaptive_simpson(f, a, mid, atol, spec.max_subdivisions)
    if upper_k > 1:
        floor = (4.0 * _EPS * scale) ** (1.0 / upper_k)

        def upper_sub(s: float, k: int = upper_k) -> float:
            s = max(s, floor)
            return k * s ** (k - 1) * f(b - s**k)

        total += _adaptive_simpson(
            upper_sub, 0.0, (b - mid) ** (1.0 / upper_k), atol, spec.max_subdivisions
        )
    else:
        total += _adaptive_simpson(f, mid, b, atol, spec.max_subdivisions)
    return total


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def cumulative_integral(
    f: Callable[[np.ndarray], np.ndarray],
    nodes: np.ndarray,
    order: int = 16,
) -> np.ndarray:
    """Cumulative integral of a vectorized integrand over a node sequence.

    Applies fixed-order Gauss-Legendre on every panel ``[nodes[i],
    nodes[i+1]]`` and cumulatively sums, returning an array aligned with
    ``nodes`` whose first entry is 0.  The integrand must be regular on
    every panel (singular ends are handled by the caller's choice of
    panel variable).  This is the vectorized workhorse for building the
    frozen lookup tables.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 2:
        raise ValueError("need a 1-d array of at least two nodes")
    t, w = _gauss_legendre(order)
    lo = nodes[:-1]
    half = 0.5 * (nodes[1:] - lo)
    x = lo[:, None] + half[:, None] * (t[None, :] + 1.0)
    vals = f(x)
    panel = half * (vals @ w)
    out = np.empty(nodes.size)
    out[0] = 0.0
    np.cumsum(panel, out=out[1:])
    return out


def invert_monotone(
    f: Callable[[float], float],
    y: float,
    domain: tuple[float, float],
    tol: float = ROOT_TOL,
) -> float:
    """Solve ``f(x) = y`` for a strictly monotone ``f`` on ``domain``.

    Raises ``OutOfRange`` when ``y`` is not between ``f(lo)`` and
    ``f(hi)``.
    """
    lo, hi = domain
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    fmin, fmax = min(flo, fhi), max(flo, fhi)
    if not (fmin <= y <= fmax):
        raise OutOfRange(f"target {y} outside function range [{fmin}, {fmax}]")
    return find_bracketed_root(lambda x: f(x) - y, RootBracket(lo, hi), tol)


# Stencils: offsets (in units of h) and weights (to be divided by h**order).
# Symmetric stencils have truncation error O(h**2); so do these one-sided
# ones, which is what makes a single Richardson step give O(h**4).
_STENCILS = {
    ("symmetric", 1): ((-1.0, 1.0), (-0.5, 0.5)),
    ("symmetric", 2): ((-1.0, 0.0, 1.0), (1.0, -2.0, 1.0)),
    ("symmetric", 3): ((-2.0, -1.0, 1.0, 2.0), (-0.5, 1.0, -1.0, 0.5)),
    ("right", 1): ((0.0, 1.0, 2.0), (-1.5, 2.0, -0.5)),
    ("right", 2): ((0.0, 1.0, 2.0, 3.0), (2.0, -5.0, 4.0, -1.0)),
    ("right", 3): ((0.0, 1.0, 2.0, 3.0, 4.0), (-2.5, 9.0, -12.0, 7.0, -1.5)),
}


def _stencil_estimate(f, x, order, h, side):
    if side == "left":
        offsets, weights = _STENCILS[("right", order)]
        sign = -1.0 if order % 2 else 1.0
        acc = sum(w * f(x - o * h) for o, w in zip(offsets, weights))
        return sign * acc / h**order
    offsets, weights = _STENCILS[(side, order)]
    acc = sum(w * f(x + o * h) for o, w in zip(offsets, weights))
    return acc / h**order


def fd_derivative(
    f: Callable[[float], float],
    x: float,
    order: int = 1,
    h: float = FD_STEP,
    side: str = "symmetric",
    domain: tuple[float, float] | None = None,
) -> float:
    """Finite-difference derivative of ``f`` at ``x`` of order 1..3.

    One Richardson extrapolation step combines the estimates at steps
    ``h`` and ``h/2``; with the second-order base stencils the result has
    truncation error ``O(h**4)``.  ``side`` selects a symmetric stencil
    or a fully one-sided one (useful at gluing points).  When ``domain``
    is given, any stencil node falling outside raises
    ``StencilOutOfDomain``.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if side not in ("symmetric", "left", "right"):
        raise ValueError("side must be 'symmetric', 'left' or 'right'")
    if h <= 0:
        raise ValueError("step must be positive")
    if domain is not None:
        offsets, _ = _STENCILS[("right" if side == "left" else side, order)]
        reach = max(abs(o) for o in offsets) * h
        lo = x - reach if side in ("symmetric", "left") else x
        hi = x + reach if side in ("symmetric", "right") else x
        if lo < domain[0] or hi > domain[1]:
            raise StencilOutOfDomain(
                f"stencil [{lo}, {hi}] exceeds domain {domain}"
            )
    coarse = _stencil_estimate(f, x, order, h, side)
    fine = _stencil_estimate(f, x, order, 0.5 * h, side)
    return (4.0 * fine - coarse) / 3.0
