"""The abstract complete metric family and its curvature bookkeeping.

One family per real constant ``cminus1``.  On the strip
``(0, xi_max) x R`` the metric reads

    g(xi, theta) = (1/xi^2) * ( 3/T(xi) d xi^2 + d theta^2 ),
    T(xi) = -xi^(8/3) + cminus1 * xi^2 + 3,

where ``xi_max`` is the unique positive root of ``T``.  The coordinate

    rho(xi) = - integral_{xi_base}^{xi} sqrt(3 / (tau^2 T(tau))) d tau

is strictly decreasing, tends to a finite negative limit ``rho_limit``
as ``xi -> xi_max`` (inverse-square-root endpoint) and to +infinity as
``xi -> 0`` (logarithmically).  Writing ``h(omega) = 1/xi(rho_limit +
omega)`` and extending evenly,

    Gamma(omega) = h(|omega|),       Gamma(0) = 1/xi_max,

turns ``Gamma^2 d theta^2 + d omega^2`` into a complete metric on R^2
whose Gaussian curvature is ``-Gamma''/Gamma``.  The inverse function
``xi(rho)`` is tabulated once per family on nodes chosen so the
integration variable is regular everywhere (a sqrt-shifted variable at
the seam, a logarithmic one in the tail) and then frozen behind a C^2
spline; after construction every evaluation is read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    CertificateFailed,
    NegativeRadicand,
    NonPositiveXi,
    OutOfDomain,
    TableNotFrozen,
)
from .numerics import (
    QuadratureSpec,
    RootBracket,
    cumulative_integral,
    fd_derivative,
    find_bracketed_root,
    integrate_singular,
)

#: Valid radial window: evaluations outside raise ``OutOfDomain``.
XI_FLOOR = 1e-8
XI_CEIL_MARGIN = 1e-10


def metric_factor(xi: float | np.ndarray, cminus1: float) -> float | np.ndarray:
    """T(xi) = -xi^(8/3) + cminus1 xi^2 + 3 for xi > 0."""
    arr = np.asarray(xi, dtype=float)
    if np.any(arr <= 0.0):
        raise NonPositiveXi("metric factor needs xi > 0")
    out = -(arr ** (8.0 / 3.0)) + cminus1 * arr * arr + 3.0
    return out if out.ndim else float(out)


def _factor_near_root(depth: float | np.ndarray, xi_max: float, cminus1: float):
    """T(xi_max - depth) evaluated without cancellation, using T(xi_max) = 0.

    T(xi) = (xi_max^(8/3) - xi^(8/3)) - cminus1 (xi_max^2 - xi^2); both
    differences are O(depth) and are computed through expm1/log1p so the
    result keeps full relative precision arbitrarily close to the root.
    """
    d = np.asarray(depth, dtype=float)
    pow_term = -(xi_max ** (8.0 / 3.0)) * np.expm1((8.0 / 3.0) * np.log1p(-d / xi_max))
    sq_term = d * (2.0 * xi_max - d)
    out = pow_term - cminus1 * sq_term
    return out if out.ndim else float(out)


def metric_factor_root(cminus1: float) -> float:
    """The unique positive root ``xi_max`` of the metric factor.

    For positive constants the root lies beyond the interior maximum at
    ``(3 cminus1 / 4)^(3/2)``, which seeds the bracket.
    """
    lo = (3.0 * cminus1 / 4.0) ** 1.5 if cminus1 > 0.0 else 1e-9
    hi = max(lo, 1.0)
    f = lambda x: metric_factor(x, cminus1)
    while f(hi) > 0.0:
        hi *= 2.0
    return find_bracketed_root(f, RootBracket(lo, hi), tol=1e-14)


def gauss_curvature(xi: float, cminus1: float) -> tuple[float, float, float]:
    """Curvature data of the strip metric at ``xi``.

    Returns ``(K, K', grad_component)`` where ``K = -xi^(8/3)/9 - 1``,
    ``K' = -(8/27) xi^(5/3)`` and ``grad_component = (xi^2 T / 3) K'`` is
    the xi-component of grad K (it needs ``T > 0``, i.e. an interior
    point).
    """
    if xi <= 0.0:
        raise NonPositiveXi("curvature needs xi > 0")
    K = -(xi ** (8.0 / 3.0)) / 9.0 - 1.0
    Kp = -(8.0 / 27.0) * xi ** (5.0 / 3.0)
    T = metric_factor(xi, cminus1)
    if T <= 0.0:
        raise OutOfDomain("gradient component only defined where T > 0")
    return K, Kp, (xi * xi * T / 3.0) * Kp


@dataclass
class MetricSample:
    """Metric components of one chart at one point (2x2, symmetric)."""

    chart: str
    coords: tuple[float, float]
    g11: float
    g22: float
    g12: float = 0.0

    def __post_init__(self) -> None:
        det = self.g11 * self.g22 - self.g12 * self.g12
        if not (self.g11 > 0.0 and det > 0.0 and np.isfinite(det)):
            raise OutOfDomain(f"metric sample not positive definite: {self}")


@dataclass
class IntrinsicParams:
    """One frozen intrinsic family.

    Carries the defining constant, the derived endpoints and the frozen
    ``xi(rho)`` table.  Construction (``build``) is single threaded;
    afterwards all evaluations are read-only.
    """

    cminus1: float
    xi_max: float
    xi_base: float
    rho_limit: float
    rho_reach: float
    rho_nodes: np.ndarray = field(repr=False)
    xi_nodes: np.ndarray = field(repr=False)
    _xi_of_rho: CubicSpline | None = field(default=None, repr=False)
    _rho_cache: dict = field(default_factory=dict, repr=False)

    # -- construction -------------------------------------------------

    @classmethod
    def build(
        cls,
        cminus1: float,
        xi_base: float | None = None,
        rho_reach: float = 13.0,
        seam_nodes: int = 6144,
        tail_nodes: int = 16384,
    ) -> "IntrinsicParams":
        xi_max = metric_factor_root(cminus1)
        if xi_base is None:
            xi_base = 0.5 * xi_max
        if not (0.0 < xi_base < xi_max):
            raise OutOfDomain("base point must lie inside (0, xi_max)")

        # Seam segment xi in [xi_base, xi_max], variable s = sqrt(xi_max - xi).
        # d rho/d s = 2 sqrt(3 / (xi^2 * (T/depth))) is smooth up to s = 0.
        s_max = math.sqrt(xi_max - xi_base)
        s = np.linspace(0.0, s_max, seam_nodes + 1)

        def seam_speed(sv: np.ndarray) -> np.ndarray:
            depth = sv * sv
            xi = xi_max - depth
            t_over_depth = _factor_near_root(depth, xi_max, cminus1) / depth
            return 2.0 / (xi * np.sqrt(t_over_depth / 3.0))

        seam_cum = cumulative_integral(seam_speed, s)
        rho_limit = -float(seam_cum[-1])
        rho_seam = seam_cum - seam_cum[-1]  # ascending from rho_limit to 0
        xi_seam = xi_max - s * s

        # Tail segment xi in [xi_min, xi_base], variable u = log xi.
        # d rho/d u = sqrt(3 / T) tends to 1 as xi -> 0 (the log divergence).
        u_base = math.log(xi_base)
        span = max(rho_reach + 2.0, 4.0)
        for _ in range(8):
            u = np.linspace(u_base - span, u_base, tail_nodes + 1)

            def tail_speed(uv: np.ndarray) -> np.ndarray:
                return np.sqrt(3.0 / metric_factor(np.exp(uv), cminus1))

            tail_cum = cumulative_integral(tail_speed, u)
            if tail_cum[-1] >= rho_reach + 1.0:
                break
            span *= 1.5
        rho_tail = tail_cum[-1] - tail_cum  # descending... see flip below
        xi_tail = np.exp(u)

        # Merge ascending in rho: seam part covers [rho_limit, 0], tail part
        # [0, rho_tail_max]; drop the duplicated base node.
        rho_nodes = np.concatenate((rho_seam, rho_tail[::-1][1:]))
        xi_nodes = np.concatenate((xi_seam, xi_tail[::-1][1:]))
        if np.any(np.diff(rho_nodes) <= 0.0) or np.any(np.diff(xi_nodes) >= 0.0):
            raise TableNotFrozen("table nodes failed strict monotonicity")
        params = cls(
            cminus1=cminus1,
            xi_max=xi_max,
            xi_base=xi_base,
            rho_limit=rho_limit,
            rho_reach=float(rho_nodes[-1]),
            rho_nodes=rho_nodes,
            xi_nodes=xi_nodes,
        )
        params._xi_of_rho = CubicSpline(rho_nodes, xi_nodes)
        return params

    # -- coordinate changes --------------------------------------------

    def _check_xi(self, xi: float) -> float:
        ceil = self.xi_max * (1.0 - XI_CEIL_MARGIN)
        if not (XI_FLOOR <= xi <= ceil):
            raise OutOfDomain(
                f"xi={xi!r} outside the evaluation window [{XI_FLOOR}, {ceil}]"
            )
        return float(xi)

    def _stable_factor(self, t: float) -> float:
        # Direct evaluation of T loses all significance within
        # O(sqrt(eps)) of the root; switch to the factored form there.
        depth = self.xi_max - t
        if 0.0 <= depth < 0.05 * self.xi_max:
            return _factor_near_root(depth, self.xi_max, self.cminus1)
        return metric_factor(t, self.cminus1)

    def rho(self, xi: float) -> float:
        """rho(xi) by adaptive quadrature (independent of the table).

        Declares the inverse-square-root behaviour at ``xi_max``; the
        kernel removes it by substitution before refining.
        """
        xi = self._check_xi(xi)
        g = lambda t: math.sqrt(3.0 / (t * t * self._stable_factor(t)))
        near_top = xi > 0.5 * (self.xi_base + self.xi_max)
        spec = QuadratureSpec(
            upper_exponent=-0.5 if near_top else 0.0, atol=1e-12
        )
        return -integrate_singular(g, self.xi_base, xi, spec)

    def rho_limit_quadrature(self) -> float:
        """Second, table-independent route to ``rho_limit`` (adaptive)."""
        g = lambda t: math.sqrt(3.0 / (t * t * self._stable_factor(t)))
        spec = QuadratureSpec(upper_exponent=-0.5, atol=1e-12)
        return -integrate_singular(g, self.xi_base, self.xi_max, spec)

    def rho_far_tail(self, log10_xi: float) -> float:
        """rho at extremely small xi, evaluated in the log domain.

        For ``xi <= 1e-6`` the factor satisfies ``sqrt(3/T) = 1`` to full
        double precision (the correction is O(xi^2)), so the remaining
        integral is exactly logarithmic.  This confirms the divergence
        direction without ever representing the tiny xi as a float.
        """
        if log10_xi > -6.0:
            return self.rho(10.0**log10_xi)
        if "rho_cut" not in self._rho_cache:
            self._rho_cache["rho_cut"] = self.rho(1e-6)
        return self._rho_cache["rho_cut"] + math.log(10.0) * (-6.0 - log10_xi)

    def xi_of_rho(self, rho: float | np.ndarray) -> float | np.ndarray:
        """Inverse coordinate change from the frozen table."""
        if self._xi_of_rho is None:
            raise TableNotFrozen("family built without its table")
        r = np.asarray(rho, dtype=float)
        if np.any(r < self.rho_limit) or np.any(r > self.rho_nodes[-1]):
            raise OutOfDomain(
                f"rho outside table range [{self.rho_limit}, {self.rho_nodes[-1]}]"
            )
        out = self._xi_of_rho(r)
        return out if out.ndim else float(out)

    def xi_of_rho_quadrature(self, rho: float, tol: float = 1e-12) -> float:
        """Table-free inversion by root solving on the quadrature rho."""
        from .numerics import invert_monotone

        lo = float(self.xi_nodes[-1])
        hi = self.xi_max * (1.0 - XI_CEIL_MARGIN)
        return invert_monotone(self.rho, rho, (lo, hi), tol)

    # -- the even extension and its curvature ---------------------------

    def gamma(self, omega: float | np.ndarray) -> float | np.ndarray:
        """Even profile ``Gamma(omega) = 1/xi(rho_limit + |omega|)``."""
        w = np.abs(np.asarray(omega, dtype=float))
        out = 1.0 / np.asarray(self.xi_of_rho(self.rho_limit + w))
        return out if out.ndim else float(out)

    def curvature_complete(self, omega: float | np.ndarray) -> float | np.ndarray:
        """Closed-form Gaussian curvature of the complete metric."""
        w = np.abs(np.asarray(omega, dtype=float))
        xi = np.asarray(self.xi_of_rho(self.rho_limit + w))
        out = -(xi ** (8.0 / 3.0)) / 9.0 - 1.0
        return out if out.ndim else float(out)

    def curvature_from_gamma(self, omega: float, h: float = 4e-3) -> float:
        """-Gamma''/Gamma by symmetric finite differences (residual route)."""
        g2 = fd_derivative(self.gamma, omega, order=2, h=h)
        return -g2 / self.gamma(omega)

    def mean_curvature(self, omega: float | np.ndarray) -> float | np.ndarray:
        """f = (2/sqrt(3)) sqrt(-1 - K) of the shape-operator candidate."""
        k = self.curvature_complete(omega)
        out = 2.0 / math.sqrt(3.0) * np.sqrt(-1.0 - np.asarray(k))
        return out if out.ndim else float(out)


def shape_and_codazzi(
    omega: float, params: IntrinsicParams, h: float = 4e-3
) -> tuple[float, float, float, float]:
    """Shape-operator candidate eigenvalues and the Codazzi residual.

    The candidate acts diagonally on the orthonormal frame aligned with
    grad K: eigenvalue ``lam1 = -sqrt(-1-K)/sqrt(3)`` along it and
    ``lam2 = sqrt(3(-1-K))`` across, so ``lam1 lam2 = 1 + K`` holds by
    construction (the Gauss equation) and ``trace = (2/sqrt 3)
    sqrt(-1-K) = f``.  The one nontrivial Codazzi component reduces to

        X1(lam2) - a (lam1 - lam2),   a = 3 X1(K) / (8 (-1 - K)),

    which is evaluated here with finite-difference derivatives along
    omega; it vanishes identically for the true curvature.
    """
    ktilde = params.curvature_complete(omega)
    minus = -1.0 - ktilde
    lam1 = -math.sqrt(minus) / math.sqrt(3.0)
    lam2 = math.sqrt(3.0 * minus)
    f = 2.0 / math.sqrt(3.0) * math.sqrt(minus)

    lam2_func = lambda w: math.sqrt(3.0 * (-1.0 - params.curvature_complete(w)))
    dlam2 = fd_derivative(lam2_func, omega, order=1, h=h)
    dk = fd_derivative(params.curvature_complete, omega, order=1, h=h)
    a = 3.0 * dk / (8.0 * minus)
    residual = dlam2 - a * (lam1 - lam2)
    return lam1, lam2, f, abs(residual)


@dataclass
class CompletenessReport:
    """Numbers backing the completeness certificate of one family."""

    min_gamma: float
    bound: float
    argmin_omega: float
    seam_geodesic_residual: float
    radial_geodesic_drift: float
    seam_fourth_difference: float
    samples: int


def completeness_certificate(
    params: IntrinsicParams,
    omega_max: float = 10.0,
    samples: int = 10001,
    fd_step: float = 1e-3,
) -> CompletenessReport:
    """Certify ``Gamma >= Gamma(0)`` and that the seam is a geodesic.

    Sweeps ``Gamma`` over ``|omega| <= omega_max``, evaluates the
    geodesic-equation residual of the seam curve ``theta -> (0, theta)``
    (``-Gamma'(0)/Gamma(0)`` in arc-length parametrization), and
    integrates the radial curve ``omega -> (omega, theta0)`` with a
    fixed-step RK4 to confirm it parallels the omega axis.  The fourth
    symmetric difference of Gamma at the seam is recorded but nothing is
    asserted about it (smoothness is only claimed up to third order).
    """
    omegas = np.linspace(-omega_max, omega_max, samples)
    gam = np.asarray(params.gamma(omegas))
    idx = int(np.argmin(gam))
    min_gamma = float(gam[idx])
    bound = 1.0 / params.xi_max

    gprime0 = fd_derivative(params.gamma, 0.0, order=1, h=fd_step)
    seam_residual = abs(-gprime0 / params.gamma(0.0))

    # Radial geodesic: omega'' = Gamma Gamma' theta'^2, theta'' =
    # -2 (Gamma'/Gamma) omega' theta'; start with theta' = 0.
    def rhs(state: np.ndarray) -> np.ndarray:
        w, dw, th, dth = state
        g = params.gamma(w)
        gp = fd_derivative(params.gamma, w, order=1, h=fd_step)
        return np.array([dw, g * gp * dth * dth, dth, -2.0 * gp / g * dw * dth])

    state = np.array([0.3 * omega_max, 1.0, 0.0, 0.0])
    steps, dt = 64, min(1.0, 0.05 * omega_max) / 64.0
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * dt * k1)
        k3 = rhs(state + 0.5 * dt * k2)
        k4 = rhs(state + dt * k3)
        state = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    radial_drift = abs(state[2]) + abs(state[1] - 1.0) + abs(state[3])

    h4 = 0.05
    fourth = (
        params.gamma(2 * h4)
        - 4 * params.gamma(h4)
        + 6 * params.gamma(0.0)
        - 4 * params.gamma(-h4)
        + params.gamma(-2 * h4)
    ) / h4**4

    report = CompletenessReport(
        min_gamma=min_gamma,
        bound=bound,
        argmin_omega=float(omegas[idx]),
        seam_geodesic_residual=seam_residual,
        radial_geodesic_drift=float(radial_drift),
        seam_fourth_difference=float(fourth),
        samples=samples,
    )
    if min_gamma < bound - 1e-12:
        raise CertificateFailed(report.argmin_omega, "Gamma dipped below 1/xi_max")
    if seam_residual >= 1e-6:
        raise CertificateFailed(0.0, f"seam geodesic residual {seam_residual:.3e}")
    return report


# -- the conformal chart used by the local classification ---------------


def _conformal_radicand(sigma: float, a: float) -> float:
    return -3.0 * math.exp(-2.0 * sigma / 3.0) + math.exp(2.0 * sigma) + a


def u_of_sigma(sigma: float, sigma0: float, a: float, u0: float = 0.0) -> float:
    """Arc coordinate of the conformal chart, ``du/dsigma = 1/sqrt(D)``.

    ``D(tau) = -3 exp(-2 tau/3) + exp(2 tau) + a`` must stay positive
    between the limits, otherwise ``NegativeRadicand`` is raised.
    """

    def integrand(tau: float) -> float:
        d = _conformal_radicand(tau, a)
        if d <= 0.0:
            raise NegativeRadicand(f"radicand {d} at sigma={tau}")
        return 1.0 / math.sqrt(d)

    lo, hi = min(sigma0, sigma), max(sigma0, sigma)
    for probe in np.linspace(lo, hi, 17):
        if _conformal_radicand(float(probe), a) <= 0.0:
            raise NegativeRadicand(f"radicand non-positive at sigma={probe}")
    return u0 + integrate_singular(integrand, sigma0, sigma, QuadratureSpec(atol=1e-12))


def conformal_chart_metric(sigma: float, a: float) -> MetricSample:
    """Components of ``e^{2 sigma}(du^2 + dv^2)`` written in ``(sigma, v)``."""
    d = _conformal_radicand(sigma, a)
    if d <= 0.0:
        raise NegativeRadicand(f"radicand {d} at sigma={sigma}")
    e2s = math.exp(2.0 * sigma)
    return MetricSample("sigma_v", (sigma, 0.0), e2s / d, e2s)


def xi_chart_metric(xi: float, cminus1: float) -> MetricSample:
    """Components of the strip metric in the ``(xi, theta)`` chart."""
    T = metric_factor(xi, cminus1)
    if T <= 0.0:
        raise OutOfDomain("xi outside the positivity interval")
    return MetricSample("xi_theta", (xi, 0.0), 3.0 / (xi * xi * T), 1.0 / (xi * xi))


def omega_chart_metric(params: IntrinsicParams, omega: float) -> MetricSample:
    """Components of the complete metric in the ``(omega, theta)`` chart."""
    g = params.gamma(omega)
    return MetricSample("omega_theta", (omega, 0.0), 1.0, float(g) * float(g))
