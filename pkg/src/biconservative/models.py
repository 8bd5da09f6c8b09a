"""Minkowski 4-space, the hyperboloid model and the upper half space.

Conventions
-----------
The ambient space is R^4 with the bilinear form

    <x, y> = x1 y1 + x2 y2 + x3 y3 - x4 y4,

and hyperbolic 3-space is realized as the upper hyperboloid sheet
``<x, x> = -1`` with ``x4 > 0``.  The second model is the upper half
space ``{(u, v, w) : w > 0}`` carrying the metric
``(du^2 + dv^2 + dw^2) / w^2``; the diffeomorphism between the two is

    (x1, x2, x3, x4)  ->  (2 x2, 2 x3, 2) / (x1 + x4),

which is well defined because ``x1 + x4 > 0`` on the whole sheet.  That
this map is an isometry between the induced metrics is not assumed
anywhere: ``isometry_residual`` measures it numerically and the test
suite pins the residual.

Points are plain float arrays; functions broadcast over leading axes,
so a single point has shape ``(4,)`` (or ``(3,)`` in the half space)
and a grid of points ``(..., 4)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DenominatorUnderflow,
    HyperboloidConstraintViolated,
    NonPositiveHeight,
)
from .numerics import fd_derivative

HYPERBOLOID_TOL = 1e-10
TANGENT_TOL = 1e-10


def minkowski_inner(x: np.ndarray, y: np.ndarray) -> np.ndarray | float:
    """Bilinear form of signature (+, +, +, -), broadcasting over points."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    prod = x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] + x[..., 2] * y[..., 2]
    prod = prod - x[..., 3] * y[..., 3]
    return prod if prod.ndim else float(prod)


def minkowski_norm(x: np.ndarray) -> np.ndarray | float:
    """sqrt(<x, x>); NaN entries where the square is negative (timelike)."""
    sq = minkowski_inner(x, x)
    with np.errstate(invalid="ignore"):
        root = np.sqrt(sq)
    return root if np.ndim(root) else float(root)


def hyperboloid_defect(x: np.ndarray) -> np.ndarray | float:
    """|<x, x> + 1|, the violation of the sheet constraint."""
    d = np.abs(minkowski_inner(x, x) + 1.0)
    return d if np.ndim(d) else float(d)


def assert_on_hyperboloid(x: np.ndarray, tol: float = HYPERBOLOID_TOL) -> None:
    """Raise unless every point satisfies the sheet constraints."""
    x = np.asarray(x, dtype=float)
    worst = float(np.max(hyperboloid_defect(x)))
    if worst > tol:
        raise HyperboloidConstraintViolated(f"max |<x,x>+1| = {worst:.3e} > {tol}")
    if np.min(x[..., 3]) <= 0.0:
        raise HyperboloidConstraintViolated("a point has non-positive x4")


def project_tangent(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Minkowski-orthogonal projection of ``w`` onto the tangent space at ``x``.

    Uses <x, x> = -1: the component of w along x is -<w, x> x, so the
    projection is w + <w, x> x.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    coef = np.asarray(minkowski_inner(w, x))
    return w + coef[..., None] * x


def to_half_space(x: np.ndarray) -> np.ndarray:
    """Hyperboloid point(s) to upper half-space coordinates ``(u, v, w)``."""
    x = np.asarray(x, dtype=float)
    den = x[..., 0] + x[..., 3]
    if np.any(np.abs(den) < 1e-300):
        raise DenominatorUnderflow("x1 + x4 vanished; input is not a sheet point")
    return np.stack((2.0 * x[..., 1] / den, 2.0 * x[..., 2] / den, 2.0 / den), axis=-1)


def from_half_space(p: np.ndarray) -> np.ndarray:
    """Inverse model map; raises on non-positive height."""
    p = np.asarray(p, dtype=float)
    u, v, w = p[..., 0], p[..., 1], p[..., 2]
    if np.any(w <= 0.0):
        raise NonPositiveHeight("half-space height must be positive")
    s = u * u + v * v + w * w
    x1 = (4.0 - s) / (4.0 * w)
    x4 = (4.0 + s) / (4.0 * w)
    return np.stack((x1, u / w, v / w, x4), axis=-1)


def half_space_metric(p: np.ndarray, t1: np.ndarray, t2: np.ndarray) -> float:
    """Inner product of two vectors at a half-space point."""
    w = float(np.asarray(p, dtype=float)[..., 2])
    return float(np.dot(np.asarray(t1), np.asarray(t2))) / (w * w)


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector to the hyperboloid: ``<base, dir> = 0``."""

    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self) -> None:
        pairing = abs(float(minkowski_inner(self.base, self.dir)))
        if pairing > TANGENT_TOL:
            raise HyperboloidConstraintViolated(
                f"|<base, dir>| = {pairing:.3e} exceeds {TANGENT_TOL}"
            )


def isometry_residual(
    x: np.ndarray,
    t1: np.ndarray | TangentVec,
    t2: np.ndarray | TangentVec,
    step: float = 1e-5,
) -> float:
    """|<t1, t2> - g_half(d t1, d t2)| for the model map at ``x``.

    The differential of the model map is taken by central finite
    differences (with one Richardson step) along the straight ambient
    lines ``x + s t``; the map extends smoothly off the sheet, so this
    equals the true pushforward.  The residual is returned, not asserted.
    """
    if isinstance(t1, TangentVec):
        t1 = t1.dir
    if isinstance(t2, TangentVec):
        t2 = t2.dir
    x = np.asarray(x, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    p = to_half_space(x)

    def push(t: np.ndarray) -> np.ndarray:
        comps = [
            fd_derivative(lambda s, i=i: to_half_space(x + s * t)[i], 0.0, order=1, h=step)
            for i in range(3)
        ]
        return np.array(comps)

    lhs = float(minkowski_inner(t1, t2))
    rhs = half_space_metric(p, push(t1), push(t2))
    return abs(lhs - rhs)


# Constant frame vectors spanning the sweep planes of the three families,
# one pair per sign case, together with the Gram matrices the
# parametrizations rely on.
_E = np.eye(4)

_FRAMES = {
    "positive": (_E[0].copy(), _E[1].copy()),
    "negative": (_E[1].copy(), _E[0] + np.sqrt(2.0) * _E[3]),
    "zero": (_E[0] + _E[3], _E[1].copy()),
}

_GRAMS = {
    "positive": ((1.0, 0.0), (0.0, 1.0)),
    "negative": ((1.0, 0.0), (0.0, -1.0)),
    "zero": ((0.0, 0.0), (0.0, 1.0)),
}


@dataclass(frozen=True)
class CaseFrame:
    """Pair of constant vectors spanning the circle/hyperbola/parabola planes."""

    case: str
    c1: np.ndarray
    c2: np.ndarray

    def gram(self) -> np.ndarray:
        vecs = (self.c1, self.c2)
        return np.array([[minkowski_inner(a, b) for b in vecs] for a in vecs])

    def validate(self, tol: float = 1e-12) -> None:
        want = np.array(_GRAMS[self.case])
        got = self.gram()
        if np.max(np.abs(got - want)) > tol:
            raise HyperboloidConstraintViolated(
                f"frame Gram matrix {got} does not match case '{self.case}'"
            )


def case_frame(case: str) -> CaseFrame:
    """The standard frame used by the explicit parametrizations."""
    if case not in _FRAMES:
        raise ValueError(f"unknown case {case!r}")
    c1, c2 = _FRAMES[case]
    frame = CaseFrame(case, c1, c2)
    frame.validate()
    return frame
