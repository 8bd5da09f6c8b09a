"""Independent oracles used only by the test-suite.

Everything here deliberately avoids the library's own kernels: plain
bisection instead of Brent, scipy's QUADPACK instead of the adaptive
Simpson kernel, dense tables instead of spline inversion.  Frozen
fixture constants in the tests were produced by these routines.
"""

import numpy as np
from scipy.integrate import quad


def bisection_root(f, a, b, tol=1e-14, itmax=200):
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    assert fa * fb < 0.0, "oracle bracket lost the sign change"
    for _ in range(itmax):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0 or (b - a) < tol:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def quad_with_sqrt_ends(g, a, b, singular_lower=False, singular_upper=False):
    """QUADPACK integral with explicit sqrt substitutions at declared ends."""
    pieces = []
    lo, hi = a, b
    if singular_lower:
        cut = a + 0.25 * (b - a)
        pieces.append(
            quad(lambda s: 2.0 * s * g(a + s * s), 0.0, np.sqrt(cut - a),
                 epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        )
        lo = cut
    if singular_upper:
        cut = b - 0.25 * (b - a)
        pieces.append(
            quad(lambda s: 2.0 * s * g(b - s * s), 0.0, np.sqrt(b - cut),
                 epsabs=1e-13, epsrel=1e-12, limit=200)[0]
        )
        hi = cut
    if lo < hi:
        pieces.append(quad(g, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0])
    return sum(pieces)


def dense_table(f, lo, hi, n=100_001):
    """Plain dense sampling, for interpolation-based cross checks."""
    x = np.linspace(lo, hi, n)
    return x, np.array([f(v) for v in x])


def table_lookup(xs, ys, y):
    """Linear interpolation of the inverse of a monotone table."""
    if ys[0] > ys[-1]:
        xs, ys = xs[::-1], ys[::-1]
    return float(np.interp(y, ys, xs))
