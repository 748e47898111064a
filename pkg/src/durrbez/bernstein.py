"""Bernstein basis polynomials on [0, 1]: evaluation and integrals.

The degree-n basis entry k is C(n,k) x^k (1-x)^(n-k).  Out-of-range
indices (k < 0 or k > n) denote the zero polynomial, so sums over shifted
indices need no boundary special cases.
"""

import math
from fractions import Fraction

import numpy as np

# x may stray this far outside [0, 1] (grid-generation roundoff) and is
# clamped; larger excursions are domain errors.
DOMAIN_EPS = 1e-12

# Above this degree a single basis value goes through log-gamma instead of
# an exact binomial, to keep C(n, k) * x^k * (1-x)^(n-k) out of overflow.
_LGAMMA_DEGREE = 60


def _clamp01(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -DOMAIN_EPS) or np.any(arr > 1.0 + DOMAIN_EPS):
        raise ValueError("x must lie in [0, 1] (tolerance %g), got %r" % (DOMAIN_EPS, x))
    return np.clip(arr, 0.0, 1.0)


def bernstein_eval(n, k, x):
    """Single basis value p_{n,k}(x); exactly 0.0 for k < 0 or k > n."""
    if n < 0:
        raise ValueError("degree n must be >= 0, got %d" % n)
    xv = float(_clamp01(x))
    if k < 0 or k > n:
        return 0.0
    if xv == 0.0:
        return 1.0 if k == 0 else 0.0
    if xv == 1.0:
        return 1.0 if k == n else 0.0
    if n <= _LGAMMA_DEGREE:
        return math.comb(n, k) * xv**k * (1.0 - xv) ** (n - k)
    log_val = (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(xv)
        + (n - k) * math.log1p(-xv)
    )
    return math.exp(log_val)


def bernstein_rows(n, xs):
    """Full basis rows (p_{n,0}(x), ..., p_{n,n}(x)) for each x in xs.

    Built by the degree recurrence
        p_{d,k} = (1-x) p_{d-1,k} + x p_{d-1,k-1},
    which is numerically stable near the endpoints.  Returns an array of
    shape (len(xs), n + 1).
    """
    if n < 0:
        raise ValueError("degree n must be >= 0, got %d" % n)
    x = np.atleast_1d(_clamp01(xs))
    rows = np.zeros((x.size, n + 1))
    rows[:, 0] = 1.0
    one_minus = (1.0 - x)[:, None]
    xcol = x[:, None]
    for d in range(1, n + 1):
        rows[:, 1 : d + 1] = one_minus * rows[:, 1 : d + 1] + xcol * rows[:, 0:d]
        rows[:, 0] *= one_minus[:, 0]
    return rows


def bernstein_all(n, x):
    """Basis row at a single point, as a length-(n+1) array."""
    return bernstein_rows(n, [x])[0]


def bernstein_integral_01(n, k):
    """Exact full-interval integral of p_{n,k}: always 1/(n+1)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n, got k=%d, n=%d" % (k, n))
    return Fraction(1, n + 1)


def partial_integral_row(n, y):
    """Integrals of every p_{n,k} from 0 to y, as a length-(n+1) array.

    Uses the antiderivative identity
        int_0^y p_{n,k} = (1/(n+1)) sum_{j=k+1}^{n+1} p_{n+1,j}(y),
    which evaluates the exact degree-(n+1) antiderivative in its stable
    Bernstein form instead of an ill-conditioned monomial expansion.
    """
    row = bernstein_all(n + 1, y)
    # suffix[k] = sum_{j >= k+1} row[j]
    suffix = np.cumsum(row[::-1])[::-1]
    return suffix[1:] / (n + 1)


def bernstein_partial_integral(n, k, y):
    """Integral of p_{n,k} from 0 to y."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n, got k=%d, n=%d" % (k, n))
    return float(partial_integral_row(n, y)[k])
