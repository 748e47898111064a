"""Order-II modified Bernstein basis, its tail sums, and Bezier weights.

The modified basis combines three shifted rows of the degree-(n-2)
Bernstein basis with n-dependent weights g(x), h(x), g(1-x).  The basis is
signed (g can be negative), so the tail sums J may leave [0, 1]; that is
measured and surfaced here, never silently ignored.
"""

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .bernstein import _clamp01, bernstein_rows


class SignedPowerWarning(UserWarning):
    """A non-integer power met a negative tail sum; the signed convention
    sign(J) * |J|**mu was applied."""


class RowSumWarning(UserWarning):
    """The leading tail sum J_0 drifted from 1 beyond accumulation noise."""


@dataclass(frozen=True)
class ModWeightConfig:
    """Coefficient sequences defining the modified-basis weights.

    g(x, n) = g2(n) x^2 + g1(n) x + g0(n) and h(x, n) = h0(n) x (1 - x).
    All four sequences are rational-valued functions of n, so the exact
    verification path can work with them symbol-free.
    """

    name: str
    g0: Callable[[int], Fraction]
    g1: Callable[[int], Fraction]
    g2: Callable[[int], Fraction]
    h0: Callable[[int], Fraction]


DEFAULT_CONFIG = ModWeightConfig(
    name="default",
    g0=lambda n: Fraction(3, 2),
    g1=lambda n: Fraction(-n),
    g2=lambda n: Fraction(n - 2),
    h0=lambda n: Fraction(2 * (n - 2)),
)

# Collapses the modified basis back to the plain Bernstein row (degree
# elevation identity), which turns the operator into the classical one.
BERNSTEIN_REDUCTION = ModWeightConfig(
    name="bernstein-reduction",
    g0=lambda n: Fraction(1),
    g1=lambda n: Fraction(-2),
    g2=lambda n: Fraction(1),
    h0=lambda n: Fraction(2),
)

CONFIGS = {c.name: c for c in (DEFAULT_CONFIG, BERNSTEIN_REDUCTION)}


def constraint_residual(cfg, n):
    """Exact residual of the design constraint 2 g2(n) - h0(n) = 0."""
    return 2 * cfg.g2(n) - cfg.h0(n)


def _require_degree(n):
    if n < 3:
        raise ValueError("modified basis requires n >= 3, got %d" % n)


def g_eval(cfg, n, x):
    """g(x, n) = g2 x^2 + g1 x + g0; works on scalars and arrays."""
    _require_degree(n)
    xv = np.asarray(x, dtype=float)
    out = (float(cfg.g2(n)) * xv + float(cfg.g1(n))) * xv + float(cfg.g0(n))
    return out if out.shape else float(out)


def h_eval(cfg, n, x):
    """h(x, n) = h0 x (1 - x); works on scalars and arrays."""
    _require_degree(n)
    xv = np.asarray(x, dtype=float)
    out = float(cfg.h0(n)) * xv * (1.0 - xv)
    return out if out.shape else float(out)


def modified_rows(cfg, n, xs):
    """Modified basis rows for each x in xs, shape (len(xs), n + 1).

    Entry k is g(x) B_{n-2,k}(x) + h(x) B_{n-2,k-1}(x) + g(1-x) B_{n-2,k-2}(x)
    with out-of-range B terms equal to zero.
    """
    _require_degree(n)
    x = np.atleast_1d(_clamp01(xs))
    base = bernstein_rows(n - 2, x)  # (m, n-1)
    g = np.asarray(g_eval(cfg, n, x)).reshape(-1, 1)
    h = np.asarray(h_eval(cfg, n, x)).reshape(-1, 1)
    g_ref = np.asarray(g_eval(cfg, n, 1.0 - x)).reshape(-1, 1)
    out = np.zeros((x.size, n + 1))
    out[:, 0 : n - 1] += g * base
    out[:, 1:n] += h * base
    out[:, 2 : n + 1] += g_ref * base
    return out


def modified_basis_all(cfg, n, x):
    """Modified basis row at a single point, length n + 1."""
    return modified_rows(cfg, n, [x])[0]


def tail_sum_rows(cfg, n, xs):
    """Tail sums J_k(x) = sum_{j>=k} of the modified row, shape (m, n + 2).

    Computed by backward (high-k to low-k) cumulative summation; the empty
    tail J_{n+1} is 0.  J_0 is checked against 1 but never renormalized,
    so a row-sum bug cannot hide here.
    """
    rows = modified_rows(cfg, n, xs)
    tails = np.zeros((rows.shape[0], n + 2))
    tails[:, : n + 1] = np.cumsum(rows[:, ::-1], axis=1)[:, ::-1]
    drift = np.max(np.abs(tails[:, 0] - 1.0))
    if drift > 1e-9:
        warnings.warn(
            "leading tail sum J_0 deviates from 1 by %g" % drift, RowSumWarning,
            stacklevel=2,
        )
    return tails


def tail_sums(cfg, n, x):
    """Tail sums at a single point, length n + 2 (last entry 0)."""
    return tail_sum_rows(cfg, n, [x])[0]


def _powers(tails, mu):
    """J**mu with integer powers exact and a signed fallback otherwise."""
    if mu < 1:
        raise ValueError("mu must be >= 1, got %r" % (mu,))
    if float(mu).is_integer():
        return tails ** int(mu)
    if np.any(tails < 0.0):
        warnings.warn(
            "negative tail sum under non-integer mu=%g; using sign(J)*|J|**mu"
            % mu,
            SignedPowerWarning,
            stacklevel=3,
        )
    return np.sign(tails) * np.abs(tails) ** float(mu)


def bezier_weight_rows(cfg, n, mu, xs):
    """Bezier weights Q_k(x) = J_k(x)^mu - J_{k+1}(x)^mu, shape (m, n + 1)."""
    powers = _powers(tail_sum_rows(cfg, n, xs), mu)
    return powers[:, :-1] - powers[:, 1:]


def bezier_weights(cfg, n, mu, x):
    """Bezier weight row at a single point, length n + 1."""
    return bezier_weight_rows(cfg, n, mu, [x])[0]


@dataclass(frozen=True)
class TailRangeStats:
    """How far the tail sums stray from [0, 1] on a grid."""

    fraction_outside: float
    j_min: float
    j_max: float


def tail_range_report(cfg, ns, grid_size=101):
    """Measure, per degree, the share of grid x where some J_k leaves [0, 1].

    The membership J_k in [0, 1] is assumed implicitly by the norm bounds
    but does not hold for the signed basis; this makes the failure set a
    reported quantity instead of a silent one.
    """
    xs = np.linspace(0.0, 1.0, grid_size)
    out = {}
    for n in ns:
        tails = tail_sum_rows(cfg, n, xs)
        outside = (tails < -1e-12) | (tails > 1.0 + 1e-12)
        out[n] = TailRangeStats(
            fraction_outside=float(np.mean(np.any(outside, axis=1))),
            j_min=float(tails.min()),
            j_max=float(tails.max()),
        )
    return out
