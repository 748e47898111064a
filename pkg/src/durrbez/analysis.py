"""Error measurement and theorem right-hand sides.

Measures the operator error against three kinds of bound: the direct
estimate through the endpoint-weighted modulus of smoothness, the
Lipschitz-type two-parameter estimate, and the bounded-variation rate.
Bound comparisons are findings, not assertions: a negative slack is
recorded in the report, never raised.
"""

import csv
import io
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .functions import one_sided_derivatives, tv_fx
from .operators import OperatorParams, apply_modified_bezier, apply_modified_bezier_grid

SUP_GRID_SIZE = 201
MODULUS_H_SAMPLES = 129
MODULUS_X_SAMPLES = 257


@dataclass(frozen=True)
class BoundReport:
    """One measured error (lhs) against one theorem bound (rhs)."""

    function: str
    n: int
    mu: float
    x: Optional[float]  # None means the sup over the grid
    variant: str
    lhs: float
    rhs: float
    flags: str = ""

    @property
    def slack(self):
        return self.rhs - self.lhs


@dataclass(frozen=True)
class LipParams:
    """Parameters of the two-parameter Lipschitz-type class."""

    zeta: float
    alpha1: float
    alpha2: float
    M_constant: float = 1.0

    def __post_init__(self):
        if not 0 < self.zeta <= 1:
            raise ValueError("zeta must lie in (0, 1]")
        if self.alpha1 < 0 or self.alpha2 <= 0:
            raise ValueError("need alpha1 >= 0 and alpha2 > 0")


def sup_error(f, params, grid_size=SUP_GRID_SIZE):
    """Max of |operator value - f| over a uniform grid including endpoints."""
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    xs = np.linspace(0.0, 1.0, grid_size)
    vals = apply_modified_bezier_grid(f, params, xs)
    return float(np.max(np.abs(vals - np.asarray(f.evaluator(xs), dtype=float))))


def _phi(x):
    return np.sqrt(np.clip(x * (1.0 - x), 0.0, None))


def dt_modulus(f, t, h_samples=MODULUS_H_SAMPLES, x_samples=MODULUS_X_SAMPLES):
    """First-order modulus of smoothness with step weight phi(x)=sqrt(x(1-x)).

    Estimates sup over 0 < h <= t and admissible x of
        |f(x + h phi(x)/2) - f(x - h phi(x)/2)|
    with h log-spaced (largest sample exactly t) and x uniform; points
    whose shifted arguments leave [0, 1] are masked out.
    """
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    if h_samples < 16 or x_samples < 16:
        raise ValueError("sample counts must be >= 16")
    hs = np.geomspace(t / 1024.0, t, h_samples)
    xs = np.linspace(0.0, 1.0, x_samples)
    half_step = 0.5 * hs[:, None] * _phi(xs)[None, :]
    lo = xs[None, :] - half_step
    hi = xs[None, :] + half_step
    ok = (lo >= -1e-12) & (hi <= 1.0 + 1e-12)
    lo = np.clip(lo, 0.0, 1.0)
    hi = np.clip(hi, 0.0, 1.0)
    diffs = np.abs(
        np.asarray(f.evaluator(hi), dtype=float) - np.asarray(f.evaluator(lo), dtype=float)
    )
    diffs[~ok] = 0.0
    return float(diffs.max())


_ERROR_FLOOR = 1e-13


def direct_bound_constant(f, mu, n_list, grid_size=SUP_GRID_SIZE, config=None):
    """Empirical constants sup_error / modulus at step 1/sqrt(n+2), per n.

    A zero modulus with a real error reports inf; a zero modulus with an
    error at rounding level reports 0.
    """
    out = []
    for n in n_list:
        params = (
            OperatorParams(n=n, mu=mu)
            if config is None
            else OperatorParams(n=n, mu=mu, config=config)
        )
        err = sup_error(f, params, grid_size)
        mod = dt_modulus(f, 1.0 / math.sqrt(n + 2))
        if mod == 0.0:
            c = math.inf if err > _ERROR_FLOOR else 0.0
        else:
            c = err / mod
        out.append((n, c))
    return out


def lip_membership_constant(f, lip, t_samples=201, x_samples=201):
    """Empirical class constant: sup of |f(t)-f(x)| (t+a1 x^2+a2 x)^(z/2) / |t-x|^z."""
    ts = np.linspace(0.0, 1.0, t_samples)
    xs = np.linspace(0.0, 1.0, x_samples)[1:]  # x in (0, 1)
    tt, xx = np.meshgrid(ts, xs)
    mask = tt != xx
    num = np.abs(
        np.asarray(f.evaluator(tt), dtype=float) - np.asarray(f.evaluator(xx), dtype=float)
    ) * (tt + lip.alpha1 * xx**2 + lip.alpha2 * xx) ** (lip.zeta / 2.0)
    den = np.abs(tt - xx) ** lip.zeta
    ratios = np.where(mask, num / np.where(mask, den, 1.0), 0.0)
    return float(ratios.max())


def lip_bound(f, lip, params, x):
    """Lipschitz-type pointwise bound report at x in (0, 1]."""
    if not 0 < float(x) <= 1:
        raise ValueError("x must lie in (0, 1]")
    lhs = abs(apply_modified_bezier(f, params, x) - float(f.evaluator(x)))
    phi2 = x * (1.0 - x)
    denom = (params.n + 2) * (lip.alpha1 * x * x + lip.alpha2 * x)
    rhs = lip.M_constant * (params.mu * phi2 / denom) ** (lip.zeta / 2.0)
    return BoundReport(
        function=f.name, n=params.n, mu=params.mu, x=float(x),
        variant="lip", lhs=lhs, rhs=rhs,
    )


def bv_rhs(model, params, x, variant):
    """Bounded-variation rate bound at x, in one of two readings.

    The first group (one-sided derivative terms) is scaled by
    mu/(n+2) * phi^2(x) in the "statement" reading and by
    phi(x)/sqrt(n+2) in the "proof" reading; the variation sums are shared:
        mu/(n+2) * phi^2/x^2   * sum_{k<=isqrt(n)} V[x-x/k, x]
      + mu/(n+2) * phi^2/(1-x) * sum_{k<=isqrt(n)} V[x, x+(1-x)/k]
      + x/sqrt(n) * V[x-x/sqrt(n), x] + (1-x)/sqrt(n) * V[x, x+(1-x)/sqrt(n)]
    where V is the variation of the derivative recentered at x.
    """
    if variant not in ("statement", "proof"):
        raise ValueError("variant must be 'statement' or 'proof'")
    n, mu = params.n, params.mu
    x = float(x)
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    fp_minus, fp_plus = one_sided_derivatives(model, x)
    phi2 = x * (1.0 - x)
    phi = math.sqrt(phi2)
    head = abs(fp_plus + mu * fp_minus) / (mu + 1.0) + abs(fp_plus - fp_minus)
    if variant == "statement":
        first_group = head * (mu / (n + 2)) * phi2
    else:
        first_group = head * phi / math.sqrt(n + 2)
    root = math.isqrt(n)
    sqrt_n = math.sqrt(n)
    left_sum = sum(tv_fx(model, x, x - x / k, x) for k in range(1, root + 1))
    right_sum = sum(tv_fx(model, x, x, x + (1.0 - x) / k) for k in range(1, root + 1))
    rhs = (
        first_group
        + (mu / (n + 2)) * (phi2 / x**2) * left_sum
        + (x / sqrt_n) * tv_fx(model, x, x - x / sqrt_n, x)
        + (mu / (n + 2)) * (phi2 / (1.0 - x)) * right_sum
        + ((1.0 - x) / sqrt_n) * tv_fx(model, x, x, x + (1.0 - x) / sqrt_n)
    )
    lhs = abs(apply_modified_bezier(model, params, x) - float(model.evaluator(x)))
    return BoundReport(
        function=model.name, n=n, mu=mu, x=x, variant=variant, lhs=lhs, rhs=rhs
    )


def fit_rate(pairs):
    """Least-squares line through (log n, log error): (slope, intercept, r2).

    Nonpositive errors are dropped with a warning; fewer than three
    surviving points is an error.
    """
    kept = [(n, e) for n, e in pairs if e > 0]
    if len(kept) < len(list(pairs)):
        warnings.warn(
            "dropped %d nonpositive error value(s) from rate fit"
            % (len(list(pairs)) - len(kept)),
            stacklevel=2,
        )
    if len(kept) < 3:
        raise ValueError("rate fit needs at least 3 positive-error points")
    ln = np.log([n for n, _ in kept])
    le = np.log([e for _, e in kept])
    slope, intercept = np.polyfit(ln, le, 1)
    resid = le - (slope * ln + intercept)
    total = le - le.mean()
    denom = float(total @ total)
    r2 = 1.0 if denom == 0 else 1.0 - float(resid @ resid) / denom
    return float(slope), float(intercept), r2


def reports_to_csv(reports):
    """Serialize bound reports: function,n,mu,x_or_sup,variant,lhs,rhs,slack,flags."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["function", "n", "mu", "x_or_sup", "variant", "lhs", "rhs", "slack", "flags"]
    )
    for r in reports:
        writer.writerow(
            [
                r.function,
                r.n,
                "%.17g" % r.mu,
                "SUP" if r.x is None else "%.17g" % r.x,
                r.variant,
                "%.17g" % r.lhs,
                "%.17g" % r.rhs,
                "%.17g" % r.slack,
                r.flags,
            ]
        )
    return buf.getvalue()
