"""The integral operators: classical Durrmeyer, its order-II modification,
and the Bezier variant, plus the kernel and its cumulative mass.

Coefficient vectors (n+1) int p_{n,k} f are computed exactly for
piecewise-polynomial models and by composite Gauss-Legendre quadrature
otherwise, with panels aligned to breakpoints (or endpoint-graded for
models tagged lipschitz) and uniform refinement until the change between
successive levels drops below tolerance.
"""

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .bernstein import bernstein_all, bernstein_rows, partial_integral_row
from .functions import FunctionModel, PiecewisePoly, StructureMissingError
from .modified import DEFAULT_CONFIG, ModWeightConfig, bezier_weight_rows, modified_rows

QUADRATURE_TOL = 1e-12
_MAX_REFINEMENTS = 5
_GRADING_LEVELS = 40


class QuadratureError(RuntimeError):
    """Quadrature did not reach tolerance; carries the best estimate."""

    def __init__(self, message, best, error_estimate, tolerance):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate
        self.tolerance = tolerance


@dataclass(frozen=True)
class OperatorParams:
    """Degree and Bezier exponent (with weight config) for one operator."""

    n: int
    mu: float = 1.0
    config: ModWeightConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("operator requires n >= 3, got %d" % self.n)
        if self.mu < 1:
            raise ValueError("mu must be >= 1, got %r" % (self.mu,))


@dataclass(frozen=True)
class DurrmeyerCoefficients:
    """Vector of (n+1) int_0^1 p_{n,k}(u) f(u) du for k = 0..n."""

    n: int
    values: np.ndarray
    method: str  # "exact-rational" or "quadrature"
    quadrature_error_estimate: float


# ---------------------------------------------------------------------------
# Exact path


def _exact_coefficient_fractions(pw: PiecewisePoly, n):
    """Exact coefficients for a piecewise-polynomial integrand.

    Reduces u^j p_{n,k}(u) to a scaled higher-degree basis entry, so each
    partial integral comes from one exact Bernstein-form antiderivative row
    per (degree shift, breakpoint).
    """
    degrees = sorted(
        {j for piece in pw.pieces for j, c in enumerate(piece.coeffs) if c != 0}
    )
    cdf_rows = {}
    ratios = {}
    for j in degrees:
        ratios[j] = [
            Fraction(math.comb(n, k), math.comb(n + j, k + j)) for k in range(n + 1)
        ]
        for y in pw.breakpoints:
            if (j, y) not in cdf_rows:
                cdf_rows[(j, y)] = exact.bernstein_cdf_row(n + j, y)
    values = [Fraction(0)] * (n + 1)
    for i, piece in enumerate(pw.pieces):
        a, b = pw.breakpoints[i], pw.breakpoints[i + 1]
        for j, c in enumerate(piece.coeffs):
            if c == 0:
                continue
            hi = cdf_rows[(j, b)]
            lo = cdf_rows[(j, a)]
            ratio = ratios[j]
            for k in range(n + 1):
                values[k] += c * ratio[k] * (hi[k + j] - lo[k + j])
    return [(n + 1) * v for v in values]


def _exact_coefficients(f: FunctionModel, n):
    if f.structure is None:
        raise StructureMissingError(
            "%s has no structure; use the quadrature method" % f.name
        )
    vals = _exact_coefficient_fractions(f.structure, n)
    return np.array([float(v) for v in vals])


# ---------------------------------------------------------------------------
# Quadrature path


@functools.lru_cache(maxsize=64)
def _gl_rule(m):
    nodes, weights = np.polynomial.legendre.leggauss(m)
    return nodes, weights


def _base_panels(f: FunctionModel):
    if f.structure is not None:
        return [float(b) for b in f.structure.breakpoints]
    if f.smoothness_tag == "lipschitz":
        # geometric grading toward both endpoints tames algebraic
        # singularities in the derivatives (e.g. sqrt at 0)
        left = [0.0] + [2.0**-j for j in range(_GRADING_LEVELS, 0, -1)]
        right = [1.0 - p for p in reversed(left[:-1])]
        return left + right
    return [0.0, 1.0]


def _composite_values(f, n, edges, m_nodes):
    ref_nodes, ref_weights = _gl_rule(m_nodes)
    lows = np.asarray(edges[:-1])
    highs = np.asarray(edges[1:])
    half = (highs - lows) / 2.0
    mid = (highs + lows) / 2.0
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    fvals = np.asarray(f.evaluator(nodes), dtype=float)
    rows = bernstein_rows(n, nodes)
    return (n + 1) * (rows.T @ (weights * fvals))


def _refine(edges):
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        out.extend((a, (a + b) / 2.0))
    out.append(edges[-1])
    return out


def _quadrature_coefficients(f: FunctionModel, n):
    if f.structure is not None:
        deg_f = max(p.degree for p in f.structure.pieces)
    else:
        deg_f = 8  # surrogate degree for smooth non-polynomial integrands
    m_nodes = max(6, (n + max(deg_f, 0)) // 2 + 3)
    edges = _base_panels(f)
    prev = _composite_values(f, n, edges, m_nodes)
    estimate = math.inf
    for _ in range(_MAX_REFINEMENTS):
        edges = _refine(edges)
        vals = _composite_values(f, n, edges, m_nodes)
        estimate = float(np.max(np.abs(vals - prev)))
        tol = QUADRATURE_TOL * max(1.0, float(np.max(np.abs(vals))))
        if estimate < tol:
            return vals, estimate
        prev = vals
    raise QuadratureError(
        "coefficient quadrature for %s at n=%d stalled at estimate %g"
        % (f.name, n, estimate),
        best=prev,
        error_estimate=estimate,
        tolerance=QUADRATURE_TOL,
    )


# ---------------------------------------------------------------------------
# Coefficients and operator application


@functools.lru_cache(maxsize=None)
def _coefficients_cached(f, n, method):
    if method == "exact-rational":
        return DurrmeyerCoefficients(
            n=n, values=_exact_coefficients(f, n),
            method="exact-rational", quadrature_error_estimate=0.0,
        )
    values, estimate = _quadrature_coefficients(f, n)
    return DurrmeyerCoefficients(
        n=n, values=values, method="quadrature", quadrature_error_estimate=estimate
    )


def durrmeyer_coefficients(f, n, method="auto"):
    """Coefficient vector for f at degree n; cached per (f, n, method).

    method "auto" picks the exact rational path when f carries structure
    and quadrature otherwise; "exact" and "quadrature" force a path.
    """
    if n < 0:
        raise ValueError("degree n must be >= 0, got %d" % n)
    if method == "auto":
        method = "exact-rational" if f.structure is not None else "quadrature"
    elif method == "exact":
        method = "exact-rational"
    elif method != "quadrature":
        raise ValueError("method must be auto, exact, or quadrature")
    return _coefficients_cached(f, n, method)


def apply_classical(f, n, x):
    """Classical Durrmeyer value: Bernstein row against the coefficients."""
    coeffs = durrmeyer_coefficients(f, n)
    return float(bernstein_all(n, x) @ coeffs.values)


def apply_modified_grid(f, params, xs):
    """Order-II modified operator on a grid of x values."""
    coeffs = durrmeyer_coefficients(f, params.n)
    rows = modified_rows(params.config, params.n, xs)
    return rows @ coeffs.values


def apply_modified(f, params, x):
    return float(apply_modified_grid(f, params, [x])[0])


def apply_modified_bezier_grid(f, params, xs):
    """Bezier variant on a grid of x values."""
    coeffs = durrmeyer_coefficients(f, params.n)
    rows = bezier_weight_rows(params.config, params.n, params.mu, xs)
    return rows @ coeffs.values


def apply_modified_bezier(f, params, x):
    return float(apply_modified_bezier_grid(f, params, [x])[0])


def kernel_value(params, x, u):
    """Bivariate kernel W(x, u) = (n+1) sum_k Q_k(x) p_{n,k}(u)."""
    q = bezier_weight_rows(params.config, params.n, params.mu, [x])[0]
    return float((params.n + 1) * (q @ bernstein_all(params.n, u)))


def kappa(params, x, y):
    """Cumulative kernel mass int_0^y W(x, t) dt.

    The t-integral is exact (polynomial antiderivative in Bernstein form),
    so only the Q weights carry float rounding; kappa(x, 0) is exactly 0
    and kappa(x, 1) telescopes to the weight sum.
    """
    if not 0 < float(x) < 1:
        raise ValueError("x must lie in (0, 1)")
    q = bezier_weight_rows(params.config, params.n, params.mu, [x])[0]
    partial = partial_integral_row(params.n, y)
    return float((params.n + 1) * (q @ partial))


def first_absolute_moment(params, x):
    """Operator applied to |u - x| at x, via exact piecewise integration.

    |u - x| is itself piecewise linear, so its coefficients come from the
    exact path; no Cauchy-Schwarz detour is needed.
    """
    xf = Fraction(float(x))
    if not 0 < xf < 1:
        raise ValueError("x must lie in (0, 1)")
    pw = PiecewisePoly(
        (Fraction(0), xf, Fraction(1)),
        (exact.RationalPolynomial([xf, -1]), exact.RationalPolynomial([-xf, 1])),
    )
    coeffs = np.array([float(v) for v in _exact_coefficient_fractions(pw, params.n)])
    q = bezier_weight_rows(params.config, params.n, params.mu, [x])[0]
    return float(q @ coeffs)
