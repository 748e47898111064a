"""Test-function models: piecewise-polynomial structure, one-sided
derivatives, and exact total-variation machinery.

A FunctionModel always carries a plain evaluator (vectorized over numpy
arrays).  Members that are piecewise polynomials additionally carry exact
rational structure, which feeds the exact integration path and the
total-variation oracles.

Conventions for the derivative of a structured model:
  - the right-continuous representative is used (value at a breakpoint is
    the right limit; at 1 the left limit), so a derivative jump at b
    contributes to intervals (a, b] containing it;
  - interval endpoints and evaluation points within 1e-12 of a breakpoint
    snap to it, so float spellings like 0.4 address the rational
    breakpoint 2/5.
"""

import functools
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .exact import RationalPolynomial

_SNAP = Fraction(1, 10**12)


class StructureMissingError(ValueError):
    """Raised when an operation needs piecewise structure the model lacks."""


@dataclass(frozen=True)
class PiecewisePoly:
    """Piecewise polynomial on [0, 1] with exact rational breakpoints.

    pieces[i] covers [breakpoints[i], breakpoints[i+1]); the last piece
    also covers 1.  Pieces need not join continuously.
    """

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bps) - 1:
            raise ValueError("need exactly one piece per interval")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def piece_index(self, t):
        """Index of the piece whose half-open interval contains t (exact)."""
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("t must lie in [0, 1]")
        if t == 1:
            return len(self.pieces) - 1
        return bisect_right(self.breakpoints, t) - 1

    def evaluate(self, x):
        """Float evaluation, vectorized."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        inner = np.array([float(b) for b in self.breakpoints[1:-1]])
        idx = np.searchsorted(inner, xs, side="right")
        out = np.empty_like(xs)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece(xs[mask])
        return out if np.asarray(x).shape else float(out[0])

    def derivative_value(self, t):
        """Right-continuous representative of the derivative at exact t."""
        return self.pieces[self.piece_index(t)].derivative()(Fraction(t))


@dataclass(frozen=True, eq=False)
class FunctionModel:
    """Evaluable test function, optionally with exact piecewise structure.

    Hash/equality are by identity so models can key caches directly.
    """

    name: str
    evaluator: Callable
    structure: Optional[PiecewisePoly] = None
    smoothness_tag: str = "bounded-only"

    def __call__(self, x):
        return self.evaluator(x)

    def __repr__(self):
        return "FunctionModel(%r, tag=%s, structured=%s)" % (
            self.name, self.smoothness_tag, self.structure is not None,
        )


def _require_structure(model):
    if model.structure is None:
        raise StructureMissingError(
            "%s has no piecewise-polynomial structure" % model.name
        )
    return model.structure


def _snap(pw, t):
    """Exact coordinate for t, snapped to a breakpoint within 1e-12."""
    ft = Fraction(float(t)) if not isinstance(t, Fraction) else t
    for b in pw.breakpoints:
        if abs(ft - b) <= _SNAP:
            return b
    return ft


def one_sided_derivatives(model, x):
    """Left and right derivative values at x from the adjacent pieces.

    Equal when x is interior to a piece.  Requires structure and x in (0, 1).
    """
    pw = _require_structure(model)
    if not 0 < float(x) < 1:
        raise ValueError("x must lie in (0, 1)")
    xf = _snap(pw, x)
    interior = pw.breakpoints[1:-1]
    if xf in interior:
        j = pw.breakpoints.index(xf)
        left = pw.pieces[j - 1].derivative()(xf)
        right = pw.pieces[j].derivative()(xf)
        return float(left), float(right)
    d = pw.pieces[pw.piece_index(xf)].derivative()(xf)
    return float(d), float(d)


def _poly_variation(poly, lo, hi):
    """Total variation of an exact polynomial over [lo, hi] (float result)."""
    if hi <= lo or poly.degree <= 0:
        return 0.0
    crit = []
    dcoeffs = [float(c) for c in poly.derivative().coeffs]
    if len(dcoeffs) > 1:
        roots = np.roots(dcoeffs[::-1])
        for r in roots:
            if abs(r.imag) < 1e-12 and lo < r.real < hi:
                crit.append(float(r.real))
    pts = sorted([lo, hi] + crit)
    vals = [poly(p) for p in pts]
    return float(sum(abs(b - a) for a, b in zip(vals, vals[1:])))


def _variation_of_derivative(pw, a, b, exclude=None):
    """Variation of the derivative representative over [a, b].

    Smooth piece variation plus |jump| at breakpoints in (a, b]; a jump at
    `exclude` is dropped (used to recenter across the BV anchor point).
    """
    if b <= a:
        return 0.0
    total = 0.0
    bps = pw.breakpoints
    for i, piece in enumerate(pw.pieces):
        lo = max(a, bps[i])
        hi = min(b, bps[i + 1])
        if hi > lo:
            total += _poly_variation(piece.derivative(), float(lo), float(hi))
    for j in range(1, len(bps) - 1):
        beta = bps[j]
        if a < beta <= b and beta != exclude:
            left = pw.pieces[j - 1].derivative()(beta)
            right = pw.pieces[j].derivative()(beta)
            total += abs(float(right - left))
    return total


def tv_derivative(model, a, b):
    """Total variation of the model's derivative over [a, b]."""
    pw = _require_structure(model)
    af, bf = _snap(pw, a), _snap(pw, b)
    if not 0 <= af <= bf <= 1:
        raise ValueError("need 0 <= a <= b <= 1")
    return _variation_of_derivative(pw, af, bf)


def tv_fx(model, x, a, b):
    """Variation over [a, b] of the derivative recentered at x.

    The recentered derivative subtracts the left limit on [0, x), is 0 at
    x, and subtracts the right limit on (x, 1].  Both one-sided limits of
    the recentered function at x are 0, so crossing x adds no jump; a jump
    of the raw derivative exactly at x is removed by the recentering.
    """
    pw = _require_structure(model)
    if not 0 < float(x) < 1:
        raise ValueError("x must lie in (0, 1)")
    af, bf, xf = _snap(pw, a), _snap(pw, b), _snap(pw, x)
    if not 0 <= af <= bf <= 1:
        raise ValueError("need 0 <= a <= b <= 1")
    if bf <= xf or af >= xf:
        return _variation_of_derivative(pw, af, bf, exclude=xf)
    left = _variation_of_derivative(pw, af, xf, exclude=xf)
    right = _variation_of_derivative(pw, xf, bf, exclude=xf)
    return left + right


def combine_models(terms, name=None):
    """Pointwise linear combination sum_i w_i f_i as a new FunctionModel.

    Structure is merged (breakpoint union, pieces added exactly) when all
    members carry it; otherwise the result is evaluator-only.  Weights may
    be int, Fraction, or float (floats convert exactly).
    """
    terms = [(Fraction(w) if not isinstance(w, Fraction) else w, f) for w, f in terms]
    label = name or "+".join("%s*%s" % (w, f.name) for w, f in terms)

    def evaluator(x, _terms=tuple(terms)):
        acc = None
        for w, f in _terms:
            val = float(w) * np.asarray(f.evaluator(x), dtype=float)
            acc = val if acc is None else acc + val
        return acc

    structure = None
    if all(f.structure is not None for _, f in terms):
        cuts = sorted({b for _, f in terms for b in f.structure.breakpoints})
        pieces = []
        for lo in cuts[:-1]:
            piece = RationalPolynomial()
            for w, f in terms:
                piece = piece + w * f.structure.pieces[f.structure.piece_index(lo)]
            pieces.append(piece)
        structure = PiecewisePoly(tuple(cuts), tuple(pieces))
    tag = (
        "smooth"
        if all(f.smoothness_tag == "smooth" for _, f in terms)
        else "bv-derivative" if structure is not None else "bounded-only"
    )
    return FunctionModel(label, evaluator, structure, tag)


# ---------------------------------------------------------------------------
# Builtin corpus


def _single_piece(poly):
    return PiecewisePoly((Fraction(0), Fraction(1)), (poly,))


def _monomial_model(m):
    return FunctionModel(
        name="e%d" % m,
        evaluator=lambda x, _m=m: np.asarray(x, dtype=float) ** _m,
        structure=_single_piece(RationalPolynomial([0] * m + [1])),
        smoothness_tag="smooth",
    )


def _abs_half():
    half = Fraction(1, 2)
    return FunctionModel(
        name="abs-half",
        evaluator=lambda x: np.abs(np.asarray(x, dtype=float) - 0.5),
        structure=PiecewisePoly(
            (Fraction(0), half, Fraction(1)),
            (RationalPolynomial([half, -1]), RationalPolynomial([-half, 1])),
        ),
        smoothness_tag="bv-derivative",
    )


def _hat(peak):
    peak = Fraction(peak)
    if not 0 < peak < 1:
        raise ValueError("hat peak must lie in (0, 1)")
    up = RationalPolynomial([0, 1 / peak])
    down = RationalPolynomial([1 / (1 - peak), -1 / (1 - peak)])
    pf, qf = float(1 / peak), float(1 / (1 - peak))
    return FunctionModel(
        name="hat@%s" % peak,
        evaluator=lambda x: np.minimum(
            pf * np.asarray(x, dtype=float), qf * (1.0 - np.asarray(x, dtype=float))
        ),
        structure=PiecewisePoly((Fraction(0), peak, Fraction(1)), (up, down)),
        smoothness_tag="bv-derivative",
    )


def _two_kink():
    # continuous piecewise quadratic with derivative kinks at 1/3 and 2/3
    third, two_thirds = Fraction(1, 3), Fraction(2, 3)
    p1 = RationalPolynomial([0, 0, 1])  # x^2
    p2 = RationalPolynomial([Fraction(-2, 9), 1])  # x - 2/9
    p3 = RationalPolynomial([Fraction(2, 9), Fraction(5, 3), -2])  # -2x^2 + 5x/3 + 2/9

    def evaluator(x):
        xs = np.asarray(x, dtype=float)
        return np.where(
            xs < 1 / 3,
            xs * xs,
            np.where(xs < 2 / 3, xs - 2 / 9, -2 * xs * xs + 5 * xs / 3 + 2 / 9),
        )

    return FunctionModel(
        name="two-kink",
        evaluator=evaluator,
        structure=PiecewisePoly((Fraction(0), third, two_thirds, Fraction(1)), (p1, p2, p3)),
        smoothness_tag="bv-derivative",
    )


def _step_deriv(jump_at):
    jump_at = Fraction(jump_at)
    if not 0 < jump_at < 1:
        raise ValueError("jump location must lie in (0, 1)")
    jf = float(jump_at)
    return FunctionModel(
        name="step-deriv@%s" % jump_at,
        evaluator=lambda x: np.minimum(np.asarray(x, dtype=float), jf),
        structure=PiecewisePoly(
            (Fraction(0), jump_at, Fraction(1)),
            (RationalPolynomial([0, 1]), RationalPolynomial([jump_at])),
        ),
        smoothness_tag="bv-derivative",
    )


def _power(zeta, name):
    # evaluator-only: derivative has an algebraic endpoint singularity,
    # so the operator falls back to endpoint-graded quadrature
    return FunctionModel(
        name=name,
        evaluator=lambda x, _z=float(zeta): np.asarray(x, dtype=float) ** _z,
        structure=None,
        smoothness_tag="lipschitz",
    )


@functools.lru_cache(maxsize=1)
def builtin_corpus():
    """The builtin test functions, as a tuple of shared model instances."""
    return (
        _monomial_model(0),
        _monomial_model(1),
        _monomial_model(2),
        _monomial_model(3),
        _monomial_model(4),
        _abs_half(),
        _hat(Fraction(2, 5)),
        _two_kink(),
        _power(Fraction(1, 2), "sqrt"),
        _power(Fraction(1), "pow-1"),
        _step_deriv(Fraction(1, 3)),
    )


def builtin(name):
    """Look up a builtin by name; hat@<r> and step-deriv@<r> are parametric."""
    for model in builtin_corpus():
        if model.name == name:
            return model
    if name.startswith("hat@"):
        return _hat(Fraction(name[4:]))
    if name.startswith("step-deriv@"):
        return _step_deriv(Fraction(name[11:]))
    raise ValueError("unknown builtin function %r" % name)


# ---------------------------------------------------------------------------
# Inline piecewise syntax:  piecewise: 0, p(x)=..., 1/2, p(x)=..., 1

_TERM_RE = re.compile(r"^([0-9][0-9/.]*)?(\*?x(?:\^([0-9]+))?)?$")


def _parse_poly(src):
    s = src.replace(" ", "").replace("**", "^")
    if s.startswith("p(x)="):
        s = s[5:]
    if not s:
        raise ValueError("empty polynomial in piecewise spec")
    chunks = re.findall(r"[+-]?[^+-]+", s)
    coeffs = {}
    for chunk in chunks:
        sign = 1
        body = chunk
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        m = _TERM_RE.match(body)
        if not m or not body:
            raise ValueError("cannot parse polynomial term %r" % chunk)
        coef_s, xpart, pow_s = m.groups()
        if coef_s is None and xpart is None:
            raise ValueError("cannot parse polynomial term %r" % chunk)
        coef = Fraction(coef_s) if coef_s else Fraction(1)
        power = 0
        if xpart:
            power = int(pow_s) if pow_s else 1
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * coef
    top = max(coeffs)
    return RationalPolynomial([coeffs.get(i, Fraction(0)) for i in range(top + 1)])


def parse_piecewise(text):
    """Parse the inline piecewise grammar into a FunctionModel."""
    body = text.split(":", 1)
    if len(body) != 2 or body[0].strip() != "piecewise":
        raise ValueError("piecewise spec must start with 'piecewise:'")
    tokens = [t.strip() for t in body[1].split(",")]
    if len(tokens) < 3 or len(tokens) % 2 == 0:
        raise ValueError("piecewise spec must alternate breakpoint, polynomial")
    breakpoints = [Fraction(tok) for tok in tokens[0::2]]
    pieces = tuple(_parse_poly(tok) for tok in tokens[1::2])
    pw = PiecewisePoly(tuple(breakpoints), pieces)
    return FunctionModel(
        name="piecewise",
        evaluator=pw.evaluate,
        structure=pw,
        smoothness_tag="bv-derivative",
    )


def parse_function_spec(spec):
    """Resolve a CLI function spec: builtin name or inline piecewise."""
    spec = spec.strip()
    if spec.startswith("piecewise"):
        return parse_piecewise(spec)
    return builtin(spec)
