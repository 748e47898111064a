"""Function corpus, one-sided derivatives, and total-variation oracles."""

from fractions import Fraction

import numpy as np
import pytest

from durrbez.exact import RationalPolynomial
from durrbez.functions import (
    FunctionModel,
    PiecewisePoly,
    StructureMissingError,
    builtin,
    builtin_corpus,
    combine_models,
    one_sided_derivatives,
    parse_function_spec,
    parse_piecewise,
    tv_derivative,
    tv_fx,
)


def brute_force_tv_fx(model, x, a, b, points=100001):
    """Independent oracle: partition variation of the recentered derivative.

    Evaluates the right-continuous derivative representative directly from
    the piece polynomials and sums |differences| over a fine partition; the
    one-sided limits at x are taken from just inside each side.
    """
    pw = model.structure
    inner = np.array([float(bp) for bp in pw.breakpoints[1:-1]])
    derivs = [p.derivative() for p in pw.pieces]

    def deriv_at(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        idx = np.searchsorted(inner, ts, side="right")
        vals = np.empty_like(ts)
        for i, d in enumerate(derivs):
            mask = idx == i
            if np.any(mask):
                vals[mask] = d(ts[mask])
        return vals

    left_limit = float(deriv_at(x - 1e-9)[0])
    right_limit = float(deriv_at(x + 1e-9)[0])
    ts = np.linspace(a, b, points)
    vals = deriv_at(ts)
    recentered = np.where(ts < x, vals - left_limit, vals - right_limit)
    recentered[ts == x] = 0.0
    return float(np.sum(np.abs(np.diff(recentered))))


def test_corpus_membership():
    names = [f.name for f in builtin_corpus()]
    for expected in ("e0", "e1", "e2", "e3", "e4", "abs-half", "hat@2/5",
                     "two-kink", "sqrt", "pow-1", "step-deriv@1/3"):
        assert expected in names
    e2 = builtin("e2")
    assert e2.smoothness_tag == "smooth" and e2.structure is not None
    assert builtin("abs-half").smoothness_tag == "bv-derivative"
    assert builtin("sqrt").structure is None
    assert builtin("sqrt").smoothness_tag == "lipschitz"
    assert builtin("pow-1").smoothness_tag == "lipschitz"


def test_corpus_evaluator_structure_agreement():
    xs = np.linspace(0.0, 1.0, 1001)
    for f in builtin_corpus():
        if f.structure is None:
            continue
        direct = np.asarray(f.evaluator(xs), dtype=float)
        via_pieces = f.structure.evaluate(xs)
        assert np.max(np.abs(direct - via_pieces)) <= 1e-14, f.name


def test_parametric_builtins():
    hat = builtin("hat@1/4")
    assert hat.structure.breakpoints[1] == Fraction(1, 4)
    step = builtin("step-deriv@1/2")
    assert float(step.evaluator(0.75)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        builtin("nosuch")


def test_one_sided_derivatives():
    assert one_sided_derivatives(builtin("abs-half"), 0.5) == (-1.0, 1.0)
    left, right = one_sided_derivatives(builtin("e2"), 0.3)
    assert left == pytest.approx(0.6, abs=1e-15)
    assert right == pytest.approx(0.6, abs=1e-15)
    # float 0.4 snaps to the rational breakpoint 2/5
    left, right = one_sided_derivatives(builtin("hat@2/5"), 0.4)
    assert left == pytest.approx(2.5)
    assert right == pytest.approx(-5.0 / 3.0)
    left, right = one_sided_derivatives(builtin("step-deriv@1/3"), 1.0 / 3.0)
    assert (left, right) == (1.0, 0.0)
    with pytest.raises(StructureMissingError):
        one_sided_derivatives(builtin("sqrt"), 0.5)
    with pytest.raises(ValueError):
        one_sided_derivatives(builtin("e2"), 0.0)


def test_tv_derivative_values():
    assert tv_derivative(builtin("e2"), 0.0, 1.0) == pytest.approx(2.0, abs=1e-13)
    assert tv_derivative(builtin("abs-half"), 0.0, 1.0) == pytest.approx(2.0, abs=1e-13)
    assert tv_derivative(builtin("abs-half"), 0.0, 0.4) == 0.0
    with pytest.raises(StructureMissingError):
        tv_derivative(builtin("sqrt"), 0.0, 1.0)


def test_tv_derivative_additivity():
    # breakpoint-aligned split points
    for f, split in [
        (builtin("abs-half"), 0.5),
        (builtin("two-kink"), 1.0 / 3.0),
        (builtin("two-kink"), 2.0 / 3.0),
    ]:
        whole = tv_derivative(f, 0.0, 1.0)
        parts = tv_derivative(f, 0.0, split) + tv_derivative(f, split, 1.0)
        assert whole == pytest.approx(parts, abs=1e-12)


def test_tv_fx_values():
    f = builtin("abs-half")
    assert tv_fx(f, 0.5, 0.3, 0.5) == 0.0
    assert tv_fx(f, 0.5, 0.3, 0.3) == 0.0
    assert tv_fx(builtin("e2"), 0.5, 0.25, 0.5) == pytest.approx(0.5, abs=1e-13)
    # recentering removes the derivative jump at x itself
    assert tv_fx(f, 0.5, 0.25, 0.75) == 0.0
    # but keeps jumps elsewhere: anchor off the kink
    assert tv_fx(f, 0.3, 0.2, 0.7) == pytest.approx(2.0, abs=1e-13)


def test_tv_fx_monotone_in_interval():
    f = builtin("two-kink")
    inner = tv_fx(f, 0.5, 0.3, 0.6)
    outer = tv_fx(f, 0.5, 0.2, 0.8)
    assert outer >= inner - 1e-12


@pytest.mark.parametrize("name", ["abs-half", "two-kink", "e3", "step-deriv@1/3"])
def test_tv_fx_against_brute_force(name):
    f = builtin(name)
    for x, a, b in [(0.5, 0.2, 0.9), (0.3, 0.0, 1.0), (0.7, 0.3, 0.7)]:
        oracle = brute_force_tv_fx(f, x, a, b)
        assert tv_fx(f, x, a, b) == pytest.approx(oracle, abs=1e-5)


def test_combine_models():
    f = combine_models([(2, builtin("e2")), (Fraction(-1, 2), builtin("abs-half"))])
    xs = np.linspace(0.0, 1.0, 101)
    expected = 2 * xs**2 - 0.5 * np.abs(xs - 0.5)
    assert np.max(np.abs(np.asarray(f.evaluator(xs)) - expected)) <= 1e-14
    assert f.structure is not None
    assert Fraction(1, 2) in f.structure.breakpoints
    assert np.max(np.abs(f.structure.evaluate(xs) - expected)) <= 1e-14
    # evaluator-only member forces evaluator-only result
    g = combine_models([(1, builtin("sqrt")), (1, builtin("e1"))])
    assert g.structure is None


def test_piecewise_validation():
    with pytest.raises(ValueError):
        PiecewisePoly((Fraction(0), Fraction(1, 2)), (RationalPolynomial([1]),))
    with pytest.raises(ValueError):
        PiecewisePoly(
            (Fraction(0), Fraction(1, 2), Fraction(1, 2), Fraction(1)),
            (RationalPolynomial([1]),) * 3,
        )


def test_parse_piecewise():
    f = parse_piecewise("piecewise: 0, p(x)=1/2 - x, 1/2, p(x)=x - 1/2, 1")
    xs = np.linspace(0.0, 1.0, 101)
    assert np.max(np.abs(f.evaluator(xs) - np.abs(xs - 0.5))) <= 1e-15
    g = parse_function_spec("piecewise: 0, p(x)=3/2*x^2 - x + 1/4, 1")
    assert g.structure.pieces[0] == RationalPolynomial(["1/4", -1, "3/2"])
    h = parse_function_spec("piecewise: 0, p(x)=2*x**2, 0.25, p(x)=x, 1")
    assert h.structure.breakpoints[1] == Fraction(1, 4)
    assert parse_function_spec("e3").name == "e3"


@pytest.mark.parametrize(
    "bad",
    [
        "piecewise: 0.1, p(x)=x, 1",          # must start at 0
        "piecewise: 0, p(x)=x",               # must end with a breakpoint
        "piecewise: 0, p(x)=x~2, 1",          # bad term
        "piecewise: 0, p(x)=, 1",             # empty polynomial
        "piecewise: 0, p(x)=x, 1/2, p(x)=x, 1/3, p(x)=x, 1",  # not increasing
    ],
)
def test_parse_piecewise_errors(bad):
    with pytest.raises(ValueError):
        parse_piecewise(bad)


def test_function_model_identity_semantics():
    a = FunctionModel("tmp", lambda x: np.asarray(x, float))
    b = FunctionModel("tmp", lambda x: np.asarray(x, float))
    assert a != b and hash(a) != hash(b) or a is not b
