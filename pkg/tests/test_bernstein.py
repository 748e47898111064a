"""Basis polynomial tests against independent exact and quadrature oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest

from durrbez.bernstein import (
    bernstein_all,
    bernstein_eval,
    bernstein_integral_01,
    bernstein_partial_integral,
    bernstein_rows,
    partial_integral_row,
)


def exact_binomial_value(n, k, x):
    """Independent oracle: C(n,k) x^k (1-x)^(n-k) in exact rationals."""
    if k < 0 or k > n:
        return Fraction(0)
    fx = Fraction(x)
    return math.comb(n, k) * fx**k * (1 - fx) ** (n - k)


def simpson(f, a, b, panels=20000):
    xs = np.linspace(a, b, 2 * panels + 1)
    ys = f(xs)
    h = (b - a) / (2 * panels)
    return h / 3 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum() + 2 * ys[2:-1:2].sum())


def test_single_values():
    assert bernstein_eval(2, 1, 0.5) == pytest.approx(0.5, abs=1e-15)
    assert bernstein_eval(5, 7, 0.3) == 0.0
    assert bernstein_eval(5, -1, 0.3) == 0.0
    # frozen from the exact oracle: C(10,3) (1/4)^3 (3/4)^7 = 32805/131072
    assert exact_binomial_value(10, 3, Fraction(1, 4)) == Fraction(32805, 131072)
    assert bernstein_eval(10, 3, 0.25) == pytest.approx(32805 / 131072, abs=1e-15)


def test_endpoints_and_large_degree():
    assert bernstein_eval(80, 0, 0.0) == 1.0
    assert bernstein_eval(80, 3, 0.0) == 0.0
    assert bernstein_eval(80, 80, 1.0) == 1.0
    # log-gamma path against the exact rational oracle
    for n, k, x in [(100, 30, 0.3), (200, 150, 0.8), (61, 1, 0.01)]:
        exact = float(exact_binomial_value(n, k, Fraction(x)))
        assert bernstein_eval(n, k, float(Fraction(x))) == pytest.approx(exact, rel=1e-11)


def test_rows_small():
    assert bernstein_all(1, 0.3) == pytest.approx([0.7, 0.3], abs=1e-15)
    assert bernstein_all(3, 0.5) == pytest.approx([0.125, 0.375, 0.375, 0.125], abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 50, 200, 500])
def test_partition_of_unity_and_nonnegativity(n):
    xs = np.linspace(0.0, 1.0, 101)
    rows = bernstein_rows(n, xs)
    assert np.all(rows >= 0.0)
    assert np.max(np.abs(rows.sum(axis=1) - 1.0)) <= 1e-12


def test_symmetry():
    xs = np.linspace(0.0, 1.0, 51)
    for n in (4, 21, 60):
        left = bernstein_rows(n, xs)
        right = bernstein_rows(n, 1.0 - xs)
        assert np.max(np.abs(left - right[:, ::-1])) <= 1e-13


@pytest.mark.parametrize("n", [1, 7, 33, 60])
def test_recurrence_matches_direct_binomial(n):
    xs = np.linspace(0.0, 1.0, 21)
    rows = bernstein_rows(n, xs)
    for i, x in enumerate(xs):
        fx = Fraction(float(x))
        for k in range(n + 1):
            exact = float(exact_binomial_value(n, k, fx))
            assert rows[i, k] == pytest.approx(exact, rel=1e-12, abs=1e-300)


def test_domain_handling():
    with pytest.raises(ValueError):
        bernstein_eval(3, 1, 1.2)
    with pytest.raises(ValueError):
        bernstein_rows(3, [-0.01, 0.5])
    # inside the clamp tolerance
    assert bernstein_eval(3, 0, 1.0 + 1e-13) == pytest.approx(0.0, abs=1e-12)


def test_full_integral():
    assert bernstein_integral_01(4, 2) == Fraction(1, 5)
    assert bernstein_integral_01(0, 0) == Fraction(1)
    # independent oracle: int_0^1 (1-u)^7 du
    poly_integral = Fraction(1, 8)
    assert bernstein_integral_01(7, 0) == poly_integral
    with pytest.raises(ValueError):
        bernstein_integral_01(4, 5)


def test_partial_integral_values():
    assert bernstein_partial_integral(3, 1, 0.0) == 0.0
    assert bernstein_partial_integral(3, 1, 1.0) == pytest.approx(0.25, abs=1e-15)
    # quadrature oracle for the interior value
    oracle = simpson(lambda u: 15 * u**2 * (1 - u) ** 4, 0.0, 0.4)
    assert bernstein_partial_integral(6, 2, 0.4) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("n,k", [(3, 1), (10, 0), (25, 25), (40, 13)])
def test_partial_integral_monotone(n, k):
    ys = np.linspace(0.0, 1.0, 41)
    vals = [bernstein_partial_integral(n, k, y) for y in ys]
    assert vals[0] == 0.0
    assert vals[-1] == pytest.approx(1.0 / (n + 1), abs=1e-14)
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_partial_integral_row_matches_single():
    row = partial_integral_row(12, 0.37)
    for k in range(13):
        assert row[k] == pytest.approx(bernstein_partial_integral(12, k, 0.37), abs=1e-16)
