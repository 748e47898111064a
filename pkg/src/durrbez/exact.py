"""Exact rational arithmetic: polynomial algebra, Beta-integral moments,
and machine verification of the operator's moment identities.

Everything in this module is computed over arbitrary-precision rationals;
there is no rounding anywhere.  Machine-word rationals would overflow the
factorial-scale Beta integrals near n = 30, so coefficients are plain
Python Fractions throughout.
"""

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _to_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise TypeError("exact coefficients must be Fraction, int, or str, got %r" % (v,))


class RationalPolynomial:
    """Univariate polynomial with exact rational coefficients.

    Coefficients are stored ascending by degree and canonically trimmed:
    the leading coefficient is nonzero unless the polynomial is zero
    (represented by an empty coefficient tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    @staticmethod
    def _wrap(other):
        if isinstance(other, RationalPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial([other])
        return None

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        xs = np.asarray(x, dtype=float)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = acc * xs + float(c)
        return acc if acc.shape else float(acc)

    def derivative(self):
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def antiderivative(self):
        return RationalPolynomial(
            [Fraction(0)] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        )

    def definite_integral(self, a, b):
        """Exact integral over [a, b]; bounds must be exact (int/Fraction/str)."""
        anti = self.antiderivative()
        return anti(_to_fraction(b)) - anti(_to_fraction(a))

    def to_string(self, var="x"):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                xs = var if i == 1 else "%s^%d" % (var, i)
                body = xs if mag == 1 else "%s*%s" % (mag, xs)
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "RationalPolynomial(%s)" % self.to_string()


X = RationalPolynomial([0, 1])
ONE = RationalPolynomial([1])
ZERO = RationalPolynomial()


def monomial(m):
    """x^m as an exact polynomial."""
    return RationalPolynomial([0] * m + [1])


def bernstein_poly(n, k):
    """p_{n,k} with exact integer coefficients; zero polynomial off-range."""
    if k < 0 or k > n:
        return ZERO
    coeffs = [Fraction(0)] * (n + 1)
    lead = math.comb(n, k)
    for j in range(n - k + 1):
        coeffs[k + j] += Fraction(lead * math.comb(n - k, j) * (-1) ** j)
    return RationalPolynomial(coeffs)


def monomial_moment(n, k, m):
    """Exact (n+1) * int_0^1 u^m p_{n,k}(u) du via the Beta integral.

    Equals (k+1)(k+2)...(k+m) / ((n+2)(n+3)...(n+m+1)).
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = 1
    den = 1
    for j in range(1, m + 1):
        num *= k + j
        den *= n + 1 + j
    return Fraction(num, den)


def bernstein_cdf_row(m, y):
    """Exact partial integrals int_0^y p_{m,i} dt for i = 0..m.

    y must be an exact rational.  Uses the tail-sum form of the
    antiderivative in the degree-(m+1) basis.
    """
    y = _to_fraction(y)
    if y == 0:
        return tuple(Fraction(0) for _ in range(m + 1))
    if y == 1:
        return tuple(Fraction(1, m + 1) for _ in range(m + 1))
    mm = m + 1
    q = 1 - y
    ypow = [Fraction(1)]
    qpow = [Fraction(1)]
    for _ in range(mm):
        ypow.append(ypow[-1] * y)
        qpow.append(qpow[-1] * q)
    row = [math.comb(mm, l) * ypow[l] * qpow[mm - l] for l in range(mm + 1)]
    out = [Fraction(0)] * (m + 1)
    s = Fraction(0)
    for k in range(m, -1, -1):
        s += row[k + 1]
        out[k] = s / mm
    return tuple(out)


def g_poly(cfg, n):
    """The quadratic end weight g(x) = g2 x^2 + g1 x + g0, exact."""
    return RationalPolynomial([cfg.g0(n), cfg.g1(n), cfg.g2(n)])


def g_reflected_poly(cfg, n):
    """g(1 - x), expanded exactly."""
    g0, g1, g2 = cfg.g0(n), cfg.g1(n), cfg.g2(n)
    return RationalPolynomial([g0 + g1 + g2, -g1 - 2 * g2, g2])


def h_poly(cfg, n):
    """The cross weight h(x) = h0 x (1 - x), exact."""
    h0 = cfg.h0(n)
    return RationalPolynomial([0, h0, -h0])


def modified_basis_poly(cfg, n, k):
    """The k-th modified basis function of degree n as an exact polynomial."""
    if n < 3:
        raise ValueError("modified basis requires n >= 3, got %d" % n)
    return (
        g_poly(cfg, n) * bernstein_poly(n - 2, k)
        + h_poly(cfg, n) * bernstein_poly(n - 2, k - 1)
        + g_reflected_poly(cfg, n) * bernstein_poly(n - 2, k - 2)
    )


def monomial_image_poly(m, n, cfg):
    """Exact polynomial image of e_m = x^m under the modified operator.

    Assembled from exact basis polynomials and Beta-integral moments:
        sum_k  w_k(x) * (n+1) int_0^1 u^m p_{n,k}(u) du
    with the modified weights w_k grouped by their three shifted rows.
    """
    if n < 3:
        raise ValueError("operator requires n >= 3, got %d" % n)
    lam = [monomial_moment(n, k, m) for k in range(n + 1)]
    sums = [ZERO, ZERO, ZERO]
    for i in range(n - 1):
        base = bernstein_poly(n - 2, i)
        for shift in range(3):
            coef = lam[i + shift]
            if coef:
                sums[shift] = sums[shift] + coef * base
    return (
        g_poly(cfg, n) * sums[0]
        + h_poly(cfg, n) * sums[1]
        + g_reflected_poly(cfg, n) * sums[2]
    )


def central_moment_poly(order, n, cfg):
    """Exact polynomial of the operator's central moment of a given order.

    Expands (u - x)^order binomially over the monomial images.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError("order must be in 1..4, got %r" % (order,))
    total = ZERO
    for i in range(order + 1):
        sign = (-1) ** (order - i)
        weight = Fraction(sign * math.comb(order, i))
        total = total + weight * monomial(order - i) * monomial_image_poly(i, n, cfg)
    return total


def second_moment_reference(n):
    """The closed-form second central moment (20x(1-x) - 3)/((n+2)(n+3))."""
    return Fraction(1, (n + 2) * (n + 3)) * RationalPolynomial([-3, 20, -20])


def envelope_certificate(n, cfg, denominator=1000):
    """Smallest rational C with  M2(x) <= C * x(1-x)/(n+2)  on a dense grid.

    The grid is x = i/denominator for interior i; at the endpoints both
    sides vanish or the constraint is vacuous.  M2 is the machine-computed
    second central moment, not an assumed formula.
    """
    m2 = central_moment_poly(2, n, cfg)
    best = Fraction(0)
    for i in range(1, denominator):
        x = Fraction(i, denominator)
        ratio = m2(x) * (n + 2) / (x * (1 - x))
        if ratio > best:
            best = ratio
    return best


@dataclass(frozen=True)
class VerificationRow:
    n: int
    identity: str
    kind: str  # "identity" or "certificate"
    ok: bool
    computed: RationalPolynomial | None
    certificate: Fraction | None


@dataclass(frozen=True)
class VerificationReport:
    rows: tuple

    @property
    def all_identities_ok(self):
        return all(r.ok for r in self.rows if r.kind == "identity")

    def to_text(self):
        lines = []
        for r in self.rows:
            if r.kind == "certificate":
                lines.append(
                    "n=%-3d %-32s certified  C = %s" % (r.n, r.identity, r.certificate)
                )
            else:
                status = "ok" if r.ok else "MISMATCH -> %s" % r.computed.to_string()
                lines.append("n=%-3d %-32s %s" % (r.n, r.identity, status))
        return "\n".join(lines) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["n", "identity", "status", "discrepancy", "certificate_num", "certificate_den"]
        )
        for r in self.rows:
            if r.kind == "certificate":
                writer.writerow(
                    [r.n, r.identity, "certified", "",
                     r.certificate.numerator, r.certificate.denominator]
                )
            else:
                writer.writerow(
                    [r.n, r.identity, "ok" if r.ok else "mismatch",
                     "" if r.ok else r.computed.to_string(), "", ""]
                )
        return buf.getvalue()


def _identity_row(n, name, computed, expected):
    ok = computed == expected
    return VerificationRow(
        n=n, identity=name, kind="identity", ok=ok,
        computed=None if ok else computed, certificate=None,
    )


def verify_moment_identities(n_lo, n_hi, cfg=None, grid_denominator=1000):
    """Exact verification sweep over a degree range.

    For each n, checks as exact polynomial identities that the operator
    reproduces 1 and x, that the first central moment vanishes, and that
    the second central moment matches its closed form.  Failures are
    report content (the computed polynomial is emitted verbatim), never
    exceptions.  Also certifies the second-moment envelope constant on a
    dense rational grid.
    """
    if cfg is None:
        from .modified import DEFAULT_CONFIG

        cfg = DEFAULT_CONFIG
    if not 3 <= n_lo <= n_hi:
        raise ValueError("need 3 <= n_lo <= n_hi")
    rows = []
    for n in range(n_lo, n_hi + 1):
        rows.append(_identity_row(n, "reproduce-e0", monomial_image_poly(0, n, cfg), ONE))
        rows.append(_identity_row(n, "reproduce-e1", monomial_image_poly(1, n, cfg), X))
        rows.append(
            _identity_row(n, "first-central-moment-zero", central_moment_poly(1, n, cfg), ZERO)
        )
        rows.append(
            _identity_row(
                n, "second-central-moment-formula",
                central_moment_poly(2, n, cfg), second_moment_reference(n),
            )
        )
        rows.append(
            VerificationRow(
                n=n, identity="second-moment-envelope", kind="certificate",
                ok=True, computed=None,
                certificate=envelope_certificate(n, cfg, grid_denominator),
            )
        )
    return VerificationReport(rows=tuple(rows))
