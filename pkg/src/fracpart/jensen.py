"""Jensen polynomials of p_alpha, renormalization, and hyperbolicity tests.

The degree-d shift-n Jensen polynomial of a coefficient source a(.) is

    J^{d,n}(x) = sum_{j=0..d} binom(d,j) a(n+j) x^j,

"hyperbolic" meaning all roots real. The renormalized polynomial

    Jhat^{d,n}(X) = (delta(n)^-d / p(n)) * J^{d,n}((delta(n) X - 1) / exp(A(n)))

with the explicit A(n), delta(n) below converges coefficientwise to the
Hermite polynomial H_d (normalization H_{d+1} = X H_d - 2d H_{d-1}).

Real-rootedness is decided by exact Sturm chains over the rationals whenever
the coefficients are exact; the numeric mode (for irrational alpha) reruns
the exact test on interval endpoints widened by a tolerance and refuses to
answer when the verdict is not stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath as mp

from fracpart import circle, oracle
from fracpart.numkernel import (
    DEFAULT_PRECISION,
    AlphaValue,
    DomainError,
    Precision,
    as_alpha,
    mpf_to_fraction,
    to_mpf,
)


class IndeterminateVerdict(ArithmeticError):
    """Numeric-mode hyperbolicity verdict flips within the stated tolerance."""


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in ascending degree; () is the zero polynomial."""

    coefficients: tuple

    @staticmethod
    def make(coeffs) -> "Polynomial":
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        return Polynomial(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def render(self, var: str = "X", digits: int = 6) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if _is_zero(c):
                continue
            cs = str(c) if isinstance(c, (int, Fraction)) else mp.nstr(mp.mpf(c), digits)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if i == 0:
                term = mag
            elif i == 1:
                term = "%s %s" % (mag, var)
            else:
                term = "%s %s^%d" % (mag, var, i)
            if not parts:
                parts.append(("-" if neg else "") + term)
            else:
                parts.append(("- " if neg else "+ ") + term)
        return " ".join(parts)


def _is_zero(c) -> bool:
    return c == 0


# ---------------------------------------------------------------------------
# coefficient sources
# ---------------------------------------------------------------------------

def _source_get(values, idx: int):
    if isinstance(values, oracle.CoefficientTable):
        if idx > values.upto:
            raise DomainError("coefficient table too short: need index %d" % idx)
        return values.values[idx]
    if callable(values):
        return values(idx)
    try:
        return values[idx]
    except (IndexError, KeyError) as exc:
        raise DomainError("coefficient source lacks index %d" % idx) from exc


def _default_values(alpha: AlphaValue, n: int, d: int, prec: Precision):
    """p_alpha(n..n+d) plus a certified error bound per value.

    Rational alpha: exact rational recovery, error 0. Irrational alpha: the
    100-term series truncation, error = its certified tail bound.
    """
    vals, errs = [], []
    if alpha.kind == "rational":
        a, b = alpha.rational.numerator, alpha.rational.denominator
        for j in range(d + 1):
            vals.append(circle.exact_value(a, b, n + j))
            errs.append(mp.mpf(0))
    else:
        delta = circle.m_term_delta(alpha, 100, prec)
        for j in range(d + 1):
            approx = circle.partial_series(alpha, n + j, delta, prec)
            vals.append(approx.value)
            errs.append(approx.tail_bound)
    return vals, errs


# ---------------------------------------------------------------------------
# Jensen polynomial, renormalization, Hermite target
# ---------------------------------------------------------------------------

def jensen_poly(values, d: int, n: int) -> Polynomial:
    """J^{d,n}(x) with coefficient of x^j equal to binom(d,j) * values(n+j)."""
    if d < 1:
        raise DomainError("d must be a positive integer")
    if n < 0:
        raise DomainError("n must be >= 0")
    return Polynomial.make(comb(d, j) * _source_get(values, n + j) for j in range(d + 1))


@dataclass(frozen=True)
class RenormParams:
    A_n: mp.mpf
    delta_n: mp.mpf


def renorm_params(alpha, n: int, prec: Precision = DEFAULT_PRECISION) -> RenormParams:
    """A(n) = 2 pi sqrt(alpha/(24n - alpha)) - 24/(24n - alpha) and
    delta(n) = sqrt(12 pi sqrt(alpha)/(24n - alpha)^(3/2) - 288 alpha/(24n - alpha)^2).

    Errors out (rather than defining behavior) when the radicand is <= 0,
    which happens for n below roughly alpha * (1 + 576/pi^2) / 24.
    """
    alpha = as_alpha(alpha)
    with prec.ctx():
        av = alpha.value_at(prec)
        t = 24 * n - av
        if t <= 0:
            raise DomainError("renorm_params requires 24n > alpha")
        a_n = 2 * mp.pi * mp.sqrt(av / t) - 24 / t
        radicand = 12 * mp.pi * mp.sqrt(av) / t ** mp.mpf("1.5") - 288 * av / t ** 2
        if radicand <= 0:
            raise DomainError("delta(n) radicand is nonpositive at n=%d" % n)
        return RenormParams(A_n=a_n, delta_n=mp.sqrt(radicand))


def renormalized_jensen(alpha, d: int, n: int, prec: Precision = DEFAULT_PRECISION,
                        values=None) -> Polynomial:
    """Jhat^{d,n}(X) = (delta^-d / p(n)) J^{d,n}((delta X - 1)/exp(A)).

    Expanding the affine substitution, the coefficient of X^i is

        delta^(i-d)/p(n) * sum_{j>=i} binom(d,j) p(n+j) e^(-Aj) binom(j,i) (-1)^(j-i).

    values overrides the coefficient source (defaults to exact recovery for
    rational alpha, the 100-term certified series for irrational alpha).
    """
    alpha = as_alpha(alpha)
    if d < 1:
        raise DomainError("d must be a positive integer")
    params = renorm_params(alpha, n, prec)
    if values is None:
        vals, _ = _default_values(alpha, n, d, prec)
    else:
        vals = [_source_get(values, n + j) for j in range(d + 1)]
    with prec.ctx():
        pv = [to_mpf(v) for v in vals]
        if pv[0] == 0:
            raise DomainError("p_alpha(n) = 0; renormalization undefined")
        e_neg_a = mp.exp(-params.A_n)
        dl = params.delta_n
        coeffs = []
        for i in range(d + 1):
            acc = mp.mpf(0)
            for j in range(i, d + 1):
                acc += comb(d, j) * pv[j] * e_neg_a ** j * comb(j, i) * (-1) ** (j - i)
            coeffs.append(acc * dl ** i / (dl ** d * pv[0]))
        return Polynomial.make(coeffs)


def hermite(d: int) -> Polynomial:
    """H_d with H_0 = 1, H_1 = X, H_{d+1} = X H_d - 2d H_{d-1} (integer coeffs)."""
    if d < 0:
        raise DomainError("d must be >= 0")
    prev, cur = [1], [0, 1]
    if d == 0:
        return Polynomial.make(prev)
    for m in range(1, d):
        nxt = [0] + cur
        for i, c in enumerate(prev):
            nxt[i] -= 2 * m * c
        prev, cur = cur, nxt
    return Polynomial.make(cur)


# ---------------------------------------------------------------------------
# exact real-rootedness (Sturm chains over Fraction)
# ---------------------------------------------------------------------------

def _trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _deriv(cs):
    return [i * c for i, c in enumerate(cs)][1:]


def _divmod_poly(a, b):
    a = _trim(a[:])
    b = _trim(b[:])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        _trim(a)
    return _trim(q), a


def _squarefree(cs):
    # cs / gcd(cs, cs'): multiple roots collapse, verdict unchanged
    a, b = cs[:], _deriv(cs)
    while b:
        _, r = _divmod_poly(a, b)
        a, b = b, r
    g = a
    if len(g) <= 1:
        return cs[:]
    quot, rem = _divmod_poly(cs[:], g)
    assert not rem
    return quot


def _sturm_chain(cs):
    chain = [cs[:], _deriv(cs)]
    while chain[-1]:
        _, r = _divmod_poly(chain[-2][:], chain[-1])
        chain.append([-c for c in r])
    chain.pop()
    return chain


def _variations(signs):
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _real_root_count(cs) -> int:
    chain = _sturm_chain(cs)
    at_pos = [_sign(p[-1]) for p in chain if p]
    at_neg = [_sign(p[-1]) * (-1) ** (len(p) - 1) for p in chain if p]
    return _variations(at_neg) - _variations(at_pos)


def _exact_hyperbolic(coeffs) -> bool:
    cs = _trim([Fraction(c) for c in coeffs])
    if not cs:
        raise DomainError("zero polynomial has no hyperbolicity verdict")
    if len(cs) <= 2:
        return True  # constants and linear polynomials
    sf = _squarefree(cs)
    return _real_root_count(sf) == len(sf) - 1


def is_hyperbolic(p: Polynomial, mode: str = "exact", tolerance=None) -> bool:
    """All roots real? Exact Sturm verdict for rational coefficients.

    mode="numeric" widens every coefficient into an interval of radius
    `tolerance`, reruns the exact test on all interval corners, and raises
    IndeterminateVerdict if any corner disagrees with the center.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial.make(p)
    if mode == "exact":
        for c in p.coefficients:
            if not isinstance(c, (int, Fraction)):
                raise DomainError("exact mode needs rational coefficients; use numeric mode")
        return _exact_hyperbolic(p.coefficients)
    if mode != "numeric":
        raise DomainError("mode must be 'exact' or 'numeric'")
    if tolerance is None or tolerance <= 0:
        raise DomainError("numeric mode needs a positive tolerance")
    center = [
        c if isinstance(c, (int, Fraction)) else mpf_to_fraction(mp.mpf(c))
        for c in p.coefficients
    ]
    tol = tolerance if isinstance(tolerance, Fraction) else mpf_to_fraction(mp.mpf(tolerance))
    if abs(center[-1]) <= tol:
        raise IndeterminateVerdict("leading coefficient smaller than tolerance")
    verdict = _exact_hyperbolic(center)
    ncoef = len(center)
    if ncoef <= 12:
        corners = range(1 << ncoef)
        patterns = (
            [tol if (mask >> i) & 1 else -tol for i in range(ncoef)] for mask in corners
        )
    else:  # probe a fixed set of sign patterns instead of 2^n corners
        patterns = (
            [s * tol * (1 if (i % per) == 0 else -1) for i in range(ncoef)]
            for s in (1, -1)
            for per in (1, 2, 3)
        )
    for shift in patterns:
        jittered = [c + ds for c, ds in zip(center, shift)]
        if _exact_hyperbolic(jittered) != verdict:
            raise IndeterminateVerdict("verdict flips within tolerance")
    return verdict


def hyperbolicity_threshold(alpha, d: int, horizon: int,
                            prec: Precision = DEFAULT_PRECISION, values=None):
    """Smallest n0 <= horizon with J^{d,n} hyperbolic for every n in [n0, horizon].

    Empirical proxy for the true threshold N_d(alpha): the scan cannot rule
    out failures beyond the horizon. Returns None when even n = horizon fails.
    Rational alpha gets exact verdicts from the oracle table; irrational alpha
    uses numeric mode with a tolerance tied to the table's precision.
    """
    alpha = as_alpha(alpha)
    if horizon <= d:
        raise DomainError("horizon must exceed d")
    if values is None:
        values = oracle.coeffs(alpha, horizon + d, prec)
    exact = alpha.kind == "rational"
    last_fail = None
    with prec.ctx():
        for n in range(0, horizon + 1):
            poly = jensen_poly(values, d, n)
            if exact:
                ok = is_hyperbolic(poly, mode="exact")
            else:
                scale = max(abs(to_mpf(c)) for c in poly.coefficients)
                tol = scale * mp.mpf(10) ** (-(prec.decimal_digits - 10))
                ok = is_hyperbolic(poly, mode="numeric", tolerance=tol)
            if not ok:
                last_fail = n
    if last_fail is None:
        return 0
    if last_fail == horizon:
        return None
    return last_fail + 1


# ---------------------------------------------------------------------------
# report record
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JensenReport:
    alpha: AlphaValue
    d: int
    n: int
    raw: Polynomial
    renormalized: Polynomial
    hyperbolic: bool
    hermite_distance: mp.mpf

    def to_json(self, digits: int = 15) -> str:
        def cstr(c):
            if isinstance(c, (int, Fraction)):
                return str(c)
            return mp.nstr(mp.mpf(c), digits)

        return json.dumps(
            {
                "alpha": str(self.alpha),
                "d": self.d,
                "n": self.n,
                "raw": [cstr(c) for c in self.raw.coefficients],
                "renormalized": [cstr(c) for c in self.renormalized.coefficients],
                "hyperbolic": self.hyperbolic,
                "hermite_distance": mp.nstr(self.hermite_distance, 10),
            }
        )


def build_report(alpha, d: int, n: int, prec: Precision = DEFAULT_PRECISION,
                 values=None) -> JensenReport:
    """Raw + renormalized Jensen polynomial at (alpha, d, n) with verdict."""
    alpha = as_alpha(alpha)
    if values is None:
        vals, errs = _default_values(alpha, n, d, prec)
    else:
        vals = [_source_get(values, n + j) for j in range(d + 1)]
        errs = [mp.mpf(0)] * (d + 1)
    table = {n + j: vals[j] for j in range(d + 1)}
    raw = jensen_poly(table, d, n)
    renorm = renormalized_jensen(alpha, d, n, prec, values=table)
    with prec.ctx():
        if alpha.kind == "rational":
            verdict = is_hyperbolic(raw, mode="exact")
        else:
            tol = mp.mpf(0)
            scale = mp.mpf(0)
            for j in range(d + 1):
                tol = max(tol, comb(d, j) * errs[j])
                scale = max(scale, comb(d, j) * abs(to_mpf(vals[j])))
            tol = max(tol, scale * mp.mpf(10) ** (-(prec.decimal_digits - 10)))
            verdict = is_hyperbolic(raw, mode="numeric", tolerance=tol)
        target = hermite(d)
        hc = list(target.coefficients) + [0] * max(0, d + 1 - len(target.coefficients))
        rc = list(renorm.coefficients) + [0] * max(0, d + 1 - len(renorm.coefficients))
        dist = max(abs(to_mpf(a) - to_mpf(b)) for a, b in zip(rc, hc))
    return JensenReport(
        alpha=alpha, d=d, n=n, raw=raw, renormalized=renorm,
        hyperbolic=verdict, hermite_distance=dist,
    )
