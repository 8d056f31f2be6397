"""Ground-truth coefficients of P(x)^alpha = prod_k (1 - x^k)^(-alpha).

The logarithmic-derivative recurrence

    n * p(n) = alpha * sum_{j=1..n} sigma(j) * p(n - j),    p(0) = 1,

is exact over the rationals and independent of the circle-method machinery,
which is what makes it usable as a referee for everything else. Rational
alpha gives exact Fraction entries (plain integers when alpha is a positive
integer); real alpha is evaluated in mpmath with extra guard digits because
the recurrence accumulates O(N) roundings.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp

from fracpart.numkernel import (
    DEFAULT_PRECISION,
    AlphaValue,
    DomainError,
    Precision,
    as_alpha,
    to_mpf,
)

# sigma sieve grown on demand; _SIGMA[j] = sum of divisors of j, _SIGMA[0] unused
_SIGMA = [0, 1]


def _grow_sigma(n: int):
    old = len(_SIGMA)
    if n < old:
        return
    new = max(n + 1, 2 * old)
    _SIGMA.extend([0] * (new - old))
    # restart the sieve: divisor d marks all multiples in [old, new)
    for d in range(1, new):
        first = max(d, ((old + d - 1) // d) * d)
        for m in range(first, new, d):
            if m >= old:
                _SIGMA[m] += d


def sigma(j: int) -> int:
    """Sum of divisors of j >= 1."""
    if j < 1:
        raise DomainError("sigma requires j >= 1")
    _grow_sigma(j)
    return _SIGMA[j]


@dataclass(frozen=True)
class CoefficientTable:
    """p_alpha(0..upto); values are Fraction (rational alpha) or mpf."""

    alpha: AlphaValue
    upto: int
    values: tuple

    @property
    def exact(self) -> bool:
        return self.alpha.kind == "rational"

    def __getitem__(self, n: int):
        return self.values[n]

    def value_str(self, n: int, digits: int = 30) -> str:
        v = self.values[n]
        if isinstance(v, Fraction):
            return "%d/%d" % (v.numerator, v.denominator)
        return mp.nstr(v, digits)

    def to_json(self, digits: int = 30) -> str:
        return json.dumps(
            {
                "alpha": str(self.alpha),
                "upto": self.upto,
                "values": [self.value_str(n, digits) for n in range(self.upto + 1)],
            }
        )

    def write_csv(self, stream, digits: int = 30):
        w = csv.writer(stream)
        w.writerow(["n", "value"])
        for n in range(self.upto + 1):
            w.writerow([n, self.value_str(n, digits)])


def coeffs(alpha, N: int, prec: Precision = DEFAULT_PRECISION) -> CoefficientTable:
    """Exact/high-precision table of p_alpha(0..N) via the recurrence."""
    alpha = as_alpha(alpha)
    if N < 0:
        raise DomainError("coeffs requires N >= 0")
    _grow_sigma(max(N, 1))
    sig = _SIGMA

    if alpha.kind == "rational":
        a = alpha.rational
        if a.denominator == 1:
            # integer alpha: the recurrence closes over the integers
            ai = a.numerator
            vals = [1]
            for n in range(1, N + 1):
                acc = 0
                for j in range(1, n + 1):
                    acc += sig[j] * vals[n - j]
                q, r = divmod(ai * acc, n)
                if r:  # cannot happen: p_alpha(n) is an integer for integer alpha
                    vals.append(Fraction(ai * acc, n))
                else:
                    vals.append(q)
            return CoefficientTable(alpha, N, tuple(vals))
        vals = [Fraction(1)]
        for n in range(1, N + 1):
            acc = Fraction(0)
            for j in range(1, n + 1):
                acc += sig[j] * vals[n - j]
            vals.append(a * acc / n)
        return CoefficientTable(alpha, N, tuple(vals))

    # real alpha: 10 extra guard digits on top of work_dps for the O(N) roundings
    with prec.ctx(10):
        av = alpha.value_at(prec)
        vals = [mp.mpf(1)]
        for n in range(1, N + 1):
            acc = mp.mpf(0)
            for j in range(1, n + 1):
                acc += sig[j] * vals[n - j]
            vals.append(av * acc / n)
    return CoefficientTable(alpha, N, tuple(vals))


def denominator(a: int, b: int, n: int) -> int:
    """Denominator bound D for p_{a/b}(n): b^n * prod_{p | b} p^(ord_p(n!)).

    The true reduced denominator of p_{a/b}(n) always divides D, so D clears
    it; ord_p(n!) by Legendre's formula.
    """
    if b < 1:
        raise DomainError("denominator requires b >= 1")
    if gcd(a, b) != 1:
        raise DomainError("denominator requires gcd(a, b) = 1")
    if n < 0:
        raise DomainError("denominator requires n >= 0")
    d = b ** n
    # distinct primes of b
    rem = b
    p = 2
    primes = []
    while p * p <= rem:
        if rem % p == 0:
            primes.append(p)
            while rem % p == 0:
                rem //= p
        p += 1
    if rem > 1:
        primes.append(rem)
    for p in primes:
        ordp = 0
        pk = p
        while pk <= n:
            ordp += n // pk
            pk *= p
        d *= p ** ordp
    return d


def eval_P_alpha(x, alpha, K: int, prec: Precision = DEFAULT_PRECISION):
    """K-factor truncation of P(x)^alpha = prod_{k<=K} exp(-alpha log(1 - x^k)).

    Principal branch throughout; requires |x| < 0.999 so the truncated tail
    factor is exp(O(alpha |x|^(K+1) / (1 - |x|))).
    """
    alpha = as_alpha(alpha)
    if K < 1:
        raise DomainError("eval_P_alpha requires K >= 1")
    with prec.ctx():
        xv = mp.mpmathify(x)
        if abs(xv) >= mp.mpf("0.999"):
            raise DomainError("eval_P_alpha requires |x| < 0.999")
        av = alpha.value_at(prec)
        log_sum = mp.mpf(0)
        xk = mp.mpf(1) if mp.im(xv) == 0 else mp.mpc(1)
        for _ in range(K):
            xk = xk * xv
            log_sum = log_sum + mp.log(1 - xk)
        return mp.exp(-av * log_sum)
