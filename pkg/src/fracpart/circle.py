"""Circle-method analytic core.

Dedekind sums, alpha-Kloosterman sums, the truncated Rademacher-type series
p_alpha(n; delta) with a certified tail bound, the asymptotic main term, the
finite exact-rational recovery for rational alpha, and a two-sided numeric
check of the generating function's modular transformation law.

Notation used throughout (all for alpha > 0):

    nu    = sqrt(n - alpha/24)
    mu(m) = sqrt(alpha/24 - m),  m = 0..q,  q = floor(alpha/24)
    order = alpha/2 + 1          (Bessel order of every series term)

and the truncated series

    p_alpha(n; delta) = nu^(-order) * sum_{m<=q} mu(m)^order p_alpha(m)
                        * sum_{1<=k<2 pi mu(m)/delta} (2 pi/k) A_k(n,m)
                        * I_order(4 pi nu mu(m) / k)

whose distance from p_alpha(n) is certified by tail_bound. Summation is in
canonical order (m ascending, k ascending, h ascending) so identical inputs
give bit-identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath as mp

from fracpart import oracle
from fracpart.numkernel import (
    DEFAULT_PRECISION,
    AlphaValue,
    DomainError,
    Precision,
    as_alpha,
    bessel_i,
    nearest_int,
    to_mpf,
)


# ---------------------------------------------------------------------------
# Dedekind sums and modular inverses
# ---------------------------------------------------------------------------

def dedekind_sum(h: int, k: int) -> Fraction:
    """Exact Dedekind sum s(h, k), gcd(h, k) = 1, 0 <= h < k.

    Fast path: the reciprocity law folded into a Euclidean descent,
    O(log k) fraction operations instead of the O(k) defining sum.
    """
    _check_coprime_pair(h, k)
    acc = Fraction(0)
    sign = 1
    while h > 0:
        acc += sign * (Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k))
        h, k, sign = k % h, h, -sign
    return acc


def dedekind_sum_direct(h: int, k: int) -> Fraction:
    """s(h, k) by the defining sum; O(k), kept as the referee for the fast path."""
    _check_coprime_pair(h, k)
    acc = Fraction(0)
    for r in range(1, k):
        hr = h * r
        acc += Fraction(r, k) * (Fraction(hr, k) - hr // k - Fraction(1, 2))
    return acc


def inverse_neg(h: int, k: int) -> int:
    """H in [0, k) with h*H = -1 (mod k); 0 when k = 1."""
    _check_coprime_pair(h, k)
    if k == 1:
        return 0
    return (-pow(h % k, -1, k)) % k


def _check_coprime_pair(h: int, k: int):
    if k < 1:
        raise DomainError("k must be a positive integer")
    if not 0 <= h < k:
        raise DomainError("require 0 <= h < k")
    if gcd(h, k) != 1:
        raise DomainError("require gcd(h, k) = 1")


# ---------------------------------------------------------------------------
# alpha-Kloosterman sums
# ---------------------------------------------------------------------------

def kloosterman(alpha, n: int, m: int, k: int, prec: Precision = DEFAULT_PRECISION) -> mp.mpc:
    """A_k(n, m) = sum over h in [0,k), gcd(h,k)=1 of exp(i theta_h), where

        theta_h = alpha*pi*s(h,k) + (2 pi / k)(m*H - n*h),  h*H = -1 mod k.

    The phase over pi is reduced mod 2 exactly in rational arithmetic for
    rational alpha; for real alpha the irrational part is reduced at working
    precision and the rational part exactly. Summation in h ascending order.
    """
    alpha = as_alpha(alpha)
    if k < 1:
        raise DomainError("k must be a positive integer")
    with prec.ctx():
        if alpha.kind == "real":
            av = alpha.value_at(prec)
        total = mp.mpc(0)
        for h in range(k):
            if gcd(h, k) != 1:
                continue
            s_hk = dedekind_sum(h, k)
            big_h = inverse_neg(h, k)
            frac_part = Fraction(2 * (m * big_h - n * h), k) % 2
            if alpha.kind == "rational":
                phase = (alpha.rational * s_hk + frac_part) % 2
                c, s = mp.cospi(to_mpf(phase)), mp.sinpi(to_mpf(phase))
            else:
                t = mp.fmod(av * to_mpf(s_hk), 2) + to_mpf(frac_part)
                c, s = mp.cospi(t), mp.sinpi(t)
            total += mp.mpc(c, s)
        return total


# ---------------------------------------------------------------------------
# series geometry: nu, mu(m), q, oracle prefix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CirclePoint:
    """Fixed data of the series at (alpha, n): nu, q, the mu ladder, p_alpha(0..q)."""

    alpha: AlphaValue
    n: int
    nu: mp.mpf
    q: int
    mus: tuple
    pm: tuple


def _alpha_floor24(alpha: AlphaValue, prec: Precision) -> int:
    if alpha.kind == "rational":
        a = alpha.rational
        return a.numerator // (24 * a.denominator)
    with prec.ctx():
        return int(mp.floor(alpha.value_at(prec) / 24))


def _require_n_in_range(alpha: AlphaValue, n: int, prec: Precision):
    if alpha.kind == "rational":
        if Fraction(n) <= alpha.rational / 24:
            raise DomainError("require n > alpha/24")
    else:
        with prec.ctx():
            if n <= alpha.value_at(prec) / 24:
                raise DomainError("require n > alpha/24")


def circle_point(alpha, n: int, prec: Precision = DEFAULT_PRECISION) -> CirclePoint:
    """Assemble nu, q, mu(0..q) and the oracle prefix p_alpha(0..q)."""
    alpha = as_alpha(alpha)
    _require_n_in_range(alpha, n, prec)
    q = _alpha_floor24(alpha, prec)
    with prec.ctx():
        av = alpha.value_at(prec)
        nu = mp.sqrt(n - av / 24)
        mus = tuple(mp.sqrt(av / 24 - m) for m in range(q + 1))
    pm = oracle.coeffs(alpha, q, prec).values
    return CirclePoint(alpha=alpha, n=n, nu=nu, q=q, mus=mus, pm=pm)


def _term_cutoff(x: mp.mpf) -> int:
    """Number of integers k with 1 <= k < x, snapping x to an integer when it
    sits within working-precision noise of one (delta values built as
    2*pi*mu/(m+1) land exactly on integer boundaries in exact arithmetic)."""
    if x <= 1:
        return 0
    xr = mp.nint(x)
    snap = mp.mpf(10) ** (-(mp.mp.dps - 8)) * max(mp.mpf(1), abs(x))
    if abs(x - xr) < snap:
        return max(0, int(xr) - 1)
    return max(0, int(mp.ceil(x)) - 1)


# ---------------------------------------------------------------------------
# cached series terms
# ---------------------------------------------------------------------------
#
# For fixed (alpha, n, working precision) the term
#     t(m, k) = (2 pi / k) A_k(n, m) I_order(4 pi nu mu(m) / k)
# does not depend on delta; delta only moves the k-cutoffs. The scans in
# guaranteed/empirical/exact evaluate thousands of truncations of the same
# term sequence, so terms and their prefix sums are cached per (alpha, n, dps).

class _TermCache:
    def __init__(self, point: CirclePoint, prec: Precision):
        self.point = point
        self.prec = prec
        self.terms = [[] for _ in range(point.q + 1)]     # t(m, k), k = 1..
        self.prefix = [[mp.mpc(0)] for _ in range(point.q + 1)]  # cumulative
        self.max_abs = mp.mpf(0)  # largest |scaled contribution| seen

    def ensure(self, m: int, count: int):
        terms, prefix = self.terms[m], self.prefix[m]
        if len(terms) >= count:
            return
        point, prec = self.point, self.prec
        with prec.ctx():
            av = point.alpha.value_at(prec)
            order = av / 2 + 1
            two_pi = 2 * mp.pi
            base = 4 * mp.pi * point.nu * point.mus[m]
            scale = point.mus[m] ** order * to_mpf(point.pm[m]) / point.nu ** order
            for k in range(len(terms) + 1, count + 1):
                ak = kloosterman(point.alpha, point.n, m, k, prec)
                t = (two_pi / k) * ak * bessel_i(order, base / k, prec)
                terms.append(t)
                prefix.append(prefix[-1] + t)
                mag = abs(t) * abs(scale)
                if mag > self.max_abs:
                    self.max_abs = mag

    def block(self, m: int, count: int) -> mp.mpc:
        self.ensure(m, count)
        return self.prefix[m][count]


_TERM_CACHES: dict = {}


def _term_cache(alpha: AlphaValue, n: int, prec: Precision) -> _TermCache:
    key = (alpha.key(), n, prec.work_dps)
    cache = _TERM_CACHES.get(key)
    if cache is None:
        cache = _TermCache(circle_point(alpha, n, prec), prec)
        _TERM_CACHES[key] = cache
    return cache


def clear_caches():
    _TERM_CACHES.clear()


# ---------------------------------------------------------------------------
# truncated series and its certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesApproximation:
    """One evaluation of p_alpha(n; delta) plus its certificates."""

    alpha: AlphaValue
    n: int
    value: mp.mpf            # real part of the computed sum
    imag_residue: mp.mpf     # imaginary part left over (hygiene-checked)
    delta: mp.mpf
    terms_per_m: tuple
    tail_bound: mp.mpf       # certified |p_alpha(n) - value|
    precision_used: Precision

    @property
    def total_terms(self) -> int:
        return sum(self.terms_per_m)

    def to_json(self, digits: int | None = None) -> str:
        d = digits or self.precision_used.decimal_digits
        return json.dumps(
            {
                "alpha": str(self.alpha),
                "n": self.n,
                "delta": mp.nstr(self.delta, d),
                "value": mp.nstr(self.value, d),
                "tail_bound": mp.nstr(self.tail_bound, 10),
                "terms": list(self.terms_per_m),
                "precision": self.precision_used.decimal_digits,
            }
        )


def _delta_range_check(delta, mu0, upper_needed=True):
    if delta <= 0:
        raise DomainError("delta must be positive")
    if upper_needed and delta >= 2 * mp.pi * mu0:
        raise DomainError("delta must be below 2*pi*mu(0)")


def partial_series(alpha, n: int, delta, prec: Precision = DEFAULT_PRECISION) -> SeriesApproximation:
    """Truncated series p_alpha(n; delta) with certified tail bound.

    Summation order is m ascending then k ascending (and h ascending inside
    each Kloosterman sum); reruns are bit-identical. The imaginary residue
    must satisfy |Im| <= 10^(5 - decimal_digits) |Re| or an ArithmeticError
    is raised (the exact sum is real: h and k-h terms are conjugate).
    """
    alpha = as_alpha(alpha)
    cache = _term_cache(alpha, n, prec)
    point = cache.point
    with prec.ctx():
        dv = to_mpf(delta)
        _delta_range_check(dv, point.mus[0])
        av = alpha.value_at(prec)
        order = av / 2 + 1
        counts = tuple(
            _term_cutoff(2 * mp.pi * point.mus[m] / dv) for m in range(point.q + 1)
        )
        total = mp.mpc(0)
        for m in range(point.q + 1):
            if counts[m] == 0:
                continue
            block = cache.block(m, counts[m])
            total += point.mus[m] ** order * to_mpf(point.pm[m]) * block
        total = total / point.nu ** order
        re, im = mp.re(total), mp.im(total)
        hygiene = mp.mpf(10) ** (5 - prec.decimal_digits) * abs(re)
        if abs(im) > hygiene:
            raise ArithmeticError(
                "imaginary residue %s exceeds hygiene bound %s" % (mp.nstr(im, 5), mp.nstr(hygiene, 5))
            )
        tb = tail_bound(alpha, n, dv, prec)
        return SeriesApproximation(
            alpha=alpha,
            n=n,
            value=re,
            imag_residue=im,
            delta=dv,
            terms_per_m=counts,
            tail_bound=tb,
            precision_used=prec,
        )


def m_term_delta(alpha, m_terms: int, prec: Precision = DEFAULT_PRECISION) -> mp.mpf:
    """delta = 2 pi mu(0) / (m_terms + 1): exactly m_terms series terms.

    Only meaningful for 0 < alpha < 24 (q = 0, a single m-block).
    """
    alpha = as_alpha(alpha)
    if m_terms < 1:
        raise DomainError("m_terms must be >= 1")
    if _alpha_floor24(alpha, prec) != 0:
        raise DomainError("m_term_delta requires alpha < 24")
    with prec.ctx():
        av = alpha.value_at(prec)
        return 2 * mp.pi * mp.sqrt(av / 24) / (m_terms + 1)


def tail_constant(alpha, prec: Precision = DEFAULT_PRECISION) -> mp.mpf:
    """C = 4 pi^2 (1 + 2/alpha) mu(0) sum_{m<=q} mu(m)^(alpha/2+1) p_alpha(m)."""
    alpha = as_alpha(alpha)
    q = _alpha_floor24(alpha, prec)
    pm = oracle.coeffs(alpha, q, prec).values
    with prec.ctx():
        av = alpha.value_at(prec)
        order = av / 2 + 1
        mu0 = mp.sqrt(av / 24)
        acc = mp.mpf(0)
        for m in range(q + 1):
            mum = mp.sqrt(av / 24 - m)
            acc += mum ** order * to_mpf(pm[m])
        return 4 * mp.pi ** 2 * (1 + 2 / av) * mu0 * acc


def tail_bound(alpha, n: int, delta, prec: Precision = DEFAULT_PRECISION,
               second_form: bool = False) -> mp.mpf:
    """Certified bound on |p_alpha(n) - p_alpha(n; delta)|.

    Default is the sharper form (C/delta) I_order(2 delta nu) / nu^order;
    second_form=True gives C delta^(alpha/2) I_order(4 pi mu0 nu) /
    (2 pi mu0 nu)^order, the variant whose inversion yields the closed-form
    exact-recovery delta (see recovery_delta).
    """
    alpha = as_alpha(alpha)
    _require_n_in_range(alpha, n, prec)
    c = tail_constant(alpha, prec)
    with prec.ctx():
        av = alpha.value_at(prec)
        order = av / 2 + 1
        nu = mp.sqrt(n - av / 24)
        mu0 = mp.sqrt(av / 24)
        dv = to_mpf(delta)
        _delta_range_check(dv, mu0)
        if second_form:
            x = 2 * mp.pi * mu0 * nu
            return c * dv ** (av / 2) * bessel_i(order, 2 * x, prec) / x ** order
        return (c / dv) * bessel_i(order, 2 * dv * nu, prec) / nu ** order


@dataclass(frozen=True)
class AsymptoticEstimate:
    bessel_form: mp.mpf
    elementary_form: mp.mpf


def asymptotic(alpha, n: int, prec: Precision = DEFAULT_PRECISION) -> AsymptoticEstimate:
    """Leading-order estimates of p_alpha(n), lambda = sqrt(24n/alpha - 1):

    bessel_form     = 2 pi I_order((pi alpha / 6) lambda) / lambda^order
                      (identical to the one-term series truncation when q=0),
    elementary_form = sqrt(12/alpha) exp((alpha pi / 6) lambda) / lambda^((alpha+3)/2).
    """
    alpha = as_alpha(alpha)
    _require_n_in_range(alpha, n, prec)
    with prec.ctx():
        av = alpha.value_at(prec)
        order = av / 2 + 1
        lam = mp.sqrt(24 * n / av - 1)
        bessel_form = 2 * mp.pi * bessel_i(order, (mp.pi * av / 6) * lam, prec) / lam ** order
        elementary_form = (
            mp.sqrt(12 / av) * mp.exp((av * mp.pi / 6) * lam) / lam ** ((av + 3) / 2)
        )
        return AsymptoticEstimate(bessel_form=bessel_form, elementary_form=elementary_form)


# ---------------------------------------------------------------------------
# exact rational recovery
# ---------------------------------------------------------------------------

def _rational_alpha(a: int, b: int) -> AlphaValue:
    if b < 1:
        raise DomainError("b must be a positive integer")
    if gcd(a, b) != 1:
        raise DomainError("require gcd(a, b) = 1")
    if a <= 0:
        raise DomainError("alpha must be positive")
    return as_alpha(Fraction(a, b))


def recovery_delta(a: int, b: int, n: int, prec: Precision = DEFAULT_PRECISION) -> mp.mpf:
    """Closed-form certificate delta for exact recovery, clamped into range:

        delta = ((2 pi mu0 nu)^order / (2 D C I_order(4 pi mu0 nu)))^(2/alpha)

    At this delta the second-form tail bound equals 1/(2D) exactly, so any
    smaller delta certifies correct rounding of D * p_alpha(n; delta).
    """
    alpha = _rational_alpha(a, b)
    _require_n_in_range(alpha, n, prec)
    d = oracle.denominator(a, b, n)
    c = tail_constant(alpha, prec)
    with prec.ctx():
        av = alpha.value_at(prec)
        order = av / 2 + 1
        nu = mp.sqrt(n - av / 24)
        mu0 = mp.sqrt(av / 24)
        x = 2 * mp.pi * mu0 * nu
        delta = (x ** order / (2 * d * c * bessel_i(order, 2 * x, prec))) ** (2 / av)
        cap = 2 * mp.pi * mu0 * (1 - mp.mpf(10) ** -6)
        return min(delta, cap)


def _recovery_precision(d: int) -> Precision:
    return Precision(decimal_digits=max(60, len(str(d)) + 20), guard_digits=10)


def _ladder_scan(alpha: AlphaValue, n: int, threshold: mp.mpf, prec: Precision,
                 cap: int = 1_000_000) -> int:
    """Smallest ladder index j (delta_j = 2 pi mu0 / (j+1)) whose first-form
    tail bound is below threshold. Every term of (C/delta) I(2 delta nu) is a
    positive power of delta, so the bound strictly decreases as j grows;
    bracket the crossing by doubling and bisect for the minimal index."""
    c = tail_constant(alpha, prec)
    with prec.ctx():
        av = alpha.value_at(prec)
        order = av / 2 + 1
        nu = mp.sqrt(n - av / 24)
        mu0 = mp.sqrt(av / 24)
        two_pi_mu0 = 2 * mp.pi * mu0

        def clears(j):
            dv = two_pi_mu0 / (j + 1)
            bound = (c / dv) * bessel_i(order, 2 * dv * nu, prec) / nu ** order
            return bound < threshold

        hi = 1
        while not clears(hi):
            hi *= 2
            if hi > cap:
                raise ArithmeticError(
                    "tail bound never met threshold within %d ladder steps" % cap)
        if hi == 1:
            return 1
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if clears(mid):
                hi = mid
            else:
                lo = mid
        return hi


def _series_value_at_ladder(cache: _TermCache, j: int, prec: Precision):
    """p_alpha(n; 2 pi mu0/(j+1)) via cached prefix sums; returns (value, counts)."""
    point = cache.point
    with prec.ctx():
        av = point.alpha.value_at(prec)
        order = av / 2 + 1
        dv = 2 * mp.pi * point.mus[0] / (j + 1)
        counts = tuple(
            _term_cutoff(2 * mp.pi * point.mus[m] / dv) for m in range(point.q + 1)
        )
        total = mp.mpc(0)
        for m in range(point.q + 1):
            if counts[m]:
                total += point.mus[m] ** order * to_mpf(point.pm[m]) * cache.block(m, counts[m])
        total = total / point.nu ** order
        return mp.re(total), counts


def exact_value(a: int, b: int, n: int) -> Fraction:
    """Exact p_{a/b}(n) by rounding D * p_alpha(n; delta), no oracle involved.

    Policy: D = denominator(a, b, n); evaluation point is the coarsest ladder
    delta_j = 2 pi mu0/(j+1) whose first-form tail bound is < 1/(4D); working
    precision starts at max(60, digits(D) + 20) and doubles until the rounding
    noise estimate (term count x 10^-digits x max term magnitude) is < 1/(4D),
    so tail + noise < 1/(2D) and nearest-integer rounding is certified. The
    closed-form delta (see recovery_delta) also certifies recovery but implies
    astronomically many terms; the ladder delta satisfies the same inequality
    with the sharper first bound form.
    """
    alpha = _rational_alpha(a, b)
    _require_n_in_range(alpha, n, DEFAULT_PRECISION)
    d = oracle.denominator(a, b, n)
    prec = _recovery_precision(d)
    quarter = Fraction(1, 4 * d)
    with prec.ctx():
        j = _ladder_scan(alpha, n, to_mpf(quarter), prec)
    while True:
        cache = _term_cache(alpha, n, prec)
        value, counts = _series_value_at_ladder(cache, j, prec)
        with prec.ctx():
            nterms = sum(counts)
            noise = nterms * mp.mpf(10) ** (-prec.decimal_digits) * max(cache.max_abs, abs(value))
            if noise < to_mpf(quarter):
                dv_scaled = d * value
                r = nearest_int(dv_scaled)
                if abs(dv_scaled - r) > mp.mpf("0.49"):
                    raise ArithmeticError(
                        "rounding ambiguity at n=%d: D*value=%s" % (n, mp.nstr(dv_scaled, 30))
                    )
                return Fraction(r, d)
        prec = Precision(decimal_digits=prec.decimal_digits * 2, guard_digits=10)


def guaranteed_terms(a: int, b: int, n: int) -> int:
    """Smallest ladder term count whose first-form tail bound certifies that
    rounding D * p_alpha(n; delta) recovers p_alpha(n) (bound < 1/(2D))."""
    alpha = _rational_alpha(a, b)
    _require_n_in_range(alpha, n, DEFAULT_PRECISION)
    d = oracle.denominator(a, b, n)
    prec = _recovery_precision(2 * d)
    with prec.ctx():
        j = _ladder_scan(alpha, n, to_mpf(Fraction(1, 2 * d)), prec)
        # translate the ladder index into a total (m, k) term count
        av = alpha.value_at(prec)
        mu0 = mp.sqrt(av / 24)
        dv = 2 * mp.pi * mu0 / (j + 1)
        q = _alpha_floor24(alpha, prec)
        counts = [
            _term_cutoff(2 * mp.pi * mp.sqrt(av / 24 - m) / dv) for m in range(q + 1)
        ]
        return sum(counts)


def empirical_min_terms(a: int, b: int, n: int) -> int:
    """Smallest term count from which rounding is stably correct: one past the
    last ladder index in [1, guaranteed] where rounding D * p_alpha(n; delta_j)
    misses the oracle value. Aborts if the certified index itself fails."""
    alpha = _rational_alpha(a, b)
    _require_n_in_range(alpha, n, DEFAULT_PRECISION)
    d = oracle.denominator(a, b, n)
    p_true = oracle.coeffs(alpha, n).values[n]
    target = p_true * d
    if target.denominator != 1:
        raise ArithmeticError("denominator formula failed to clear p(n)")
    target = target.numerator
    prec = _recovery_precision(d)
    with prec.ctx():
        j_guaranteed = _ladder_scan(alpha, n, to_mpf(Fraction(1, 2 * d)), prec)
    # escalate precision exactly like exact_value so rounding reflects
    # truncation error, not floating noise
    while True:
        cache = _term_cache(alpha, n, prec)
        value_g, counts_g = _series_value_at_ladder(cache, j_guaranteed, prec)
        with prec.ctx():
            noise = sum(counts_g) * mp.mpf(10) ** (-prec.decimal_digits) * max(
                cache.max_abs, abs(value_g)
            )
            if noise < to_mpf(Fraction(1, 4 * d)):
                break
        prec = Precision(decimal_digits=prec.decimal_digits * 2, guard_digits=10)
    cache = _term_cache(alpha, n, prec)
    last_fail = 0
    for j in range(1, j_guaranteed + 1):
        value, counts = _series_value_at_ladder(cache, j, prec)
        with prec.ctx():
            ok = nearest_int(d * value) == target
        if not ok:
            last_fail = j
    if last_fail >= j_guaranteed:
        raise ArithmeticError(
            "rounding failed at the certified term count (n=%d, terms=%d)" % (n, j_guaranteed)
        )
    stable_from = last_fail + 1
    with prec.ctx():
        _, counts = _series_value_at_ladder(cache, stable_from, prec)
        return sum(counts)


# ---------------------------------------------------------------------------
# modular transformation residual
# ---------------------------------------------------------------------------

def functional_equation_residual(alpha, h: int, k: int, z, K: int,
                                 prec: Precision = DEFAULT_PRECISION) -> mp.mpf:
    """|LHS - RHS| of the transformation law of P(x)^alpha, evaluated two-sided:

        P(x)^alpha = exp(i pi alpha s(h,k)) (z/k)^(alpha/2)
                     * exp((alpha pi / 12 k)(k/z - z/k)) P(x')^alpha

    with x = exp((2 pi/k)(i h - z/k)), x' = exp((2 pi/k)(i H - k/z)), Re z > 0.
    Both sides use the K-factor product evaluation with principal branches
    (every exponentiated quantity here has positive real part, where the
    principal branch and the stated branch convention agree). The
    transformation law forces the residual to the size of the two
    product-truncation tails.
    """
    alpha = as_alpha(alpha)
    _check_coprime_pair(h, k)
    with prec.ctx():
        zv = mp.mpmathify(z)
        if mp.re(zv) <= 0:
            raise DomainError("require Re z > 0")
        av = alpha.value_at(prec)
        s_hk = to_mpf(dedekind_sum(h, k))
        big_h = inverse_neg(h, k)
        two_pi_over_k = 2 * mp.pi / k
        x = mp.exp(two_pi_over_k * (mp.mpc(0, h) - zv / k))
        xp = mp.exp(two_pi_over_k * (mp.mpc(0, big_h) - k / zv))
        for name, val in (("x", x), ("x'", xp)):
            if abs(val) >= mp.mpf("0.999"):
                raise DomainError("|%s| too close to 1 for product evaluation" % name)
        lhs = oracle.eval_P_alpha(x, alpha, K, prec)
        prefactor = (
            mp.exp(mp.mpc(0, mp.pi * av * s_hk))
            * mp.power(zv / k, av / 2)
            * mp.exp((av * mp.pi / (12 * k)) * (k / zv - zv / k))
        )
        rhs = prefactor * oracle.eval_P_alpha(xp, alpha, K, prec)
        return abs(lhs - rhs)
