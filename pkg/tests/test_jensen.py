"""Jensen polynomials, renormalization, Hermite limits, hyperbolicity."""

from fractions import Fraction
from math import comb, factorial

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpart import jensen, oracle
from fracpart.numkernel import DomainError, Precision, parse_alpha


# ---------------------------------------------------------------------------
# Polynomial basics
# ---------------------------------------------------------------------------

def test_polynomial_strips_trailing_zeros():
    p = jensen.Polynomial.make([1, 2, 0, 0])
    assert p.coefficients == (1, 2)
    assert p.degree == 1


def test_polynomial_evaluation():
    p = jensen.Polynomial.make([Fraction(1), Fraction(-3), Fraction(2)])
    assert p(Fraction(2)) == 3
    assert p(Fraction(1)) == 0


def test_polynomial_render():
    p = jensen.Polynomial.make([7, 11])
    assert p.render() == "11 X + 7"


# ---------------------------------------------------------------------------
# jensen_poly
# ---------------------------------------------------------------------------

def test_jensen_poly_degree_two_shift_zero(classical_p):
    p = jensen.jensen_poly(classical_p, 2, 0)
    assert p.coefficients == (1, 2, 2)


def test_jensen_poly_shift_one_is_hyperbolic(classical_p):
    # p(1..3) = 1, 2, 3: discriminant (2*2)^2 - 4*1*3 = 4 > 0
    p = jensen.jensen_poly(classical_p, 2, 1)
    assert p.coefficients == (1, 4, 3)
    assert jensen.is_hyperbolic(p)


def test_jensen_poly_shift_two_is_not_hyperbolic(classical_p):
    # p(2..4) = 2, 3, 5: discriminant 36 - 40 < 0
    p = jensen.jensen_poly(classical_p, 2, 2)
    assert not jensen.is_hyperbolic(p)


def test_jensen_poly_shift_25_is_hyperbolic(classical_p):
    assert jensen.is_hyperbolic(jensen.jensen_poly(classical_p, 2, 25))


def test_jensen_poly_binomial_weights():
    tab = oracle.coeffs(parse_alpha("51/7"), 8)
    p = jensen.jensen_poly(tab, 3, 5)
    want = tuple(comb(3, j) * tab.values[5 + j] for j in range(4))
    assert p.coefficients == want


def test_jensen_poly_insufficient_values():
    with pytest.raises(DomainError):
        jensen.jensen_poly([1, 2, 3], 3, 1)


# ---------------------------------------------------------------------------
# hermite
# ---------------------------------------------------------------------------

def test_hermite_small_cases():
    assert jensen.hermite(2).coefficients == (-2, 0, 1)
    assert jensen.hermite(3).coefficients == (0, -6, 0, 1)
    assert jensen.hermite(4).coefficients == (12, 0, -12, 0, 1)


@pytest.mark.parametrize("d", range(0, 9))
def test_hermite_closed_form(d):
    # coefficient of x^(d-2j) is (-1)^j d!/(j!(d-2j)!)
    got = jensen.hermite(d).coefficients
    want = [0] * (d + 1)
    for j in range(d // 2 + 1):
        want[d - 2 * j] = (-1) ** j * factorial(d) // (factorial(j) * factorial(d - 2 * j))
    assert list(got) == want


def test_hermite_polynomials_are_hyperbolic():
    for d in range(1, 9):
        assert jensen.is_hyperbolic(jensen.hermite(d))


# ---------------------------------------------------------------------------
# is_hyperbolic
# ---------------------------------------------------------------------------

def test_hyperbolic_examples():
    assert jensen.is_hyperbolic(jensen.Polynomial.make([-2, 0, 1]))       # X^2 - 2
    assert not jensen.is_hyperbolic(jensen.Polynomial.make([1, 0, 1]))    # X^2 + 1
    assert jensen.is_hyperbolic(jensen.Polynomial.make([0, -6, 0, 1]))    # X^3 - 6X
    assert not jensen.is_hyperbolic(jensen.Polynomial.make([-1, 1, -1, 1]))  # (X-1)(X^2+1)


def test_hyperbolic_with_repeated_roots():
    # (X - 1)^2 and X^3: all roots real with multiplicity
    assert jensen.is_hyperbolic(jensen.Polynomial.make([1, -2, 1]))
    assert jensen.is_hyperbolic(jensen.Polynomial.make([0, 0, 0, 1]))


def test_degree_three_classical_window(classical_p):
    # degree-3 Jensen polynomials of p(n) hold from n = 94 on
    for n in range(94, 201):
        assert jensen.is_hyperbolic(jensen.jensen_poly(classical_p, 3, n))


def test_numeric_mode_determinate():
    p = jensen.Polynomial.make([mp.mpf(-2), mp.mpf(0), mp.mpf(1)])
    assert jensen.is_hyperbolic(p, mode="numeric", tolerance=mp.mpf("1e-30"))
    q = jensen.Polynomial.make([mp.mpf(1), mp.mpf(0), mp.mpf(1)])
    assert not jensen.is_hyperbolic(q, mode="numeric", tolerance=mp.mpf("1e-30"))


def test_numeric_mode_indeterminate_near_double_root():
    # X^2 flips verdict under a +/- tolerance on the constant term
    p = jensen.Polynomial.make([mp.mpf(0), mp.mpf(0), mp.mpf(1)])
    with pytest.raises(jensen.IndeterminateVerdict):
        jensen.is_hyperbolic(p, mode="numeric", tolerance=mp.mpf("1e-10"))


def _compose_affine(p, a, b):
    # exact coefficients of p(a X + b)
    out = [Fraction(0)] * (p.degree + 1)
    for j, c in enumerate(p.coefficients):
        c = Fraction(c)
        # expand c (a X + b)^j
        for i in range(j + 1):
            out[i] += c * comb(j, i) * Fraction(a) ** i * Fraction(b) ** (j - i)
    return jensen.Polynomial.make(out)


@pytest.mark.parametrize("shift", [1, 2, 25, 30])
def test_hyperbolicity_invariance(shift, classical_p):
    p = jensen.jensen_poly(classical_p, 2, shift)
    verdict = jensen.is_hyperbolic(p)
    scaled = jensen.Polynomial.make([7 * c for c in p.coefficients])
    assert jensen.is_hyperbolic(scaled) == verdict
    substituted = _compose_affine(p, Fraction(2), Fraction(-3))
    assert jensen.is_hyperbolic(substituted) == verdict


@settings(deadline=None, max_examples=60)
@given(
    alpha_text=st.sampled_from(["1", "51/7"]),
    n=st.integers(min_value=0, max_value=300),
)
def test_degree_two_is_log_concavity(alpha_text, n, coeff_cache):
    tab = coeff_cache(parse_alpha(alpha_text), 302)
    p = jensen.jensen_poly(tab, 2, n)
    log_concave = tab.values[n + 1] ** 2 >= tab.values[n] * tab.values[n + 2]
    assert jensen.is_hyperbolic(p) == log_concave


# ---------------------------------------------------------------------------
# renormalization
# ---------------------------------------------------------------------------

def test_renorm_params_rejects_small_n():
    with pytest.raises(DomainError):
        jensen.renorm_params(parse_alpha("sqrt(3)"), 4)


def test_renorm_params_values():
    rp = jensen.renorm_params(parse_alpha("sqrt(3)"), 5)
    assert abs(rp.A_n - mp.mpf("0.5574439")) < mp.mpf("1e-6")
    assert abs(rp.delta_n - mp.mpf("0.053966138")) < mp.mpf("1e-8")


def test_renorm_params_decay():
    a = parse_alpha("sqrt(3)")
    params = [jensen.renorm_params(a, n) for n in (1000, 10000, 100000)]
    assert params[0].A_n > params[1].A_n > params[2].A_n > 0
    assert params[0].delta_n > params[1].delta_n > params[2].delta_n > 0


def test_renormalized_jensen_degree_preserved():
    a = parse_alpha("sqrt(3)")
    prec = Precision(60, 10)
    for d in (2, 3):
        assert jensen.renormalized_jensen(a, d, 1000, prec).degree == d


def test_renormalized_jensen_frozen_values():
    a = parse_alpha("sqrt(3)")
    prec = Precision(90, 10)
    p2 = jensen.renormalized_jensen(a, 2, 20000, prec)
    want2 = ("-2.00861401158", "0.0495971787117", "0.999981277596")
    for got, want in zip(p2.coefficients, want2):
        assert abs(got - mp.mpf(want)) < mp.mpf("1e-10")
    p3 = jensen.renormalized_jensen(a, 3, 10000, prec)
    want3 = ("-0.648694505941", "-6.03525590617", "0.0939816899668", "0.999942073409")
    for got, want in zip(p3.coefficients, want3):
        assert abs(got - mp.mpf(want)) < mp.mpf("1e-10")


def test_renormalized_jensen_approaches_hermite():
    a = parse_alpha("sqrt(3)")
    prec = Precision(90, 10)
    for d in (2, 3):
        h = jensen.hermite(d)
        dists = []
        for n in (10000, 50000):
            p = jensen.renormalized_jensen(a, d, n, prec)
            dists.append(max(abs(x - y) for x, y in zip(p.coefficients, h.coefficients)))
        assert dists[1] < dists[0]


# ---------------------------------------------------------------------------
# threshold scans
# ---------------------------------------------------------------------------

def test_threshold_classical_log_concavity():
    assert jensen.hyperbolicity_threshold(1, 2, 200) == 25


def test_threshold_degree_one_never_fails():
    assert jensen.hyperbolicity_threshold(parse_alpha("51/7"), 1, 100) == 0


def test_threshold_frozen_scan():
    assert jensen.hyperbolicity_threshold(parse_alpha("51/7"), 3, 400) == 0


def test_threshold_rejects_small_horizon():
    with pytest.raises(DomainError):
        jensen.hyperbolicity_threshold(1, 3, 3)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def test_build_report_classical():
    rep = jensen.build_report(parse_alpha("1"), 2, 30)
    assert rep.hyperbolic is True
    assert rep.raw.degree == 2
    assert rep.renormalized.degree == 2
    assert rep.hermite_distance > 0


def test_build_report_rational_with_supplied_values():
    tab = oracle.coeffs(parse_alpha("51/7"), 35)
    rep = jensen.build_report(parse_alpha("51/7"), 2, 30, values=tab)
    assert rep.hyperbolic is True
    assert rep.raw.coefficients[0] == tab.values[30]


def test_build_report_real_alpha():
    rep = jensen.build_report(parse_alpha("sqrt(3)"), 2, 100)
    assert rep.hyperbolic is True
    assert rep.raw.degree == 2


def test_report_json_fields():
    import json

    rep = jensen.build_report(parse_alpha("1"), 2, 30)
    doc = json.loads(rep.to_json())
    assert set(doc) == {"alpha", "d", "n", "raw", "renormalized", "hyperbolic",
                        "hermite_distance"}
    assert doc["alpha"] == "1"
    assert doc["hyperbolic"] is True
