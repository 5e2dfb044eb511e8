from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from m24forms.classical import eta, eta_product_form, eta_quotient, theta, theta_sum
from m24forms.series import (
    PQY,
    Q,
    QY,
    ExactSeries,
    SignatureError,
    WindowError,
    binomial_factor_pow,
    series_exp,
    series_inv,
    series_log,
)


def qs(coeffs, hi, offset=0):
    return ExactSeries.from_dict(Q, {Fraction(offset) + i: c for i, c in enumerate(coeffs) if c}, hi=(hi,))


def geometric(hi):
    return qs([1] * hi, hi)


# -- strategies ---------------------------------------------------------------

small = st.integers(min_value=-5, max_value=5)


@st.composite
def q_series(draw, hi=6):
    # exponents on the 1/24 lattice in [0, hi)
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        e = Fraction(draw(st.integers(0, 24 * hi - 1)), 24)
        terms[e] = draw(small)
    return ExactSeries.from_dict(Q, terms, hi=(hi,), lo=(0,))


@st.composite
def qy_series(draw, hi=4):
    n = draw(st.integers(0, 5))
    terms = {}
    for _ in range(n):
        e = (draw(st.integers(0, hi - 1)), Fraction(draw(st.integers(-6, 6)), 2))
        terms[e] = draw(small)
    return ExactSeries.from_dict(QY, terms, hi=(hi, None), lo=(0, -3))


@st.composite
def unit_q_series(draw, hi=5):
    s = draw(q_series(hi))
    c = draw(st.integers(1, 4)) * draw(st.sampled_from([1, -1]))
    lead = ExactSeries.from_dict(Q, {0: c}, hi=(hi,))
    # drop any constant term then add a nonzero one
    return s.truncate(q=hi) - ExactSeries.from_dict(Q, {0: s.coeff(0)}, hi=(hi,)) + lead


# -- add / mul -----------------------------------------------------------------

def test_add_cancellation():
    a = qs([1, 1], 5)
    b = qs([1, -1], 5)
    assert (a + b).agrees(qs([2], 5))
    assert (a + b).coeff(1) == 0


def test_add_zero_identity():
    a = qs([3, 0, -2], 4)
    assert (a + ExactSeries.zero(Q, hi=(4,))).agrees(a)


def test_like_terms_on_fine_lattice():
    a = ExactSeries.from_dict(Q, {Fraction(1, 24): 1}, hi=(2,))
    assert (a + a).coeff(Fraction(1, 24)) == 2


def test_add_takes_minimum_window():
    a = qs([1], 3)
    b = qs([1], 7)
    assert (a + b).hi_natural("q") == 3


def test_signature_mismatch():
    with pytest.raises(SignatureError):
        qs([1], 3) + ExactSeries.one(QY, hi=(3, None))


def test_geometric_series():
    one_minus_q = qs([1, -1], 10)
    assert (one_minus_q * geometric(10)).agrees(ExactSeries.one(Q, hi=(10,)))


def test_eta_times_inverse():
    T = 12
    e = eta(T)
    prod = e * series_inv(e)
    assert prod.hi_natural("q") >= T - Fraction(1, 24) - 1
    assert prod.agrees(ExactSeries.one(Q, hi=(T,)))
    assert not prod.is_zero()


def test_theta1_squared_leading_terms():
    # two q-orders of the product: -q^(1/4) y^-1 (1 - y)^2 (1 + O(q))
    th = theta(1, 2)
    sq = th * th
    assert sq.phase == 0
    lead = {e: c for e, c in sq.items() if e[0] == Fraction(1, 4)}
    assert lead == {(Fraction(1, 4), -1): -1, (Fraction(1, 4), 0): 2, (Fraction(1, 4), 1): -1}
    assert min(e[0] for e, _ in sq.items()) == Fraction(1, 4)


# -- inverse -------------------------------------------------------------------

def test_inverse_geometric():
    inv = series_inv(qs([1, -1], 8))
    assert inv.agrees(geometric(8))


def test_inverse_eta24_constant_term():
    inv = series_inv(eta_product_form(12) ** 24)
    assert inv.coeff(-1) == 1
    assert inv.coeff(0) == 24


def test_inverse_monomial():
    inv = series_inv(ExactSeries.monomial(Q, Fraction(1, 8), hi=(3,)))
    assert inv.coeff(Fraction(-1, 8)) == 1
    assert len(inv) == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        series_inv(ExactSeries.zero(Q, hi=(4,)))


def test_inverse_needs_window_for_y_blocks():
    th = theta_sum(1, 3)
    inv = th.inverse(window={"y": 6})
    one = (th * inv).truncate(y=4)
    assert one.coeff(0, 0) == 1
    for e, c in one.items():
        assert e == (0, 0) and c == 1


# -- exp / log -----------------------------------------------------------------

def test_exp_zero():
    assert series_exp(ExactSeries.zero(Q, hi=(5,))).agrees(ExactSeries.one(Q, hi=(5,)))


def test_exp_log_inverse_pair():
    s = qs([1, -1], 9)
    assert series_exp(series_log(s)).agrees(s)


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        series_exp(qs([1, 1], 4))


def test_exp_of_divisor_sum_is_inverse_eta24():
    # q^-1 exp(sum_{n,k} 24 q^(nk)/k) against the direct inverse of the eta product
    T = 10
    terms = {}
    for n in range(1, T):
        for k in range(1, T):
            if n * k < T:
                terms[n * k] = terms.get(n * k, 0) + Fraction(24, k)
    E = series_exp(ExactSeries.from_dict(Q, terms, hi=(T,), lo=(0,))).shift((-1,))
    direct = series_inv(eta_product_form(T) ** 24)
    assert E.agrees(direct)
    assert E.coeff(4) == 176256


# -- binomial factors ----------------------------------------------------------

def test_binomial_factor_positive():
    s = binomial_factor_pow((1, 1, 1), 1, PQY, hi=(3, 3, None))
    assert dict(s.items()) == {(0, 0, 0): 1, (1, 1, 1): -1}


def test_binomial_factor_negative_24():
    s = binomial_factor_pow((1,), -24, Q, hi=(5,))
    assert s.coeff(2) == comb(25, 2) == 300


def test_binomial_factor_negative_binomial():
    s = binomial_factor_pow((1,), -2, Q, hi=(6,))
    assert [s.coeff(k) for k in range(6)] == [1, 2, 3, 4, 5, 6]


def test_binomial_factor_constant_rejected():
    with pytest.raises(ValueError):
        binomial_factor_pow((0,), 3, Q, hi=(5,))


@given(st.integers(-6, 6), st.integers(1, 3))
def test_binomial_factor_matches_repeated_product(e, step):
    hi = (8,)
    base = binomial_factor_pow((step,), 1 if e >= 0 else -1, Q, hi=hi)
    direct = ExactSeries.one(Q, hi=hi)
    for _ in range(abs(e)):
        direct = direct * base
    assert binomial_factor_pow((step,), e, Q, hi=hi).agrees(direct)


# -- dilate / coeff ------------------------------------------------------------

def test_dilate_eta():
    e2 = eta(6).dilate("q", 2)
    assert e2.coeff(Fraction(1, 12)) == 1
    assert e2.coeff(Fraction(1, 12) + 2) == -1
    assert e2.coeff(Fraction(1, 12) + 1) == 0
    assert e2.agrees(eta_quotient({2: 1}, 12))


def test_dilate_y():
    s = ExactSeries.from_dict(QY, {(0, 0): 1, (0, 1): 1}, hi=(1, None))
    assert dict(s.dilate("y", 3).items()) == {(0, 0): 1, (0, 3): 1}


def test_dilate_lattice():
    s = ExactSeries.monomial(Q, Fraction(1, 24), hi=(1,))
    assert dict(s.dilate("q", 24).items()) == {(1,): 1}


def test_dilate_rejects_zero():
    with pytest.raises(ValueError):
        eta(3).dilate("q", 0)


def test_coefficient_of_inverse_eta24():
    inv = series_inv(eta_product_form(8) ** 24)
    assert inv.coeff(2) == 3200


def test_coeff_beyond_window_raises():
    s = qs([1, 2, 3], 3)
    with pytest.raises(WindowError):
        s.coeff(3)
    with pytest.raises(WindowError):
        s.coeff(Fraction(71, 24) + Fraction(1, 24))


def test_theta3_coefficient():
    assert theta(3, 3).coeff(Fraction(1, 2), 1) == 1


def test_theta_product_matches_fourier_sum():
    for i in (1, 2, 3, 4):
        assert theta(i, 5).agrees(theta_sum(i, 5)), i


# -- properties ----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(q_series(), q_series(), q_series())
def test_distributive_q(a, b, c):
    assert ((a + b) * c).agrees(a * c + b * c)


@settings(max_examples=40, deadline=None)
@given(qy_series(), qy_series(), qy_series())
def test_distributive_qy(a, b, c):
    assert ((a + b) * c).agrees(a * c + b * c)


@settings(max_examples=40, deadline=None)
@given(q_series(), q_series())
def test_commutative_and_window(a, b):
    p = a * b
    assert p.agrees(b * a)
    # every stored exponent sits inside the claimed window
    for (e,), _ in p.items():
        assert p.lo_natural("q") <= e < p.hi_natural("q")


@settings(max_examples=60, deadline=None)
@given(unit_q_series())
def test_inverse_two_sided(a):
    inv = series_inv(a)
    one = ExactSeries.one(Q, hi=(5,))
    assert (a * inv).agrees(one)
    assert (inv * a).agrees(one)


@settings(max_examples=40, deadline=None)
@given(q_series(hi=4), st.integers(1, 4), st.integers(1, 4))
def test_dilate_composes(a, m, n):
    assert a.dilate("q", m).dilate("q", n).agrees(a.dilate("q", m * n))
    assert a.dilate("q", m).dilate("q", n).hi == a.dilate("q", m * n).hi


@settings(max_examples=40, deadline=None)
@given(q_series())
def test_never_reports_outside_window(a):
    s = a * a
    h = s.hi_natural("q")
    with pytest.raises(WindowError):
        s.coeff(h)
    with pytest.raises(WindowError):
        s.coeff(h + 1)
