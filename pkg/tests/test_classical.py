from fractions import Fraction
from math import gcd

import pytest

from m24forms.classical import (
    F2_2,
    eta,
    eta_product,
    eta_product_form,
    eta_quotient,
    inverse_eta_coefficients,
    jacobi_generators,
    lambda_N,
    newform,
    quasimodular_E2,
    sigma,
    t_tilde,
    theta,
    theta_at_zero,
)
from m24forms.group import load_group_data
from m24forms.series import Q, QY, ExactSeries

G = load_group_data()


def coeffs(s, n, offset=0):
    return [s.coeff(offset + k) for k in range(n)]


# -- eta ------------------------------------------------------------------------

def test_eta_leading_term():
    e = eta(3)
    assert e.lo_natural("q") == Fraction(1, 24)
    assert e.coeff(Fraction(1, 24)) == 1
    assert e.coeff(Fraction(25, 24)) == -1


def test_eta_pentagonal_matches_product():
    assert eta(15).agrees(eta_product_form(15))


def test_eta_quotient_matches_powers():
    direct = eta_product_form(8) ** 5 * eta_product_form(8).dilate("q", 3).inverse() ** 2
    assert eta_quotient({1: 5, 3: -2}, 8).agrees(direct)


def test_eta_product_1A():
    assert eta_product(G.record("1A"), 8).agrees(eta_product_form(8) ** 24)


@pytest.mark.parametrize("label", G.labels)
def test_eta_product_leading_exponent(label):
    s = eta_product(G.record(label), 3)
    assert s.lo_natural("q") == 1 and s.coeff(1) == 1


def test_inverse_eta_g_examples():
    assert inverse_eta_coefficients("2A", 3)[0] == 8
    assert inverse_eta_coefficients("23AB", 3)[2] == 3
    assert inverse_eta_coefficients("1A", 4) == [24, 324, 3200, 25650, 176256]


def test_eta_quotient_rejects_bad_argument():
    with pytest.raises(ValueError):
        eta_quotient({0: 1}, 3)


# -- theta ------------------------------------------------------------------------

def test_theta1_leading():
    # -i q^(1/8) (y^(1/2) - y^(-1/2)), stored as i * (-(y^(1/2)) + y^(-1/2))
    th = theta(1, 1)
    assert th.phase == 1
    lead = {e[1]: c for e, c in th.items() if e[0] == Fraction(1, 8)}
    assert lead == {Fraction(1, 2): -1, Fraction(-1, 2): 1}


def test_theta2_at_zero():
    assert theta_at_zero(2, 2).coeff(Fraction(1, 8)) == 2


def test_theta3_at_zero():
    got = {e[0]: c for e, c in theta_at_zero(3, 5).items()}
    assert got == {0: 1, Fraction(1, 2): 2, 2: 2, Fraction(9, 2): 2}


def test_theta1_vanishes_at_zero():
    assert theta(1, 6).substitute_one("y").is_zero()


# -- E2, F2, Lambda ------------------------------------------------------------------

def test_F2_first_terms():
    assert coeffs(F2_2(5), 5) == [0, 1, 1, -1, 1]


def test_F2_direct_double_sum():
    # brute force over the (r, s) lattice
    T = 30
    want = [0] * T
    for s in range(1, T):
        for r in range(s + 1, 2 * T + 1, 2):
            if r * s < 2 * T:
                want[r * s // 2] += (-1) ** r * s
    assert coeffs(F2_2(T), T) == want
    # the r=3, s=2 term on its own is -2 q^3; r=6, s=1 brings q^3 back to -1
    assert (-1) ** 3 * 2 + (-1) ** 6 * 1 == want[3] == -1


def test_E2():
    assert coeffs(quasimodular_E2(4), 4) == [1, -24, -72, -96]


def test_mock_seed_from_E2_F2():
    H = (quasimodular_E2(4).scale(-2) + F2_2(4).scale(48)) * eta_quotient({1: -3}, 3)
    assert [H.coeff(k - Fraction(1, 8)) for k in range(3)] == [-2, 90, 462]


def test_lambda_2():
    s = lambda_N(2, 4)
    assert s.coeff(0) == Fraction(1, 12)
    assert s.coeff(1) == 2


@pytest.mark.parametrize("N", [3, 5, 7, 11, 23])
def test_lambda_constant_term(N):
    assert lambda_N(N, 2).coeff(0) == Fraction(N * (N - 1), 24)


def test_lambda_formula():
    N, T = 4, 12
    s = lambda_N(N, T)
    for k in range(1, T):
        want = Fraction(N * (N - 1), 24) * Fraction(24, N - 1) * (sigma(k) - (N * sigma(k // N) if k % N == 0 else 0))
        assert s.coeff(k) == want


# -- newforms ------------------------------------------------------------------------

def test_f11_known_coefficients():
    assert coeffs(newform("f11", 13), 13) == [0, 1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2]


def test_f23_leading_exponents():
    assert newform("f23_1", 3).lo_natural("q") == 2
    assert newform("f23_1", 6).agrees(eta_product(G.record("23AB"), 6) ** 2)
    assert newform("f23_2", 3).lo_natural("q") == 1


@pytest.mark.parametrize("name,level", [("f11", 11), ("f14", 14), ("f15", 15)])
def test_newform_hecke_relations(name, level):
    T = 60
    a = coeffs(newform(name, T), T)
    assert a[1] == 1
    for m in range(2, T):
        for n in range(2, T):
            if m * n < T and gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n]
    for p in (2, 3, 5, 7):
        if p * p < T and level % p:
            assert a[p * p] == a[p] ** 2 - p


# -- T_g ------------------------------------------------------------------------------

def test_t_tilde_identity_is_zero():
    assert t_tilde(G.record("1A"), 6).is_zero()


@pytest.mark.parametrize("label", ["2B", "4A"])
def test_t_tilde_two_expressions(label):
    c = G.record(label)
    assert t_tilde(c, 20).agrees(t_tilde(c, 20, alternate=True))


def test_t_tilde_no_alternate():
    with pytest.raises(KeyError):
        t_tilde(G.record("2A"), 4, alternate=True)


# -- weak Jacobi generators ----------------------------------------------------------

def test_phi01_at_zero():
    phi0, _ = jacobi_generators(6)
    s = phi0.substitute_one("y")
    assert s.agrees(ExactSeries.from_dict(Q, {0: 12}, hi=(6,)))


def test_phi_m21_at_zero():
    _, phi2 = jacobi_generators(6)
    assert phi2.substitute_one("y").is_zero()


def test_phi01_q0_row():
    phi0, _ = jacobi_generators(3)
    row = {e[1]: c for e, c in phi0.items() if e[0] == 0}
    assert row == {-1: 1, 0: 10, 1: 1}


def test_phi_m21_q0_row():
    _, phi2 = jacobi_generators(3)
    row = {e[1]: c for e, c in phi2.items() if e[0] == 0}
    assert row == {-1: 1, 0: -2, 1: 1}


def test_generators_index_one_support():
    phi0, phi2 = jacobi_generators(8)
    for s in (phi0, phi2):
        assert s.vars == QY
        for (n, l), c in s.items():
            assert 4 * n - l * l >= -1
