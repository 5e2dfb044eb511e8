import pytest

from m24forms.group import load_group_data
from m24forms.siegel import (
    SiegelProduct,
    borcherds_product,
    borcherds_product_1A_via_product,
    double_zero_limit,
    eta_pair,
    y_moments,
)
from m24forms.series import PQY, ExactSeries

G = load_group_data()


def test_prefactor_coefficients():
    S = borcherds_product("1A", 2, 2)
    assert S.coeff(1, 1, 1) == 1
    assert S.coeff(1, 1, 0) == -2
    assert S.coeff(1, 1, -1) == 1
    assert S.coeff(1, 1, 2) == 0
    assert S.blocks()[(1, 1)] == {-1: 1, 0: -2, 1: 1}


def test_exp_route_matches_product_route():
    assert borcherds_product("1A", 3, 3).series.agrees(borcherds_product_1A_via_product(3, 3))


def test_exchange_symmetry_1A():
    S = borcherds_product("1A", 4, 4)
    assert S.coeff(2, 1, 0) == S.coeff(1, 2, 0)
    for (m, n), row in S.blocks().items():
        for l, c in row.items():
            assert S.coeff(n, m, l) == c


def test_integral_1A():
    S = borcherds_product("1A", 4, 4)
    assert all(isinstance(c, int) for _, c in S.series.items())


def test_p1_block_is_q_shifted_cusp_form():
    # p^1 slice of the z -> 0 limit is eta(tau)^24
    S = borcherds_product("1A", 1, 5)
    lim = double_zero_limit(S)
    assert lim.slice("p", 1).agrees(eta_pair("1A", 1, 5).slice("p", 1))


@pytest.mark.parametrize("label", ["1A", "2A", "3A", "4B", "12B", "23AB"])
def test_double_zero_factorization(label):
    S = borcherds_product(label, 4, 4)
    assert double_zero_limit(S).agrees(eta_pair(label, 4, 4))


@pytest.mark.parametrize("label", ["1A", "2B", "7AB"])
def test_moments_vanish(label):
    S = borcherds_product(label, 3, 3)
    for order in (0, 1):
        assert all(v == 0 for v in y_moments(S, order).values())


def test_double_zero_needs_vanishing_moments():
    bad = ExactSeries.from_dict(PQY, {(1, 1, 0): 1}, hi=(2, 2, None))
    with pytest.raises(AssertionError):
        double_zero_limit(SiegelProduct(bad, "1A", 1, 1))


def test_eta_pair_1A():
    E = eta_pair("1A", 2, 2)
    assert E.coeff(1, 1) == 1
    assert E.coeff(1, 2) == -24 and E.coeff(2, 1) == -24
    assert E.coeff(2, 2) == 576


def test_rejects_nonpositive_orders():
    with pytest.raises(ValueError):
        borcherds_product("1A", 0, 2)
