"""Mock modular forms H and H_g, the Appell-Lerch sum and N=4 characters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .classical import F2_2, eta_quotient, quasimodular_E2, t_tilde, theta_sum
from .group import load_group_data
from .series import QY, ExactSeries, WindowError, binomial_factor_pow

__all__ = [
    "MockForm",
    "mock_H",
    "mock_Hg",
    "mock_coefficients",
    "appell_mu",
    "n4_character",
    "kn_traces",
    "kn_decomposition",
    "divide_one_minus_y",
]

POLAR = Fraction(-1, 8)


@dataclass(frozen=True)
class MockForm:
    series: ExactSeries
    label: str
    chi: int

    def coefficient(self, n: int):
        """Coefficient of q^(n - 1/8)."""
        return self.series.coeff(n + POLAR)

    def coefficients(self, n_max: int) -> list:
        return [self.coefficient(n) for n in range(n_max + 1)]


def mock_H(truncation) -> MockForm:
    """H = (-2 E_2 + 48 F_2) / eta^3, known below q^truncation."""
    T = Fraction(truncation)
    num = quasimodular_E2(T + 1).scale(-2) + F2_2(T + 1).scale(48)
    H = (num * eta_quotient({1: -3}, T)).truncate(q=T)
    return MockForm(H, "1A", 24)


@lru_cache(maxsize=64)
def mock_Hg(label: str, truncation) -> MockForm:
    """H_g = chi(g)/24 H - T_g / eta^3 for the class with the given label."""
    c = load_group_data().record(label)
    T = Fraction(truncation)
    H = mock_H(T).series.scale(Fraction(c.chi, 24))
    if c.t_tilde:
        H = H - t_tilde(c, T + 1) * eta_quotient({1: -3}, T)
    H = H.truncate(q=T)
    for e, v in H.items():
        if not isinstance(v, int):
            raise ArithmeticError(f"H_{c.label} has non-integral coefficient {v} at q^{e[0]}")
    return MockForm(H, c.label, c.chi)


def mock_coefficients(label: str, n_max: int) -> list[int]:
    """Coefficients of q^(n - 1/8) for n = 0..n_max."""
    return mock_Hg(load_group_data().record(label).label, n_max + 1).coefficients(n_max)


def kn_traces(n: int) -> dict[str, int]:
    """Traces of K_n on all 26 classes, read off from H_g."""
    g = load_group_data()
    return g.trace_vector({r.label: mock_coefficients(r.label, n)[n] for r in g.records})


def kn_decomposition(n: int) -> dict[str, Fraction]:
    """Multiplicities of the irreducibles in K_n (n >= 1)."""
    if n < 1:
        raise ValueError("K_n starts at n = 1")
    return load_group_data().decompose(kn_traces(n))


# Appell-Lerch sum -------------------------------------------------------------

def _lerch_sum(T: Fraction, window_y, exact_zero_term=False) -> ExactSeries:
    """sum_l (-1)^l y^l q^(l(l+1)/2) / (1 - y q^l) expanded for |q| < |y| < 1.

    With ``exact_zero_term`` the l = 0 term is left out so the sum is exact in y.
    """
    hi = (T, None)
    out = ExactSeries.zero(QY, hi=hi)
    l = 1
    while Fraction(l * (l + 1), 2) < T:
        num = ExactSeries.from_dict(QY, {(Fraction(l * (l + 1), 2), l): (-1) ** l}, hi=hi)
        out = out + num * binomial_factor_pow((l, 1), -1, QY, hi=hi)
        l += 1
    m = 1
    while Fraction(m * (m - 1), 2) < T:
        # l = -m: 1/(1 - y q^-m) = -sum_{k>=1} (y^-1 q^m)^k
        num = ExactSeries.from_dict(QY, {(Fraction(m * (m - 1), 2) + m, -m - 1): -(-1) ** m}, hi=hi)
        out = out + num * binomial_factor_pow((m, -1), -1, QY, hi=hi)
        m += 1
    if not exact_zero_term:
        geo = ExactSeries.from_dict(QY, {(0, k): 1 for k in range(int(window_y) + 1)},
                                    hi=(T, window_y))
        out = out + geo
    return out


def appell_mu(truncation_q, window_y) -> ExactSeries:
    """mu(tau, z) expanded in |q| < |y| < 1, known for q < truncation_q, y < window_y."""
    T = Fraction(truncation_q)
    W = Fraction(window_y)
    margin = int(T) + 4
    for _ in range(4):
        S = _lerch_sum(T + 1, W + 2 * margin)
        th = theta_sum(1, T + Fraction(5, 4))
        inv = th.inverse(window={"y": W + 2 * margin})
        pref = ExactSeries.from_dict(QY, {(0, Fraction(1, 2)): -1}, phase=1)  # -i y^(1/2)
        mu = pref * inv * S
        if (mu.hi[0] is None or mu.hi_natural("q") >= T) and mu.hi_natural("y") >= W:
            return mu.truncate(q=T, y=W)
        margin *= 2
    raise WindowError("could not reach the requested window for mu")


def divide_one_minus_y(s: ExactSeries) -> ExactSeries:
    """Exact division of every q-block by (1 - y); y must be untruncated."""
    iy = s.index("y")
    if s.hi[iy] is not None:
        raise WindowError("exact division needs an untruncated y")
    step = s.vars[iy].den
    blocks: dict = {}
    for e, c in s.terms.items():
        key = e[:iy] + e[iy + 1:]
        blocks.setdefault(key, {})[e[iy]] = c
    out = {}
    for key, poly in blocks.items():
        lo = min(poly)
        hi = max(poly)
        if (hi - lo) % step:
            raise ArithmeticError("mixed y-lattice cosets in one block")
        acc = 0
        for x in range(lo, hi + 1, step):
            acc += poly.get(x, 0)
            if acc and x < hi:
                out[key[:iy] + (x,) + key[iy:]] = acc
        if acc:
            raise ArithmeticError("block is not divisible by (1 - y)")
    lo = list(s.lo)
    return ExactSeries(s.vars, out, tuple(lo), s.hi, s.phase)


def _theta1_mu(T: Fraction) -> ExactSeries:
    """theta_1^2 * mu, exact in y (no inverse of theta_1 needed)."""
    th = theta_sum(1, T)
    pref = ExactSeries.from_dict(QY, {(0, Fraction(1, 2)): -1}, phase=1)
    S = _lerch_sum(T, None, exact_zero_term=True)
    # the l = 0 term: theta_1 / (1 - y) is a Laurent polynomial in each q-order
    return pref * (th * S + divide_one_minus_y(th))


def n4_character(kind: str, truncation_q, n: int | None = None) -> ExactSeries:
    """N=4 characters at c = 6: ``massless_0``, ``massless_half`` or ``massive``.

    The results are exact in y: the massless ones are built from
    theta_1^2 mu without dividing by theta_1.
    """
    T = Fraction(truncation_q)
    inv_eta3 = eta_quotient({1: -3}, T).lift(QY)
    if kind == "massive":
        if n is None or n < 1:
            raise ValueError("massive characters need n >= 1")
        th = theta_sum(1, T + 1)
        return (th * th * inv_eta3).shift((n + POLAR, 0)).truncate(q=T)
    ch0 = (_theta1_mu(T + Fraction(1, 4)) * inv_eta3).truncate(q=T)
    if kind == "massless_0":
        return ch0
    if kind == "massless_half":
        th = theta_sum(1, T + 1)
        base = (th * th * inv_eta3).shift((POLAR, 0)).truncate(q=T)
        return base - ch0.scale(2)
    raise ValueError(f"unknown character kind {kind!r}")
