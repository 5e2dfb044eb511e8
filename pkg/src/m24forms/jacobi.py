"""Twisted elliptic genera, their discriminant coefficients and Hecke lifts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .classical import eta_quotient, jacobi_generators, t_tilde, theta_sum
from .group import load_group_data
from .mock import appell_mu, mock_Hg
from .series import PQ, PQY, QY, ExactSeries, WindowError, binomial_factor_pow

__all__ = [
    "JacobiGenus",
    "zg_via_generators",
    "k3_genus_via_thetas",
    "zg_via_characters",
    "disc_coeff",
    "disc_table",
    "check_discriminant_property",
    "khat_traces",
    "khat_decomposition",
    "hecke",
    "equivariant_hecke",
    "symmetric_product",
    "symmetric_product_1A_via_product",
    "euler_specialization",
    "expand_mu_coefficients",
]


@dataclass(frozen=True)
class JacobiGenus:
    """Weight 0, index 1 weak Jacobi form stored as a (q, y) series."""

    series: ExactSeries
    label: str

    @property
    def depth(self) -> int:
        """Number of fully known q-orders."""
        return int(self.series.hi_natural("q"))

    def coeff(self, n: int, l: int):
        return self.series.coeff(n, l)


def _require_integral(s: ExactSeries, what: str):
    for e, c in s.terms.items():
        if not isinstance(c, int):
            raise ArithmeticError(f"{what} has a non-integral coefficient {c}")


@lru_cache(maxsize=128)
def zg_via_generators(label: str, truncation: int) -> JacobiGenus:
    """Z_g = chi(g)/12 phi_{0,1} + T_g phi_{-2,1}, exact for q < truncation."""
    c = load_group_data().record(label)
    phi0, phi2 = jacobi_generators(Fraction(truncation))
    Z = phi0.scale(Fraction(c.chi, 12))
    if c.t_tilde:
        Z = Z + t_tilde(c, truncation).lift(QY) * phi2
    Z = Z.truncate(q=truncation)
    _require_integral(Z, f"Z_{c.label}")
    return JacobiGenus(Z, c.label)


def k3_genus_via_thetas(truncation: int) -> JacobiGenus:
    """8 sum_{i=2,3,4} (theta_i(z)/theta_i(0))^2 from the theta series directly."""
    T = Fraction(truncation)
    Z = ExactSeries.zero(QY, hi=(T, None))
    for i in (2, 3, 4):
        th = theta_sum(i, T + 1)
        th0 = th.substitute_one("y")
        Z = Z + th * th * (th0 * th0).inverse().lift(QY)
    return JacobiGenus(Z.scale(8).truncate(q=T), "1A")


def zg_via_characters(label: str, truncation_q: int, window_y: int) -> JacobiGenus:
    """(theta_1^2/eta^3)(chi(g) mu + H_g), using the windowed expansion of mu."""
    c = load_group_data().record(label)
    T = Fraction(truncation_q)
    th = theta_sum(1, T + 1)
    th2 = th * th
    ratio = th2 * eta_quotient({1: -3}, T + 1).lift(QY)
    H = mock_Hg(c.label, T + 1).series.lift(QY)
    Z = ratio * H
    if c.chi:
        # theta_1^2 has y-exponents down to about -sqrt(8T); widen mu to compensate
        margin = isqrt(8 * int(T) + 8) + 3
        mu = appell_mu(T + 1, window_y + margin)
        Z = Z + (ratio * mu).scale(c.chi)
    Z = Z.truncate(q=T, y=window_y)
    if Z.hi_natural("q") < T or (Z.hi_natural("y") or window_y) < window_y:
        raise WindowError("window too small for the requested range")
    _require_integral(Z, f"Z_{c.label}")
    return JacobiGenus(Z, c.label)


def _representatives(Z: ExactSeries, D: int):
    """In-window (n, l) with 4n - l^2 = D."""
    hq = Z.hi_natural("q")
    hy = Z.hi_natural("y")
    n = 0
    while n < hq:
        s = 4 * n - D
        if s >= 0:
            r = isqrt(s)
            if r * r == s:
                for l in {r, -r}:
                    if hy is None or l < hy:
                        yield n, l
        n += 1


def disc_coeff(Z: JacobiGenus | ExactSeries, D: int) -> int:
    """c(D): the common coefficient of q^n y^l over all in-window 4n - l^2 = D."""
    s = Z.series if isinstance(Z, JacobiGenus) else Z
    if D % 4 not in (0, 3) or D < -1:
        raise ValueError(f"D={D} is not a discriminant of an index-1 form")
    values = {(n, l): s.coeff(n, l) for n, l in _representatives(s, D)}
    if not values:
        raise WindowError(f"no representative of D={D} inside the window")
    distinct = set(values.values())
    if len(distinct) != 1:
        raise AssertionError(f"coefficients at D={D} disagree: {values}")
    return distinct.pop()


def check_discriminant_property(Z: JacobiGenus | ExactSeries) -> int:
    """Assert that every in-window coefficient depends only on 4n - l^2.

    Returns the number of (n, l) pairs checked.
    """
    s = Z.series if isinstance(Z, JacobiGenus) else Z
    seen: dict[int, tuple] = {}
    checked = 0
    for (n, l), c in s.items():
        if n.denominator != 1 or l.denominator != 1:
            raise AssertionError(f"fractional exponent q^{n} y^{l}")
        n, l = int(n), int(l)
        D = 4 * n - l * l
        if D < -1:
            raise AssertionError(f"nonzero coefficient below the index-1 bound at q^{n} y^{l}")
        if D not in seen:
            seen[D] = (n, l, disc_coeff(s, D))
        if seen[D][2] != c:
            raise AssertionError(f"q^{n} y^{l} has {c}, but D={D} has {seen[D][2]}")
        checked += 1
    return checked


@lru_cache(maxsize=128)
def disc_table(label: str, d_max: int) -> dict[int, int]:
    """c_g(D) for every discriminant -1 <= D <= d_max."""
    depth = d_max // 4 + 2
    Z = zg_via_generators(load_group_data().record(label).label, depth)
    return {D: disc_coeff(Z, D) for D in range(-1, d_max + 1) if D % 4 in (0, 3)}


def khat_traces(D: int) -> dict[str, int]:
    g = load_group_data()
    return g.trace_vector({r.label: disc_table(r.label, max(D, 0))[D] for r in g.records})


def khat_decomposition(D: int) -> dict[str, Fraction]:
    """Signed multiplicities of the virtual module at discriminant D."""
    return load_group_data().decompose(khat_traces(D))


# Hecke operators --------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [a for a in range(1, n + 1) if n % a == 0]


def _hecke_terms(series_for_a, N: int):
    """sum_{a|N} (1/a) sum c_{a}(d n, l) q^(a n) y^(a l) with d = N/a.

    ``series_for_a(a)`` supplies the (q, y) series whose coefficients enter
    with the divisor ``a``.  Returns the coefficient dict (natural exponents)
    and the exclusive q-bound of the result.
    """
    out: dict = {}
    q_hi = None
    for a in _divisors(N):
        d = N // a
        s = series_for_a(a)
        if s.hi[1] is not None:
            raise WindowError("Hecke operators need an untruncated y")
        hz = s.hi_natural("q")
        top = (int(-(-hz // 1)) - 1) // d  # largest n' with d n' < hz
        bound = a * (top + 1)
        q_hi = bound if q_hi is None else min(q_hi, bound)
        for (n, l), c in s.items():
            n, l = int(n), int(l)
            if n % d:
                continue
            key = (a * (n // d), a * l)
            out[key] = out.get(key, 0) + Fraction(c, a)
    return out, q_hi


def _as_series(terms: dict, q_hi) -> ExactSeries:
    return ExactSeries.from_dict(QY, {k: v for k, v in terms.items() if k[0] < q_hi},
                                 hi=(q_hi, None), lo=(0, min((k[1] for k in terms), default=0)))


def hecke(Z: JacobiGenus | ExactSeries, N: int) -> ExactSeries:
    """T_N Z = (1/N) sum_{ad=N, b mod d} Z((a tau + b)/d, a z), on coefficients."""
    if N < 1:
        raise ValueError("N must be positive")
    s = Z.series if isinstance(Z, JacobiGenus) else Z
    terms, q_hi = _hecke_terms(lambda a: s, N)
    return _as_series(terms, q_hi)


def equivariant_hecke(label: str, N: int, truncation: int | None = None) -> ExactSeries:
    """T_N Z_g with Z_{g^a} entering for the divisor a; known for q < truncation."""
    g = load_group_data()
    c = g.record(label)
    T = truncation if truncation is not None else 3
    depth = N * T + 1

    def series_for_a(a):
        return zg_via_generators(g.power_class(c, a), depth).series

    terms, q_hi = _hecke_terms(series_for_a, N)
    return _as_series(terms, min(q_hi, T))


def symmetric_product(label: str, p_max: int, q_max: int) -> ExactSeries:
    """exp(sum_{N<=p_max} p^N T_N Z_g) through p^p_max q^q_max (inclusive)."""
    hi = (p_max + 1, q_max + 1, None)
    arg = ExactSeries.zero(PQY, hi=hi)
    terms = {}
    for N in range(1, p_max + 1):
        TN = equivariant_hecke(label, N, q_max + 1)
        for (n, l), c in TN.items():
            terms[(N, n, l)] = c
    arg = ExactSeries.from_dict(PQY, terms, hi=hi, lo=(1, 0, min((k[2] for k in terms), default=0)))
    return arg.exp()


def symmetric_product_1A_via_product(p_max: int, q_max: int) -> ExactSeries:
    """prod_{n>=1, m>=0, l} (1 - p^n q^m y^l)^(-c(4nm - l^2)) for the K3 genus."""
    hi = (p_max + 1, q_max + 1, None)
    table = disc_table("1A", 4 * p_max * q_max + 4)
    out = ExactSeries.one(PQY, hi=hi)
    for n in range(1, p_max + 1):
        for m in range(0, q_max + 1):
            L = isqrt(4 * n * m + 1)
            for l in range(-L, L + 1):
                e = table.get(4 * n * m - l * l, 0)
                if e:
                    out = out * binomial_factor_pow((n, m, l), -e, PQY, hi=hi)
    return out


def euler_specialization(p_max: int) -> ExactSeries:
    """prod_n (1 - p^n)^(-24) as a (p, q) series."""
    hi = (p_max + 1, None)
    out = ExactSeries.one(PQ, hi=hi)
    for n in range(1, p_max + 1):
        out = out * binomial_factor_pow((n, 0), -24, PQ, hi=hi)
    return out


def expand_mu_coefficients(truncation_q: int = 3, window_y: int = 6):
    """Integers (a, b) with Z eta^3/theta_1^2 = a mu + b q^(-1/8) + O(q^(7/8)).

    Also checks that Z eta^3/theta_1^2 - a mu carries no y-dependence inside
    the window.
    """
    T = Fraction(truncation_q)
    margin = isqrt(8 * int(T) + 8) + 4
    Z = zg_via_generators("1A", truncation_q + 1).series
    th = theta_sum(1, T + 2)
    X = Z * eta_quotient({1: 3}, T + 2).lift(QY) * (th * th).inverse(window={"y": window_y + 2 * margin})
    mu = appell_mu(T, window_y + margin)
    X = X.truncate(q=T, y=window_y)
    polar = Fraction(-1, 8)
    a = Fraction(X.coeff(polar, 1), mu.coeff(polar, 1))
    rest = (X - mu.scale(a)).truncate(q=T, y=window_y)
    for (qe, ye), v in rest.items():
        if ye != 0:
            raise AssertionError(f"y-dependence left at q^{qe} y^{ye}")
    b = rest.coeff(polar, 0)
    return a, b, rest
