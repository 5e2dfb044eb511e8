"""Exponential lifts of the twisted genera to three-variable (p, q, y) products."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .classical import eta_product
from .group import load_group_data
from .jacobi import disc_table
from .series import PQ, PQY, ExactSeries, binomial_factor_pow

__all__ = [
    "SiegelProduct",
    "borcherds_product",
    "borcherds_product_1A_via_product",
    "double_zero_limit",
    "eta_pair",
    "y_moments",
]


@dataclass(frozen=True)
class SiegelProduct:
    """Phi_g as a (p, q, y) series, exact for p <= p_max and q <= q_max."""

    series: ExactSeries
    label: str
    p_max: int
    q_max: int

    def coeff(self, m: int, n: int, l: int):
        return self.series.coeff(m, n, l)

    def blocks(self) -> dict[tuple[int, int], dict[int, object]]:
        """{(m, n): {l: coefficient}} over the nonzero terms."""
        out: dict = {}
        for (m, n, l), c in self.series.items():
            out.setdefault((int(m), int(n)), {})[int(l)] = c
        return out


def _prefactor(hi) -> ExactSeries:
    # p q y (1 - y^-1)^2: the (m, n) = (0, 0) factor, with c(-1) = 2
    return ExactSeries.from_dict(PQY, {(1, 1, 1): 1, (1, 1, 0): -2, (1, 1, -1): 1}, hi=hi)


def _exponent_sum(label: str, p_max: int, q_max: int) -> ExactSeries:
    """sum over (m, n) != (0, 0) and k of c_{g^k}(4nm - l^2)/k p^(km) q^(kn) y^(kl).

    Only p^a q^b with a < p_max, b < q_max matter once the p q prefactor
    is applied.
    """
    g = load_group_data()
    c = g.record(label)
    d_max = 4 * max(p_max - 1, 0) * max(q_max - 1, 0)
    tables: dict[int, dict[int, int]] = {}

    def table(k):
        if k not in tables:
            lab = g.power_class(c, k)
            t = disc_table(lab, d_max)
            if t[-1] != 2:
                raise AssertionError(f"c_{lab}(-1) = {t[-1]}, expected 2")
            tables[k] = t
        return tables[k]

    terms: dict = {}
    for m in range(p_max):
        for n in range(q_max):
            if m == 0 and n == 0:
                continue
            L = isqrt(4 * m * n + 1)
            for l in range(-L, L + 1):
                D = 4 * m * n - l * l
                if D < -1:
                    continue
                k = 1
                while k * m < p_max and k * n < q_max:
                    v = table(k).get(D, 0)
                    if v:
                        key = (k * m, k * n, k * l)
                        terms[key] = terms.get(key, 0) + Fraction(v, k)
                    k += 1
    ylo = min((key[2] for key in terms), default=0)
    return ExactSeries.from_dict(PQY, terms, hi=(p_max, q_max, None), lo=(0, 0, ylo))


def borcherds_product(label: str, p_max: int, q_max: int) -> SiegelProduct:
    """p q y prod_{(m,n,l)>0} exp(-sum_k c_{g^k}(4nm - l^2)/k (p^m q^n y^l)^k).

    Exact for p-orders up to p_max and q-orders up to q_max inclusive.
    """
    if p_max < 1 or q_max < 1:
        raise ValueError("p_max and q_max must be positive")
    g = load_group_data()
    lab = g.record(label).label
    E = (-_exponent_sum(lab, p_max, q_max)).exp()
    hi = (p_max + 1, q_max + 1, None)
    S = (_prefactor(hi) * E).truncate(p=p_max + 1, q=q_max + 1)
    if lab == "1A":
        for e, v in S.terms.items():
            if not isinstance(v, int):
                raise ArithmeticError(f"non-integral coefficient {v} in Phi_10")
    return SiegelProduct(S, lab, p_max, q_max)


def borcherds_product_1A_via_product(p_max: int, q_max: int) -> ExactSeries:
    """p q y prod_{(m,n,l)>0} (1 - p^m q^n y^l)^c(4mn - l^2), factor by factor."""
    hi = (p_max + 1, q_max + 1, None)
    inner = (p_max, q_max, None)
    table = disc_table("1A", 4 * max(p_max - 1, 0) * max(q_max - 1, 0))
    out = ExactSeries.one(PQY, hi=inner)
    for m in range(p_max):
        for n in range(q_max):
            if m == 0 and n == 0:
                continue
            L = isqrt(4 * m * n + 1)
            for l in range(-L, L + 1):
                e = table.get(4 * m * n - l * l, 0)
                if e:
                    out = out * binomial_factor_pow((m, n, l), e, PQY, hi=inner)
    return (_prefactor(hi) * out).truncate(p=p_max + 1, q=q_max + 1)


def y_moments(S: SiegelProduct | ExactSeries, order: int) -> dict[tuple[int, int], object]:
    """sum_l l^order coeff(p^m q^n y^l) for every (m, n) with a nonzero block."""
    s = S.series if isinstance(S, SiegelProduct) else S
    out: dict = {}
    for (m, n, l), c in s.items():
        key = (int(m), int(n))
        out[key] = out.get(key, 0) + c * int(l) ** order
    return out


def double_zero_limit(S: SiegelProduct) -> ExactSeries:
    """lim_{z -> 0} (2 pi i z)^-2 Phi as a (p, q) series.

    With y = e(z) the limit is half the second y-log-derivative at y = 1,
    which needs the zeroth and first moments of every block to vanish.
    """
    for order in (0, 1):
        for key, v in y_moments(S, order).items():
            if v:
                raise AssertionError(f"y-moment {order} of block p^{key[0]} q^{key[1]} is {v}")
    terms = {k: Fraction(v, 2) for k, v in y_moments(S, 2).items()}
    terms = {k: (v.numerator if v.denominator == 1 else v) for k, v in terms.items() if v}
    return ExactSeries.from_dict(PQ, terms, hi=(S.p_max + 1, S.q_max + 1))


def eta_pair(label: str, p_max: int, q_max: int) -> ExactSeries:
    """eta_g(sigma) eta_g(tau) as a (p, q) series through p^p_max q^q_max."""
    c = load_group_data().record(label)
    a = eta_product(c, p_max + 1)
    b = eta_product(c, q_max + 1)
    terms = {}
    for (x,), u in a.items():
        for (z,), v in b.items():
            terms[(x, z)] = u * v
    return ExactSeries.from_dict(PQ, terms, hi=(p_max + 1, q_max + 1))
