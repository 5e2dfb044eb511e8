"""Classical modular building blocks as exact series.

Truncations are exclusive bounds on the ``q`` exponent in natural units:
``eta(10)`` knows every coefficient of ``q**x`` with ``x < 10``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .group import ConjClassRecord, DataError, load_group_data
from .series import Q, QY, ExactSeries, binomial_factor_pow

__all__ = [
    "sigma",
    "eta",
    "eta_product_form",
    "eta_quotient",
    "eta_product",
    "inverse_eta_coefficients",
    "fock_traces",
    "fock_decomposition",
    "theta",
    "theta_sum",
    "theta_at_zero",
    "quasimodular_E2",
    "F2_2",
    "lambda_N",
    "newform",
    "evaluate_recipe",
    "t_tilde",
    "jacobi_generators",
]


@lru_cache(maxsize=None)
def _sigma_table(n: int) -> tuple[int, ...]:
    s = [0] * (n + 1)
    for d in range(1, n + 1):
        for m in range(d, n + 1, d):
            s[m] += d
    return tuple(s)


def sigma(n: int) -> int:
    """Sum of the divisors of ``n``."""
    return _sigma_table(max(n, 1))[n] if n > 0 else 0


def _q_series(coeffs, offset: Fraction, hi) -> ExactSeries:
    """Series sum_j coeffs[j] q^(offset + j) known below ``hi``."""
    terms = {(int((offset + j) * 24),): c for j, c in enumerate(coeffs) if c}
    lo = (int(offset * 24),)
    return ExactSeries(Q, terms, lo, (int(Fraction(hi) * 24),))


def eta(truncation) -> ExactSeries:
    """Dedekind eta from the pentagonal sparse expansion sum (-1)^k q^((6k+1)^2/24)."""
    T = Fraction(truncation)
    terms = {}
    bound = int(T * 24)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k - 1) if k else (0, -1)):
            e = (6 * kk + 1) ** 2
            if e < bound:
                terms[(e,)] = (-1) ** (kk % 2)
                hit = True
        if not hit:
            break
        k += 1
    return ExactSeries(Q, terms, (1,), (bound,))


def eta_product_form(truncation) -> ExactSeries:
    """Eta as q^(1/24) prod (1 - q^n); the oracle for :func:`eta`."""
    T = Fraction(truncation)
    hi = (T,)
    out = ExactSeries.monomial(Q, Fraction(1, 24), hi=hi)
    for n in range(1, int(T) + 1):
        out = out * binomial_factor_pow(n, 1, Q, hi=hi)
    return out


def _euler_recurrence(b, n):
    """Coefficients p_0..p_{n-1} of exp(sum_i b_i q^i / i) for integer b_i."""
    p = [0] * n
    if n:
        p[0] = 1
    nz = [(i, b[i]) for i in range(1, min(len(b), n)) if b[i]]
    for j in range(1, n):
        s = 0
        for i, bi in nz:
            if i > j:
                break
            s += bi * p[j - i]
        if s % j:
            raise ArithmeticError("non-integral coefficient in Euler recurrence")
        p[j] = s // j
    return p


def eta_quotient(powers, truncation) -> ExactSeries:
    """prod_k eta(k tau)^(e_k) for ``powers = {k: e_k}``, known below ``truncation``."""
    powers = dict(powers)
    if any(k < 1 for k in powers):
        raise ValueError("eta arguments must be positive multiples of tau")
    offset = Fraction(sum(k * e for k, e in powers.items()), 24)
    T = Fraction(truncation)
    n = max(0, -((offset - T).__floor__()))  # number of integer steps below T
    # log prod_n (1-q^{kn})^e has q^i coefficient -e sum_{k|i} sigma(i/k)/(i/k)
    b = [0] * max(n, 1)
    for k, e in powers.items():
        if not e:
            continue
        for m in range(1, (n - 1) // k + 1):
            b[k * m] -= e * k * sigma(m)
    p = _euler_recurrence(b, n)
    return _q_series(p, offset, T)


def eta_product(c: ConjClassRecord, truncation) -> ExactSeries:
    """eta_g = prod_s eta(i_s tau)^(l_s) for the cycle shape of ``c``."""
    return eta_quotient(dict(c.shape), truncation)


def inverse_eta_coefficients(label: str, n_max: int) -> list[int]:
    """Coefficients of q^0, ..., q^n_max in 1/eta_g = q^-1 (1 + ...)."""
    c = load_group_data().record(label)
    s = eta_quotient({i: -l for i, l in c.shape}, n_max + 1)
    return [s.coeff(n) for n in range(n_max + 1)]


def fock_traces(n: int) -> dict[str, int]:
    """Traces on the degree-n piece of the Fock space of 24 bosons (n >= 1)."""
    if n < 1:
        raise ValueError("the Fock-space grading starts at n = 1")
    g = load_group_data()
    return g.trace_vector({r.label: inverse_eta_coefficients(r.label, n - 1)[n - 1] for r in g.records})


def fock_decomposition(n: int):
    """Multiplicities of the irreducibles in the degree-n Fock space."""
    return load_group_data().decompose(fock_traces(n))


# theta functions ----------------------------------------------------------

def theta(i: int, truncation_q, window_y=None) -> ExactSeries:
    """Jacobi theta function in (q, y) from its product formula.

    theta_1 carries the factor -i as a phase tag.  The y-range at each q-order
    is finite, so the result is exact in y unless ``window_y`` truncates it.
    """
    T = Fraction(truncation_q)
    hi = (T, None)
    h = Fraction(1, 2)
    if i in (1, 2):
        sgn = 1 if i == 1 else -1  # (1 - sgn*m) factors
        out = ExactSeries.from_dict(QY, {(Fraction(1, 8), h): 1}, hi=hi)
        n = 1
        while n - 1 < T:
            for m, c in (((n, 0), 1), ((n, 1), sgn), ((n - 1, -1), sgn)):
                if m[0] < T:
                    out = out * binomial_factor_pow(m, 1, QY, hi=hi, coeff=c)
            n += 1
        if i == 1:
            out = out.with_phase(-1)
    elif i in (3, 4):
        sgn = -1 if i == 3 else 1
        out = ExactSeries.one(QY, hi=hi)
        n = 1
        while n - h < T:
            for m, c in (((n, 0), 1), ((n - h, 1), sgn), ((n - h, -1), sgn)):
                if m[0] < T:
                    out = out * binomial_factor_pow(m, 1, QY, hi=hi, coeff=c)
            n += 1
    else:
        raise ValueError("theta index must be 1, 2, 3 or 4")
    if window_y is not None:
        out = out.truncate(y=window_y)
    return out


def theta_sum(i: int, truncation_q) -> ExactSeries:
    """Theta functions from their Fourier sums (oracle for :func:`theta`)."""
    T = Fraction(truncation_q)
    terms = {}
    N = isqrt(int(8 * T) + 8) + 2
    for n in range(-N, N + 1):
        if i in (1, 2):
            r = Fraction(2 * n + 1, 2)
            e = (r * r / 2, r)
            c = (-1) ** (n % 2) if i == 1 else 1
        elif i in (3, 4):
            e = (Fraction(n * n, 2), Fraction(n))
            c = 1 if i == 3 else (-1) ** (n % 2)
        else:
            raise ValueError("theta index must be 1, 2, 3 or 4")
        if e[0] < T:
            terms[e] = c
    out = ExactSeries.from_dict(QY, terms, hi=(T, None))
    if i == 1:
        out = out.with_phase(-1)
    return out


def theta_at_zero(i: int, truncation_q) -> ExactSeries:
    """theta_i(tau, 0) as a q-series."""
    return theta_sum(i, truncation_q).substitute_one("y")


# quasimodular and Eisenstein pieces ---------------------------------------

def quasimodular_E2(truncation) -> ExactSeries:
    n = int(-(-Fraction(truncation) // 1))
    return _q_series([1] + [-24 * sigma(k) for k in range(1, n)], Fraction(0), truncation)


def F2_2(truncation) -> ExactSeries:
    """sum over r > s > 0 with r - s odd of (-1)^r s q^(rs/2)."""
    T = Fraction(truncation)
    out = {}
    s = 1
    while Fraction(s * (s + 1), 2) < T:
        r = s + 1
        while Fraction(r * s, 2) < T:
            if (r * s) % 2:
                raise AssertionError(f"half-integral exponent at r={r}, s={s}")
            k = r * s // 2
            out[k] = out.get(k, 0) + (-1) ** (r % 2) * s
            r += 2
        s += 1
    n = int(-(-T // 1))
    return _q_series([out.get(k, 0) for k in range(n)], Fraction(0), T)


def lambda_N(N: int, truncation) -> ExactSeries:
    """N(N-1)/24 (1 + 24/(N-1) sum sigma(k)(q^k - N q^(Nk)))."""
    if N < 2:
        raise ValueError("Lambda_N needs N >= 2")
    n = int(-(-Fraction(truncation) // 1))
    c = [Fraction(0)] * max(n, 1)
    c[0] = Fraction(N * (N - 1), 24)
    for k in range(1, n):
        c[k] += N * sigma(k)
        if N * k < n:
            c[N * k] -= N * N * sigma(k)
    return _q_series([x.numerator if x.denominator == 1 else x for x in c], Fraction(0), truncation)


def evaluate_recipe(terms, truncation) -> ExactSeries:
    """Rational combination of eta quotients, Lambda_N and named newforms."""
    out = ExactSeries.zero(Q, hi=(truncation,))
    for coeff, kind, arg in terms:
        if kind == "eta":
            s = eta_quotient(dict(arg), truncation)
        elif kind == "lambda":
            s = lambda_N(arg, truncation)
        elif kind == "newform":
            s = newform(arg, truncation)
        else:
            raise DataError(f"unknown recipe term {kind!r}")
        out = out + s.scale(coeff)
    return out


def newform(name: str, truncation) -> ExactSeries:
    nf = load_group_data().newforms
    if name not in nf:
        raise KeyError(f"unknown newform {name!r}")
    return evaluate_recipe(nf[name], truncation)


def t_tilde(c: ConjClassRecord, truncation, alternate=False) -> ExactSeries:
    """The weight-2 form attached to a class (zero for the identity)."""
    recipe = c.t_tilde_alt if alternate else c.t_tilde
    if recipe is None:
        raise KeyError(f"{c.label} has no alternate expression")
    return evaluate_recipe(recipe, truncation)


# weak Jacobi generators -----------------------------------------------------

@lru_cache(maxsize=8)
def jacobi_generators(truncation_q, window_y=None) -> tuple[ExactSeries, ExactSeries]:
    """(phi_{0,1}, phi_{-2,1}) as exact (q, y) series."""
    T = Fraction(truncation_q)
    phi0 = ExactSeries.zero(QY, hi=(T, None))
    for i in (2, 3, 4):
        th = theta_sum(i, T + Fraction(1, 2))
        th0 = theta_at_zero(i, T + Fraction(1, 2))
        phi0 = phi0 + (th * th) * (th0 * th0).inverse().lift(QY)
    phi0 = phi0.scale(4)
    th1 = theta_sum(1, T + Fraction(1, 4))
    inv_eta6 = eta_quotient({1: -6}, T + Fraction(1, 4)).lift(QY)
    phi2 = -(th1 * th1) * inv_eta6
    phi0 = phi0.truncate(q=T)
    phi2 = phi2.truncate(q=T)
    if window_y is not None:
        phi0 = phi0.truncate(y=window_y)
        phi2 = phi2.truncate(y=window_y)
    return phi0, phi2
