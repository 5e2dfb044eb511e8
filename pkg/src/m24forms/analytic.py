"""Numerical evaluation at points of the upper half-plane.

Multipliers are exact (phases are rationals), evaluations are complex
doubles.  Fractional powers use the principal branch with the argument
taken in [-pi, pi), and ``jac(g, tau) = (c tau + d)^-2``.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
from scipy import integrate, special

from . import classical
from .group import ConjClassRecord, load_group_data
from .series import ExactSeries

__all__ = [
    "GroupElement2x2",
    "MultiplierValue",
    "e",
    "EvalResult",
    "eval_series",
    "principal_power",
    "dedekind_sum",
    "dedekind_sum_direct",
    "dedekind_epsilon",
    "kronecker",
    "varsigma",
    "rho",
    "multiplier_xi",
    "psi",
    "eta_value",
    "eta_g_value",
    "slash_inverse_eta_g",
    "eta_multiplier_residual",
    "mock_value",
    "completion_integral",
    "completion_integral_closed_form",
    "completion_hat_H",
    "completion_residual",
    "generalized_exp",
    "enumerate_cosets",
    "rademacher_sum",
    "jacobi_value",
    "check_jacobi_transform",
    "random_sl2z",
    "random_gamma0",
    "depth_for",
    "sample_point",
]

TWO_PI_I = 2j * math.pi


def e(x) -> complex:
    """e(x) = exp(2 pi i x)."""
    return cmath.exp(TWO_PI_I * x)


def _log(w: complex) -> complex:
    # principal log with arg in [-pi, pi)
    w = complex(w)
    if w.imag == 0 and w.real < 0:
        return complex(math.log(-w.real), -math.pi)
    return cmath.log(w)


def principal_power(w: complex, s) -> complex:
    return cmath.exp(complex(s) * _log(w))


# group elements and multipliers ---------------------------------------------

@dataclass(frozen=True)
class GroupElement2x2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: "GroupElement2x2") -> "GroupElement2x2":
        return GroupElement2x2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                               self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __neg__(self):
        return GroupElement2x2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return GroupElement2x2(self.d, -self.b, -self.c, self.a)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def cocycle(self, tau: complex) -> complex:
        return self.c * tau + self.d

    def jac_power(self, tau: complex, s) -> complex:
        """jac(g, tau)^s = (c tau + d)^(-2 s) on the principal branch."""
        return principal_power(self.cocycle(tau), -2 * s)

    def in_gamma0(self, n: int) -> bool:
        return self.c % n == 0

    @staticmethod
    def T(m: int = 1) -> "GroupElement2x2":
        return GroupElement2x2(1, m, 0, 1)

    @staticmethod
    def S() -> "GroupElement2x2":
        return GroupElement2x2(0, -1, 1, 0)


IDENTITY = GroupElement2x2(1, 0, 0, 1)


@dataclass(frozen=True)
class MultiplierValue:
    """A unimodular number; ``phase`` is exact (value = e(phase)) when known."""

    phase: Fraction | None
    approx: complex | None = None

    @classmethod
    def of_phase(cls, x) -> "MultiplierValue":
        return cls(Fraction(x) % 1)

    @property
    def value(self) -> complex:
        return e(self.phase) if self.phase is not None else self.approx

    def __complex__(self):
        return complex(self.value)

    def __mul__(self, o: "MultiplierValue") -> "MultiplierValue":
        if self.phase is not None and o.phase is not None:
            return MultiplierValue.of_phase(self.phase + o.phase)
        return MultiplierValue(None, self.value * o.value)

    def __pow__(self, n: int) -> "MultiplierValue":
        if self.phase is not None:
            return MultiplierValue.of_phase(self.phase * n)
        return MultiplierValue(None, self.value ** n)

    def conjugate(self) -> "MultiplierValue":
        return self ** -1


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """s(d, c) = sum_{m=1}^{c-1} ((m/c)) ((m d/c)) for c > 0, term by term."""
    if c <= 0:
        raise ValueError("dedekind_sum needs c > 0")
    d %= c
    s = Fraction(0)
    # ((m/c)) = m/c - 1/2 here; the -1/2 part pairs with sum ((m d/c)) = 0
    for m in range(1, c):
        r = (m * d) % c
        if r:
            s += Fraction(m, c) * (Fraction(r, c) - Fraction(1, 2))
    return s


@lru_cache(maxsize=None)
def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) via reciprocity: s(h, k) + s(k, h) = (h/k + k/h + 1/(h k))/12 - 1/4."""
    if c <= 0:
        raise ValueError("dedekind_sum needs c > 0")
    g = gcd(d, c)
    h, k = (d // g) % (c // g), c // g
    if h == 0:
        return Fraction(0)
    return (Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k)) / 12 - Fraction(1, 4) - dedekind_sum(k % h, h)


def dedekind_epsilon(g: GroupElement2x2) -> MultiplierValue:
    """The eta multiplier: eps(g) eta(g tau) jac(g, tau)^(1/4) = eta(tau)."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if c == 0 and d == 1:
        return MultiplierValue.of_phase(Fraction(-b, 24))
    if c > 0:
        return MultiplierValue.of_phase(Fraction(-(a + d), 24 * c) + dedekind_sum(d, c) / 2
                                        + Fraction(1, 8))
    # eps(-g) = eps(g) e(1/4)
    return MultiplierValue.of_phase(dedekind_epsilon(-g).phase - Fraction(1, 4))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def varsigma(c: ConjClassRecord, g: GroupElement2x2) -> MultiplierValue:
    """The character of eta_g: trivial for even weight, else (-N_g / d)."""
    if c.k % 2 == 0:
        return MultiplierValue.of_phase(0)
    s = kronecker(-c.N, g.d)
    if s == 0:
        raise ValueError(f"d = {g.d} is not coprime to N = {c.N}")
    return MultiplierValue.of_phase(Fraction(0) if s == 1 else Fraction(1, 2))


def rho(n: int, h: int, g: GroupElement2x2) -> MultiplierValue:
    """rho_{n|h}(g) = e(-c d/(n h))."""
    return MultiplierValue.of_phase(Fraction(-g.c * g.d, n * h))


def _require_gamma0(g: GroupElement2x2, n: int):
    if g.c % n:
        raise ValueError(f"{g} is not in Gamma_0({n})")


def multiplier_xi(c: ConjClassRecord | str, g: GroupElement2x2) -> MultiplierValue:
    """xi_g = rho_{n_g|h_g} varsigma_g on Gamma_0(n_g)."""
    c = load_group_data().record(c) if isinstance(c, str) else c
    _require_gamma0(g, c.n)
    return rho(c.n, c.h, g) * varsigma(c, g)


def psi(c: ConjClassRecord | str, g: GroupElement2x2) -> MultiplierValue:
    """eps^-3 rho_{n_g|h_g}, the multiplier of the completed mock form."""
    c = load_group_data().record(c) if isinstance(c, str) else c
    _require_gamma0(g, c.n)
    return dedekind_epsilon(g) ** -3 * rho(c.n, c.h, g)


# series evaluation ---------------------------------------------------------------

@dataclass(frozen=True)
class EvalResult:
    value: complex
    bound: float

    def __complex__(self):
        return self.value


def eval_series(s: ExactSeries, tau: complex, z: complex | None = None, tolerance=None) -> EvalResult:
    """Partial sum of a q or (q, y) series with a crude tail bound.

    The bound takes the terms in the last unit of q-exponent and continues
    them geometrically in |q|.
    """
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    names = s.names
    if names not in (("q",), ("q", "y")):
        raise ValueError(f"cannot evaluate a series in {names}")
    two_var = len(names) == 2
    if two_var and z is None:
        raise ValueError("a (q, y) series needs z")
    aq = abs(e(tau))
    if two_var and s.hi[1] is not None:
        # expansion region |q| < |y| < 1
        if not (0 < z.imag < tau.imag):
            raise ValueError("z is outside the region |q| < |y| < 1")
    total = 0j
    top = []
    hq = s.hi_natural("q")
    for exps, c in s.items():
        t = complex(c) * e(exps[0] * tau)
        if two_var:
            t *= e(exps[1] * z)
        total += t
        if hq is not None and exps[0] >= hq - 1:
            top.append(abs(t))
    total *= 1j ** s.phase
    bound = 0.0
    if hq is not None:
        bound = (sum(top) if top else 0.0) * aq / (1 - aq)
        if two_var and s.hi[1] is not None:
            ay = abs(e(z))
            bound += ay ** float(s.hi_natural("y")) / (1 - ay) * max(1.0, abs(total))
    if tolerance is not None and bound > tolerance:
        raise ArithmeticError(f"tail bound {bound:.3g} exceeds tolerance {tolerance:.3g}")
    return EvalResult(total, bound)


def depth_for(tau: complex, digits: float = 40.0) -> int:
    """q-depth T with |q|^T about e^-digits at tau."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return int(digits / (2 * math.pi * tau.imag)) + 8


@lru_cache(maxsize=32)
def _eta_series(T: int) -> ExactSeries:
    return classical.eta(T)


def eta_value(tau: complex, truncation: int | None = None) -> complex:
    T = truncation if truncation is not None else depth_for(tau)
    return eval_series(_eta_series(T), tau).value


def eta_g_value(c: ConjClassRecord | str, tau: complex) -> complex:
    c = load_group_data().record(c) if isinstance(c, str) else c
    out = 1 + 0j
    for i, l in c.shape:
        out *= eta_value(i * tau) ** l
    return out


def eta_multiplier_residual(g: GroupElement2x2, tau: complex, truncation: int = 60) -> float:
    """|eps(g) eta(g tau) jac^(1/4) - eta(tau)| / |eta(tau)|."""
    lhs = complex(dedekind_epsilon(g)) * eta_value(g.act(tau), truncation) * g.jac_power(tau, Fraction(1, 4))
    rhs = eta_value(tau, truncation)
    return abs(lhs - rhs) / abs(rhs)


def slash_inverse_eta_g(c: ConjClassRecord | str, g: GroupElement2x2, tau: complex) -> float:
    """Relative residual of (1/eta_g)|_{xi_g, -k_g} g = 1/eta_g at tau."""
    c = load_group_data().record(c) if isinstance(c, str) else c
    xi = complex(multiplier_xi(c, g))
    lhs = xi / eta_g_value(c, g.act(tau)) * g.cocycle(tau) ** c.k
    rhs = 1 / eta_g_value(c, tau)
    return abs(lhs - rhs) / abs(rhs)


# mock forms and the completion --------------------------------------------------

@lru_cache(maxsize=64)
def _mock_pieces(label: str, T: int):
    c = load_group_data().record(label)
    E2 = classical.quasimodular_E2(T)
    F2 = classical.F2_2(T)
    Tt = classical.t_tilde(c, T) if c.t_tilde else None
    return c, E2, F2, Tt


def mock_value(label: str, tau: complex, truncation: int | None = None) -> complex:
    """H_g(tau) = (chi/24)(-2 E_2 + 48 F_2)/eta^3 - T_g/eta^3 from its pieces."""
    T = truncation if truncation is not None else depth_for(tau)
    c, E2, F2, Tt = _mock_pieces(load_group_data().record(label).label, T)
    num = Fraction(c.chi, 24) * (-2 * eval_series(E2, tau).value + 48 * eval_series(F2, tau).value)
    if Tt is not None:
        num -= eval_series(Tt, tau).value
    return num / eta_value(tau, T) ** 3


def _eta_cubed_conj_terms(tau: complex, t: np.ndarray) -> np.ndarray:
    """conj(eta(tau + i t)^3) via sum (-1)^n (2n+1) q^((2n+1)^2/8)."""
    x, y = tau.real, tau.imag
    out = np.zeros_like(t, dtype=complex)
    n = 0
    while True:
        r = 2 * n + 1
        decay = np.exp(-2 * math.pi * r * r * (y + t) / 8)
        out += (-1) ** n * r * np.exp(-2j * math.pi * r * r * x / 8) * decay
        if r * np.max(decay) < 1e-18:
            break
        n += 1
    return out


def completion_integral(tau: complex, tolerance: float = 1e-6) -> complex:
    """(4i)^(-1/2) int_{-conj(tau)}^{i oo} (w + tau)^(-1/2) conj(eta(-conj(w))^3) dw.

    Along w = -conj(tau) + i t the prefactors combine to 1/2, leaving
    (1/2) int_0^oo (2y + t)^(-1/2) conj(eta(tau + i t)^3) dt.  The range is cut
    at t_max where the tail bound drops below tolerance/10.
    """
    y = tau.imag

    def f(t, part):
        v = _eta_cubed_conj_terms(tau, np.atleast_1d(t))[0] / math.sqrt(2 * y + t)
        return v.real if part == 0 else v.imag

    # |eta^3| <= C e^{-pi (y+t)/4}, C bounded by the sum at t = 0
    C = sum((2 * n + 1) * math.exp(-math.pi * ((2 * n + 1) ** 2 - 1) * y / 4) for n in range(200))
    t_max = 1.0
    while C * math.exp(-math.pi * (y + t_max) / 4) * 4 / math.pi / math.sqrt(2 * y + t_max) > tolerance / 10:
        t_max *= 2
    parts = []
    for part in (0, 1):
        val, err = integrate.quad(f, 0, t_max, args=(part,), epsabs=tolerance / 10, epsrel=0, limit=400)
        if err > tolerance:
            raise ArithmeticError(f"quadrature error estimate {err:.3g} above tolerance")
        parts.append(val)
    return 0.5 * complex(parts[0], parts[1])


def completion_integral_closed_form(tau: complex) -> complex:
    """Same integral termwise: int_{2y}^oo u^(-1/2) e^{-a(u - y)} du = e^{a y} sqrt(pi/a) erfc(sqrt(2 a y))."""
    x, y = tau.real, tau.imag
    total = 0j
    n = 0
    while True:
        r = 2 * n + 1
        a = math.pi * r * r / 4
        term = (-1) ** n * r * cmath.exp(-2j * math.pi * r * r * x / 8) * math.sqrt(math.pi / a) \
            * math.exp(a * y) * special.erfc(math.sqrt(2 * a * y))
        total += term
        if abs(term) < 1e-18:
            break
        n += 1
    return 0.5 * total


def completion_hat_H(label: str, tau: complex, truncation: int | None = None,
                     tolerance: float = 1e-6) -> complex:
    """H_g(tau) + chi(g) times the period integral of conj(eta^3)."""
    c = load_group_data().record(label)
    H = mock_value(c.label, tau, truncation)
    if c.chi == 0:
        return H
    return H + c.chi * completion_integral(tau, tolerance)


def completion_residual(label: str, g: GroupElement2x2, tau: complex, tolerance: float = 1e-6) -> float:
    """|psi(g) jac(g, tau)^(1/4) Hhat(g tau) - Hhat(tau)|."""
    lhs = complex(psi(label, g)) * g.jac_power(tau, Fraction(1, 4)) * completion_hat_H(label, g.act(tau),
                                                                                        tolerance=tolerance)
    return abs(lhs - completion_hat_H(label, tau, tolerance=tolerance))


# Rademacher sums -----------------------------------------------------------------

def generalized_exp(x, s: float, max_terms: int = 400):
    """e(x, s) = sum_m (2 pi i x)^(m+s)/Gamma(m+s+1), summed until the partial sums stagnate.

    Accepts scalars or numpy arrays.
    """
    w = TWO_PI_I * np.asarray(x, dtype=complex)
    term = np.exp((s) * np.log(np.where(w == 0, 1, w))) / special.gamma(s + 1)
    term = np.where(w == 0, 1.0 if s == 0 else 0.0, term)
    total = term.copy()
    for m in range(1, max_terms):
        term = term * w / (m + s)
        new = total + term
        if np.all(new == total):
            break
        total = new
    return total if total.ndim else complex(total)


def enumerate_cosets(n: int, K: int) -> list[GroupElement2x2]:
    """One matrix per coset of Gamma_inf in Gamma_0(n) with 0 <= c < K and |d| < K^2.

    Representatives have c > 0, or c = 0 and d = 1.
    """
    if n < 1 or K < 1:
        raise ValueError("need n >= 1 and K >= 1")
    out = [IDENTITY]
    for c in range(n, K, n):
        for d in range(-K * K + 1, K * K):
            if gcd(c, d) != 1:
                continue
            a = pow(d, -1, c) if c > 1 else 0
            out.append(GroupElement2x2(a, (a * d - 1) // c, c, d))
    return out


def rademacher_sum(label: str, tau: complex, K: int) -> complex:
    """Partial Rademacher sum R_K(tau) over Gamma_0(n_g), with psi = rho eps^-3.

    For c > 0 each term is psi(g) e(-a/(8c)) e(x, 1/2) (c tau + d)^(-1/2) with
    x = 1/(8c(c tau + d)); the a-dependence cancels in the phase, which
    reduces to d/(8c) - 3 s(d,c)/2 - 3/8 - c d/(n h).
    """
    cl = load_group_data().record(label)
    n, h = cl.n, cl.h
    total = e(-tau / 8)  # c = 0: reg = 1, psi = 1
    parts = []
    for c in range(n, K, n):
        d = np.arange(-K * K + 1, K * K, dtype=np.int64)
        d = d[np.gcd(d, c) == 1]
        s = np.array([float(dedekind_sum(int(r), c)) for r in range(c)])[d % c]
        phase = d / (8 * c) - 1.5 * s - 0.375 - (c * d % (n * h)) / (n * h)
        w = c * tau + d
        x = 1 / (8 * c * w)
        terms = np.exp(TWO_PI_I * phase) * generalized_exp(x, 0.5) / np.sqrt(w)
        parts.append(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
    return total + sum(parts)


# Jacobi forms ---------------------------------------------------------------------

@lru_cache(maxsize=64)
def _jacobi_pieces(label: str, T: int):
    c = load_group_data().record(label)
    thetas = {i: classical.theta_sum(i, T) for i in (1, 2, 3, 4)}
    zeros = {i: classical.theta_at_zero(i, T) for i in (2, 3, 4)}
    Tt = classical.t_tilde(c, T) if c.t_tilde else None
    return c, thetas, zeros, Tt


def jacobi_value(label: str, tau: complex, z: complex, truncation: int | None = None) -> complex:
    """Z_g(tau, z) = chi/12 phi_{0,1} + T_g phi_{-2,1}, each evaluated from theta sums."""
    T = truncation if truncation is not None else depth_for(tau)
    c, th, th0, Tt = _jacobi_pieces(load_group_data().record(label).label, T)
    phi0 = 4 * sum((eval_series(th[i], tau, z).value / eval_series(th0[i], tau).value) ** 2
                   for i in (2, 3, 4))
    out = Fraction(c.chi, 12) * phi0
    if Tt is not None:
        phi2 = -eval_series(th[1], tau, z).value ** 2 / eta_value(tau, T) ** 6
        out += eval_series(Tt, tau).value * phi2
    return out


def check_jacobi_transform(label: str, g: GroupElement2x2, tau: complex, z: complex,
                           truncation: int | None = None) -> float:
    """|rho(g) e(-c z^2/(c tau + d)) Z_g(g tau, z/(c tau + d)) - Z_g(tau, z)| / |Z_g(tau, z)|."""
    cl = load_group_data().record(label)
    _require_gamma0(g, cl.n)
    w = g.cocycle(tau)
    T2 = truncation if truncation is not None else depth_for(g.act(tau))
    lhs = complex(rho(cl.n, cl.h, g)) * e(-g.c * z * z / w) * jacobi_value(cl.label, g.act(tau), z / w, T2)
    rhs = jacobi_value(cl.label, tau, z, truncation)
    return abs(lhs - rhs) / abs(rhs)


# sampling --------------------------------------------------------------------------

def random_sl2z(rng: random.Random, bound: int = 6) -> GroupElement2x2:
    """Random element with |c|, |d| <= bound and (c, d) coprime, not both zero."""
    while True:
        c = rng.randint(-bound, bound)
        d = rng.randint(-bound, bound)
        if gcd(c, d) != 1:
            continue
        return _complete(c, d, rng)


def random_gamma0(n: int, rng: random.Random, c_multiples: int = 2, d_bound: int = 30) -> GroupElement2x2:
    """Random element of Gamma_0(n) with c = +-k n, 1 <= k <= c_multiples."""
    while True:
        c = n * rng.randint(1, c_multiples) * rng.choice((1, -1))
        d = rng.randint(-d_bound, d_bound)
        if gcd(c, d) == 1:
            return _complete(c, d, rng)


def _complete(c: int, d: int, rng: random.Random) -> GroupElement2x2:
    if c == 0:
        return GroupElement2x2(d, rng.randint(-5, 5), 0, d)
    # a d - b c = 1
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
    b = (a * d - 1) // c
    g = GroupElement2x2(a, b, c, d)
    return GroupElement2x2.T(rng.randint(-3, 3)) @ g


def sample_point(g: GroupElement2x2, w: complex = 0.3 + 1j) -> complex:
    """tau with c tau + d = w (or -w when c < 0).

    Both tau and g tau then sit at height about 1/|c| above the cusps -d/c
    and a/c, which are equivalent to infinity for g in Gamma_0(n) with n | c.
    """
    if g.c == 0:
        return w
    return (-g.d + (w if g.c > 0 else -w)) / g.c
