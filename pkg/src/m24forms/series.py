"""Exact truncated Laurent series in one to three formal variables.

A series lives on a fixed exponent lattice: each variable has a denominator
(24 for ``q``, 2 for ``y``, 1 for ``p``) and exponents are stored as integer
multiples of ``1/den``.  Every series also carries a box window.  For each
variable, ``lo`` is a lower bound on the exponents that can occur and ``hi``
is an exclusive bound past which nothing is known (``None`` means the
variable is not truncated).  Coefficients are ``int`` or ``Fraction``.

The lower bound of a variable is only guaranteed relative to the windows of
the variables that follow it in the signature, so the signature order matters:
put variables with a genuine valuation (``p``, ``q``) first and ``y`` last.

Multiplication and inversion shrink the window pessimistically.  ``coeff``
raises :class:`WindowError` for anything at or past a truncation bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Mapping, Sequence

__all__ = [
    "Var",
    "ExactSeries",
    "WindowError",
    "SignatureError",
    "Q",
    "QY",
    "PQY",
    "PQ",
    "binomial_factor_pow",
    "series_add",
    "series_mul",
    "series_inv",
    "series_exp",
    "series_log",
    "dilate",
    "coeff",
]


class WindowError(ValueError):
    """Raised when a coefficient outside the guaranteed window is requested."""


class SignatureError(ValueError):
    """Raised when two series with different variables or lattices meet."""


@dataclass(frozen=True)
class Var:
    name: str
    den: int


Q = (Var("q", 24),)
QY = (Var("q", 24), Var("y", 2))
PQ = (Var("p", 1), Var("q", 24))
PQY = (Var("p", 1), Var("q", 24), Var("y", 2))


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _to_lattice(x, den: int) -> int:
    v = Fraction(x) * den
    if v.denominator != 1:
        raise ValueError(f"exponent {x} is not on the 1/{den} lattice")
    return v.numerator


def _hi_to_lattice(x, den: int):
    """Exclusive bound in natural units -> lattice units (round up)."""
    if x is None:
        return None
    v = Fraction(x) * den
    return -floor(-v)


def _min_hi(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class ExactSeries:
    """Immutable sparse truncated series; see the module docstring."""

    __slots__ = ("vars", "terms", "lo", "hi", "phase")

    def __init__(self, vars, terms, lo, hi, phase=0, *, _trusted=False):
        self.vars = tuple(vars)
        self.hi = tuple(hi)
        self.phase = phase % 2
        n = len(self.vars)
        if len(self.hi) != n or len(lo) != n:
            raise SignatureError("window does not match the variable signature")
        if phase % 4 >= 2:
            terms = {e: -c for e, c in terms.items()}
        if not _trusted:
            clean = {}
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise SignatureError("exponent length does not match signature")
                c = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
                if c and all(h is None or x < h for x, h in zip(e, self.hi)):
                    clean[e] = c
            terms = clean
        self.terms = terms
        self.lo = self._tighten(tuple(lo))

    def _tighten(self, lo):
        # A stored minimum is a valid bound for a variable when every later
        # variable is untruncated: the window then only conditions on earlier ones.
        lo = list(lo)
        if self.terms:
            for i in range(len(lo) - 1, -1, -1):
                m = min(e[i] for e in self.terms)
                if m > lo[i]:
                    lo[i] = m
                if self.hi[i] is not None:
                    break
        for i, h in enumerate(self.hi):
            if h is not None and lo[i] > h:
                lo[i] = h
        return tuple(lo)

    # construction -----------------------------------------------------

    @classmethod
    def from_dict(cls, vars, data: Mapping, hi=None, lo=None, phase=0):
        """Build from ``{natural exponent tuple: coefficient}``.

        ``hi`` gives exclusive bounds in natural units (``None`` entries are
        untruncated).  ``lo`` defaults to the stored minimum, which is only
        correct when the dictionary lists every term inside the window.
        """
        vars = tuple(vars)
        n = len(vars)
        terms = {}
        for e, c in data.items():
            if not isinstance(e, tuple):
                e = (e,)
            key = tuple(_to_lattice(x, v.den) for x, v in zip(e, vars))
            terms[key] = terms.get(key, 0) + c
        hi_l = tuple(_hi_to_lattice(h, v.den) for h, v in zip(hi or (None,) * n, vars))
        if lo is None:
            lo_l = tuple(min((k[i] for k in terms), default=0) for i in range(n))
        else:
            lo_l = tuple(_to_lattice(x, v.den) for x, v in zip(lo, vars))
        return cls(vars, {k: c for k, c in terms.items() if c}, lo_l, hi_l, phase)

    @classmethod
    def monomial(cls, vars, exps=None, c=1, hi=None, phase=0):
        vars = tuple(vars)
        exps = exps if exps is not None else (0,) * len(vars)
        if not isinstance(exps, tuple):
            exps = (exps,)
        return cls.from_dict(vars, {exps: c}, hi=hi, phase=phase)

    @classmethod
    def one(cls, vars, hi=None):
        return cls.monomial(vars, None, 1, hi)

    @classmethod
    def zero(cls, vars, hi=None):
        vars = tuple(vars)
        hi_l = tuple(_hi_to_lattice(h, v.den) for h, v in zip(hi or (None,) * len(vars), vars))
        lo = tuple(h if h is not None else 0 for h in hi_l)
        return cls(vars, {}, lo, hi_l, _trusted=True)

    def _like(self, terms, lo=None, hi=None, phase=None):
        return ExactSeries(
            self.vars, terms, self.lo if lo is None else lo, self.hi if hi is None else hi,
            self.phase if phase is None else phase, _trusted=True,
        )

    # inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.vars)

    def index(self, var) -> int:
        if isinstance(var, int):
            return var
        try:
            return self.names.index(var)
        except ValueError:
            raise SignatureError(f"no variable {var!r} in {self.names}") from None

    def hi_natural(self, var) -> Fraction | None:
        i = self.index(var)
        h = self.hi[i]
        return None if h is None else Fraction(h, self.vars[i].den)

    def lo_natural(self, var) -> Fraction:
        i = self.index(var)
        return Fraction(self.lo[i], self.vars[i].den)

    def items(self):
        """Yield ``(natural exponent tuple, coefficient)`` in sorted order."""
        dens = [v.den for v in self.vars]
        for e in sorted(self.terms):
            yield tuple(Fraction(x, d) for x, d in zip(e, dens)), self.terms[e]

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff(self, *exps):
        """Exact coefficient at the natural exponent vector ``exps``.

        The result ignores the phase tag; the true coefficient is the returned
        value times ``1j ** self.phase``.
        """
        if len(exps) == 1 and isinstance(exps[0], tuple):
            exps = exps[0]
        if len(exps) != self.nvars:
            raise SignatureError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = tuple(_to_lattice(x, v.den) for x, v in zip(exps, self.vars))
        for x, h, v in zip(key, self.hi, self.vars):
            if h is not None and x >= h:
                raise WindowError(
                    f"{v.name}^{Fraction(x, v.den)} is outside the window "
                    f"(known below {v.name}^{Fraction(h, v.den)})"
                )
        return self.terms.get(key, 0)

    def __repr__(self):
        shown = []
        for e, c in list(self.items())[:8]:
            mono = "*".join(f"{v.name}^{x}" for v, x in zip(self.vars, e) if x)
            shown.append(f"{c}{'*' + mono if mono else ''}")
        more = " + ..." if len(self.terms) > 8 else ""
        win = ", ".join(
            f"{v.name}<{'inf' if h is None else Fraction(h, v.den)}" for v, h in zip(self.vars, self.hi)
        )
        ph = "i*" if self.phase else ""
        return f"ExactSeries({ph}({' + '.join(shown) or '0'}{more}); {win})"

    def agrees(self, other: "ExactSeries") -> bool:
        """True when both series coincide on their common window."""
        return not self.mismatches(other, limit=1)

    def mismatches(self, other: "ExactSeries", limit=None):
        """Natural exponents where the series differ inside the common window."""
        self._check(other)
        hi = tuple(_min_hi(a, b) for a, b in zip(self.hi, other.hi))
        if self.phase != other.phase and (self.terms or other.terms):
            diff_keys = set(self.terms) | set(other.terms)
        else:
            diff_keys = {
                k for k in set(self.terms) | set(other.terms)
                if self.terms.get(k, 0) != other.terms.get(k, 0)
            }
        out = []
        dens = [v.den for v in self.vars]
        for k in sorted(diff_keys):
            if all(h is None or x < h for x, h in zip(k, hi)):
                out.append(tuple(Fraction(x, d) for x, d in zip(k, dens)))
                if limit and len(out) >= limit:
                    break
        return out

    # arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise SignatureError(f"signature mismatch: {self.names} vs {other.names}")

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def scale(self, c):
        c = _norm(c if isinstance(c, (int, Fraction)) else Fraction(c))
        if not c:
            return self._like({}, phase=0)
        return self._like({e: _norm(x * c) for e, x in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactSeries.one(self.vars).scale(other)
        if not isinstance(other, ExactSeries):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self._like(dict(self.terms), lo=tuple(map(min, self.lo, other.lo)),
                              hi=tuple(map(_min_hi, self.hi, other.hi)))
        if not self.terms:
            return other._like(dict(other.terms), lo=tuple(map(min, self.lo, other.lo)),
                               hi=tuple(map(_min_hi, self.hi, other.hi)))
        if self.phase != other.phase:
            raise SignatureError("cannot add series with different phase tags")
        hi = tuple(map(_min_hi, self.hi, other.hi))
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = _norm(v)
            else:
                terms.pop(e, None)
        return ExactSeries(self.vars, terms, tuple(map(min, self.lo, other.lo)), hi, self.phase)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExactSeries):
            return NotImplemented
        self._check(other)
        lo = tuple(a + b for a, b in zip(self.lo, other.lo))
        hi = []
        for ha, hb, la, lb in zip(self.hi, other.hi, self.lo, other.lo):
            if ha is None and hb is None:
                hi.append(None)
            elif ha is None:
                hi.append(hb + la)
            elif hb is None:
                hi.append(ha + lb)
            else:
                hi.append(min(ha + lb, hb + la))
        hi = tuple(hi)
        terms = _cauchy(self.terms, other.terms, hi)
        phase = self.phase + other.phase
        if phase == 2:
            terms = {e: -c for e, c in terms.items()}
            phase = 0
        return ExactSeries(self.vars, terms, lo, hi, phase, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ExactSeries.one(self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return self * other.inverse()

    def truncate(self, **bounds):
        """Shrink windows: ``s.truncate(q=5, y=3)`` keeps exponents below the bounds."""
        hi = list(self.hi)
        for name, b in bounds.items():
            i = self.index(name)
            b = _hi_to_lattice(b, self.vars[i].den)
            hi[i] = b if hi[i] is None else min(hi[i], b)
        hi = tuple(hi)
        terms = {e: c for e, c in self.terms.items() if all(h is None or x < h for x, h in zip(e, hi))}
        return ExactSeries(self.vars, terms, self.lo, hi, self.phase, _trusted=True)

    def shift(self, exps):
        """Multiply by the monomial with natural exponents ``exps``."""
        key = tuple(_to_lattice(x, v.den) for x, v in zip(exps, self.vars))
        terms = {tuple(a + b for a, b in zip(e, key)): c for e, c in self.terms.items()}
        lo = tuple(a + b for a, b in zip(self.lo, key))
        hi = tuple(None if h is None else h + k for h, k in zip(self.hi, key))
        return ExactSeries(self.vars, terms, lo, hi, self.phase, _trusted=True)

    def with_phase(self, phase: int):
        """Multiply by ``1j ** phase``."""
        p = self.phase + phase % 4
        terms = self.terms
        if p % 4 >= 2:
            terms = {e: -c for e, c in terms.items()}
        return ExactSeries(self.vars, terms, self.lo, self.hi, p % 2, _trusted=True)

    def dilate(self, var, factor: int):
        """Substitute ``var -> var**factor``."""
        if not isinstance(factor, int) or factor < 1:
            raise ValueError("dilation factor must be a positive integer")
        i = self.index(var)

        def sc(e):
            return e[:i] + (e[i] * factor,) + e[i + 1:]

        terms = {sc(e): c for e, c in self.terms.items()}
        lo = sc(self.lo)
        hi = list(self.hi)
        if hi[i] is not None:
            hi[i] = hi[i] * factor
        return ExactSeries(self.vars, terms, lo, tuple(hi), self.phase, _trusted=True)

    def substitute_one(self, var):
        """Set ``var = 1`` and drop it; the variable must be untruncated."""
        i = self.index(var)
        if self.hi[i] is not None:
            raise WindowError(f"cannot set truncated variable {self.vars[i].name} to 1")
        out = {}
        for e, c in self.terms.items():
            k = e[:i] + e[i + 1:]
            out[k] = out.get(k, 0) + c
        out = {k: _norm(c) for k, c in out.items() if c}
        drop = lambda t: t[:i] + t[i + 1:]
        return ExactSeries(drop(self.vars), out, drop(self.lo), drop(self.hi), self.phase, _trusted=True)

    def slice(self, var, exponent):
        """Coefficient of ``var**exponent`` as a series in the remaining variables."""
        i = self.index(var)
        x = _to_lattice(exponent, self.vars[i].den)
        h = self.hi[i]
        if h is not None and x >= h:
            raise WindowError(f"{self.vars[i].name}^{exponent} is outside the window")
        drop = lambda t: t[:i] + t[i + 1:]
        out = {drop(e): c for e, c in self.terms.items() if e[i] == x}
        return ExactSeries(drop(self.vars), out, drop(self.lo), drop(self.hi), self.phase, _trusted=True)

    def lift(self, vars):
        """View this series in a larger signature; new variables get exponent 0."""
        vars = tuple(vars)
        pos = []
        for v in self.vars:
            if v not in vars:
                raise SignatureError(f"variable {v} missing from target signature")
            pos.append(vars.index(v))
        n = len(vars)

        def place(t, fill):
            out = [fill] * n
            for x, j in zip(t, pos):
                out[j] = x
            return tuple(out)

        terms = {place(e, 0): c for e, c in self.terms.items()}
        return ExactSeries(vars, terms, place(self.lo, 0), place(self.hi, None), self.phase,
                           _trusted=True)

    def map_coefficients(self, fn):
        return self._like({e: _norm(fn(e, c)) for e, c in self.terms.items()})

    # inversion --------------------------------------------------------

    def inverse(self, window=None):
        """Multiplicative inverse, expanded adically in the signature order.

        The terms with the lowest exponent of the first variable form the
        leading block.  If the block is a single monomial it is inverted
        directly.  Otherwise the block (a series in the remaining variables)
        is inverted recursively, which for a ``(q, y)`` series means the
        expansion region ``|q| < |y| < 1``: the lowest ``y`` power of the
        block dominates.  Untruncated later variables then need an explicit
        ``window`` (exclusive bounds in natural units, keyed by name) so the
        block inverse is finite.
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of zero series")
        window = window or {}
        if self.nvars == 1:
            return self._inverse_1d(window)
        return self._inverse_blocks(window)

    def _window_bound(self, i, window):
        """Output bound for variable ``i``: the requested window, if any."""
        name = self.vars[i].name
        if name in window:
            return _hi_to_lattice(window[name], self.vars[i].den)
        return None

    def _leading(self, exps):
        v = min(exps)
        if v != self.lo[0]:
            raise ValueError(
                f"leading {self.vars[0].name}-exponent is not determined within the window"
            )
        return v

    def _inverse_1d(self, window):
        v = self._leading(e[0] for e in self.terms)
        hi = self.hi[0]
        w = self._window_bound(0, window)
        if len(self.terms) == 1 and hi is None:
            c = self.terms[(v,)]
            inv = c if c in (1, -1) else _norm(1 / Fraction(c))
            return ExactSeries(self.vars, {(-v,): inv}, (-v,), (None,), -self.phase, _trusted=True)
        if hi is None:
            if w is None:
                raise WindowError(f"inverting a polynomial in {self.vars[0].name} needs a window")
            out_hi = w
        else:
            out_hi = hi - 2 * v if w is None else min(hi - 2 * v, w)
        n = out_hi + v
        a = [0] * max(n, 1)
        for (e,), c in self.terms.items():
            if e - v < n:
                a[e - v] = c
        a0 = a[0]
        unit = a0 in (1, -1)
        inv0 = a0 if unit else 1 / Fraction(a0)
        nz = [(j, a[j]) for j in range(1, n) if a[j]]
        b = [0] * max(n, 1)
        b[0] = _norm(inv0)
        for k in range(1, n):
            s = 0
            for j, aj in nz:
                if j > k:
                    break
                bk = b[k - j]
                if bk:
                    s += aj * bk
            if s:
                b[k] = _norm(-s * inv0)
        terms = {(k - v,): c for k, c in enumerate(b[:n]) if c}
        return ExactSeries(self.vars, terms, (-v,), (out_hi,), -self.phase, _trusted=True)

    def _inverse_blocks(self, window):
        blocks = self._blocks()
        v = self._leading(blocks)
        hi0 = self.hi[0]
        w = self._window_bound(0, window)
        lead = blocks[v]
        sub_window = {k: x for k, x in window.items() if k != self.vars[0].name}
        lead_inv = lead.inverse(sub_window)
        if hi0 is None and len(blocks) == 1 and w is None:
            out = {(-v,) + e: c for e, c in lead_inv.terms.items()}
            return ExactSeries(self.vars, out, (-v,) + lead_inv.lo, (None,) + lead_inv.hi,
                               lead_inv.phase, _trusted=True)
        if hi0 is None:
            if w is None:
                raise WindowError(f"inverting needs a window on {self.vars[0].name}")
            out_hi = w
        else:
            out_hi = hi0 - 2 * v if w is None else min(hi0 - 2 * v, w)
        n = out_hi + v
        sub_hi = self.hi[1:]
        # an absent block is zero only inside the sub-window of self
        zero = ExactSeries(lead.vars, {}, tuple(0 if h is None else h for h in sub_hi), sub_hi,
                           self.phase, _trusted=True)
        a = {j - v: blk for j, blk in blocks.items()}
        b = [lead_inv]
        neg_inv = -lead_inv
        for k in range(1, n):
            acc = None
            for j in range(1, k + 1):
                aj = a.get(j, zero)
                if aj is zero and all(h is None for h in sub_hi):
                    continue
                term = aj * b[k - j]
                acc = term if acc is None else acc + term
            if acc is None:
                b.append(ExactSeries(lead.vars, {}, lead_inv.lo, lead_inv.hi, lead_inv.phase,
                                     _trusted=True))
            else:
                b.append(neg_inv * acc)
        out_sub_hi = b[0].hi
        out_sub_lo = b[0].lo
        for blk in b[1:]:
            out_sub_hi = tuple(map(_min_hi, out_sub_hi, blk.hi))
            out_sub_lo = tuple(map(min, out_sub_lo, blk.lo))
        out = {}
        for k, blk in enumerate(b):
            for e, c in blk.terms.items():
                out[(k - v,) + e] = c
        return ExactSeries(self.vars, out, (-v,) + out_sub_lo, (out_hi,) + out_sub_hi,
                           lead_inv.phase, _trusted=False)

    def _blocks(self):
        """Split by the first variable into series over the remaining ones."""
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[0], {})[e[1:]] = c
        rest = self.vars[1:]
        return {
            k: ExactSeries(rest, t, self.lo[1:], self.hi[1:], self.phase, _trusted=True)
            for k, t in groups.items()
        }

    # exp / log --------------------------------------------------------

    def _grading(self):
        """Truncated variables grade the exp/log recurrences.

        They must carry nonnegative exponents; untruncated variables may have
        any sign and are carried along exactly.
        """
        graded = [i for i in range(self.nvars) if self.hi[i] is not None]
        if not graded:
            raise WindowError("exp/log needs at least one truncated variable")
        for i in graded:
            if self.lo[i] < 0:
                raise ValueError(f"negative exponents in truncated variable {self.vars[i].name}")
        return graded

    def exp(self):
        """``exp(self)`` for a series without constant term (positive grading)."""
        if self.phase and self.terms:
            raise ValueError("exp of a series with a phase tag")
        graded = self._grading()
        a_by_w = _by_weight(self.terms, graded)
        if 0 in a_by_w:
            raise ValueError("exp argument has a constant term")
        hi = self.hi
        limit = sum(hi[i] - 1 for i in graded)
        e_by_w: dict[int, dict] = {0: {(0,) * self.nvars: 1}}
        for w in range(1, limit + 1):
            acc: dict = {}
            for j, aj in a_by_w.items():
                if j > w:
                    continue
                ew = e_by_w.get(w - j)
                if not ew:
                    continue
                _accumulate(acc, aj, ew, hi, j)
            if acc:
                e_by_w[w] = {k: _norm(Fraction(c, w) if isinstance(c, int) else c / w)
                             for k, c in acc.items() if c}
        terms = {}
        for d in e_by_w.values():
            terms.update(d)
        lo = tuple(0 if i in graded else min((e[i] for e in terms), default=0) for i in range(self.nvars))
        return ExactSeries(self.vars, terms, lo, hi, 0, _trusted=True)

    def log(self):
        """``log(self)`` for a series with constant term 1 (positive grading)."""
        graded = self._grading()
        one = (0,) * self.nvars
        if self.terms.get(one) != 1 or self.phase:
            raise ValueError("log needs constant term 1")
        f_by_w = _by_weight(self.terms, graded)
        if set(f_by_w[0]) != {one}:
            raise ValueError("log argument has weight-zero terms besides the constant")
        hi = self.hi
        limit = sum(hi[i] - 1 for i in graded)
        g_by_w: dict[int, dict] = {}
        for w in range(1, limit + 1):
            acc: dict = {}
            fw = f_by_w.get(w)
            if fw:
                for k, c in fw.items():
                    acc[k] = c * w
            for j in range(1, w):
                gj = g_by_w.get(j)
                fwj = f_by_w.get(w - j)
                if gj and fwj:
                    _accumulate(acc, gj, fwj, hi, -j)
            g = {k: _norm(Fraction(c, w) if isinstance(c, int) else c / w) for k, c in acc.items() if c}
            if g:
                g_by_w[w] = g
        terms = {}
        for d in g_by_w.values():
            terms.update(d)
        lo = tuple(0 if i in graded else min((e[i] for e in terms), default=0) for i in range(self.nvars))
        return ExactSeries(self.vars, terms, lo, hi, 0, _trusted=True)


def _by_weight(terms, graded):
    out: dict[int, dict] = {}
    for e, c in terms.items():
        w = sum(e[i] for i in graded)
        out.setdefault(w, {})[e] = c
    return out


def _accumulate(acc, a, b, hi, factor):
    """acc += factor * a * b restricted to the window ``hi``."""
    n = len(hi)
    for ea, ca in a.items():
        caf = ca * factor
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            ok = True
            for k in range(n):
                h = hi[k]
                if h is not None and e[k] >= h:
                    ok = False
                    break
            if ok:
                acc[e] = acc.get(e, 0) + caf * cb


def _cauchy(a: dict, b: dict, hi: tuple) -> dict:
    """Sparse product of two coefficient tables restricted to ``e < hi``."""
    if len(a) < len(b):
        a, b = b, a
    n = len(hi)
    out: dict = {}
    get = out.get
    h0 = hi[0]
    bl = sorted(b.items())
    if n == 1:
        if h0 is None:
            for (x,), ca in a.items():
                for (y,), cb in bl:
                    k = (x + y,)
                    out[k] = get(k, 0) + ca * cb
        else:
            for (x,), ca in a.items():
                lim = h0 - x
                for (y,), cb in bl:
                    if y >= lim:
                        break
                    k = (x + y,)
                    out[k] = get(k, 0) + ca * cb
    elif n == 2:
        h1 = hi[1]
        for (x0, x1), ca in a.items():
            lim0 = None if h0 is None else h0 - x0
            lim1 = None if h1 is None else h1 - x1
            for (y0, y1), cb in bl:
                if lim0 is not None and y0 >= lim0:
                    break
                if lim1 is not None and y1 >= lim1:
                    continue
                k = (x0 + y0, x1 + y1)
                out[k] = get(k, 0) + ca * cb
    else:
        for ea, ca in a.items():
            lims = [None if h is None else h - x for h, x in zip(hi, ea)]
            lim0 = lims[0]
            for eb, cb in bl:
                if lim0 is not None and eb[0] >= lim0:
                    break
                if any(l is not None and y >= l for l, y in zip(lims[1:], eb[1:])):
                    continue
                k = tuple(x + y for x, y in zip(ea, eb))
                out[k] = get(k, 0) + ca * cb
    return {k: _norm(c) for k, c in out.items() if c}


def binomial_factor_pow(m, e, like: ExactSeries | Sequence[Var], hi=None, coeff=1):
    """Expand ``(1 - coeff*m)**e`` exactly inside a window.

    ``m`` is a natural exponent tuple for the monomial, ``e`` an integer
    (possibly negative).  ``like`` supplies the signature and window: either a
    series (its ``vars`` and ``hi``) or a variable tuple plus ``hi`` in natural
    units.
    """
    if isinstance(like, ExactSeries):
        vars, hi_l = like.vars, like.hi
    else:
        vars = tuple(like)
        hi_l = tuple(_hi_to_lattice(h, v.den) for h, v in zip(hi or (None,) * len(vars), vars))
    if not isinstance(m, tuple):
        m = (m,)
    key = tuple(_to_lattice(x, v.den) for x, v in zip(m, vars))
    if not any(key):
        raise ValueError("binomial factor of a constant monomial")
    bounds = [-(-h // x) - 1 for x, h in zip(key, hi_l) if x > 0 and h is not None]
    if e >= 0:
        kmax = min([e] + bounds)
    elif not bounds:
        raise WindowError("negative power does not terminate inside the window")
    else:
        kmax = min(bounds)
    terms = {}
    c = 1
    for k in range(0, max(kmax, -1) + 1):
        ek = tuple(k * x for x in key)
        if all(h is None or x < h for x, h in zip(ek, hi_l)):
            bk = _gen_binom(e, k) * (-coeff) ** k
            if bk:
                terms[ek] = _norm(bk) if isinstance(bk, Fraction) else bk
    lo = tuple(min(0, kmax * x) if x < 0 else 0 for x in key)
    return ExactSeries(vars, terms, lo, hi_l, 0, _trusted=True)


def _gen_binom(e: int, k: int):
    if e >= 0:
        return comb(e, k)
    # C(e, k) = (-1)^k C(k - e - 1, k)
    return (-1) ** k * comb(k - e - 1, k)


# functional aliases ----------------------------------------------------

def series_add(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    return a + b


def series_mul(a: ExactSeries, b: ExactSeries) -> ExactSeries:
    return a * b


def series_inv(a: ExactSeries, window=None) -> ExactSeries:
    return a.inverse(window)


def series_exp(a: ExactSeries) -> ExactSeries:
    return a.exp()


def series_log(a: ExactSeries) -> ExactSeries:
    return a.log()


def dilate(a: ExactSeries, var, factor: int) -> ExactSeries:
    return a.dilate(var, factor)


def coeff(a: ExactSeries, *exps):
    return a.coeff(*exps)
