"""M24 conjugacy-class data, character table and exact decomposition.

The 26 conjugacy classes are grouped into 21 series labels ("7AB" covers 7A
and 7B and so on) because every modular object attached to a class only
depends on its cycle shape.  Character values live in Q(sqrt(-7),
sqrt(-15), sqrt(-23)); they are kept exact so that multiplicities come out
as provably rational numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import gcd, prod
from pathlib import Path

M24_ORDER = 244823040


class DataError(ValueError):
    """A data file is malformed or violates a structural invariant."""


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise DataError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise DataError(f"not a rational: {x!r}") from None
    raise DataError(f"not a rational: {x!r}")


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# exact arithmetic in Q(sqrt(-7), sqrt(-15), sqrt(-23)) -------------------

class Surd:
    """Element sum_S c_S * prod_{n in S} sqrt(-n) over subsets S of radicands."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def rational(cls, x):
        return cls({frozenset(): Fraction(x)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Surd(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Surd({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                c = va * vb
                for n in ka & kb:
                    c *= -n  # sqrt(-n)^2
                k = ka ^ kb
                out[k] = out.get(k, 0) + c
        return Surd(out)

    def conj(self):
        # complex conjugation flips the sign of each sqrt(-n)
        return Surd({k: v * (-1) ** len(k) for k, v in self.terms.items()})

    @property
    def is_rational(self) -> bool:
        return all(not k for k in self.terms)

    def rational_part(self) -> Fraction:
        return self.terms.get(frozenset(), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, Surd) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __complex__(self):
        z = 0j
        for k, v in self.terms.items():
            z += float(v) * prod((1j * n**0.5 for n in k), start=1 + 0j)
        return z

    def __repr__(self):
        return f"Surd({dict((tuple(sorted(k)), str(v)) for k, v in self.terms.items())})"


@dataclass(frozen=True)
class QuadraticValue:
    """``a + b*i*sqrt(n)`` with rational ``a``, ``b`` and ``n`` in {7, 15, 23} or None."""

    a: Fraction
    b: Fraction = Fraction(0)
    n: int | None = None

    def __post_init__(self):
        if self.b and self.n not in (7, 15, 23):
            raise DataError(f"unsupported radicand {self.n}")

    def conj(self) -> "QuadraticValue":
        return QuadraticValue(self.a, -self.b, self.n)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def surd(self) -> Surd:
        if not self.b:
            return Surd.rational(self.a)
        return Surd({frozenset(): self.a, frozenset([self.n]): self.b})

    def __complex__(self):
        return complex(self.surd())

    def to_json(self):
        if self.is_rational:
            return int(self.a) if self.a.denominator == 1 else format_rational(self.a)
        return {"a": format_rational(self.a), "b": format_rational(self.b), "n": self.n}

    @classmethod
    def from_json(cls, x):
        if isinstance(x, dict):
            try:
                return cls(parse_rational(x["a"]), parse_rational(x["b"]), int(x["n"]))
            except KeyError as e:
                raise DataError(f"quadratic entry missing {e}") from None
        return cls(parse_rational(x))

    def __str__(self):
        if self.is_rational:
            return format_rational(self.a)
        return f"{format_rational(self.a)}{'+' if self.b > 0 else '-'}{format_rational(abs(self.b))}i*sqrt({self.n})"


# class records ------------------------------------------------------------

@dataclass(frozen=True)
class ConjClassRecord:
    label: str
    members: tuple[str, ...]
    shape: tuple[tuple[int, int], ...]  # (cycle length, multiplicity)
    chi: int
    k: int
    n: int
    N: int
    h: int
    t_tilde: tuple = ()
    t_tilde_alt: tuple | None = None

    @property
    def cycles(self) -> dict[int, int]:
        return dict(self.shape)

    def shape_string(self) -> str:
        return " ".join(f"{i}^{l}" if l > 1 else f"{i}" for i, l in self.shape)

    def validate(self):
        s = self.shape
        lengths = [i for i, _ in s]
        if lengths != sorted(set(lengths)) or any(l <= 0 for _, l in s):
            raise DataError(f"{self.label}: cycle shape must be strictly increasing")
        if sum(i * l for i, l in s) != 24:
            raise DataError(f"{self.label}: cycle shape does not partition 24")
        expected_chi = s[0][1] if s[0][0] == 1 else 0
        if self.chi != expected_chi:
            raise DataError(f"{self.label}: chi={self.chi} but shape gives {expected_chi}")
        if 2 * self.k != sum(l for _, l in s):
            raise DataError(f"{self.label}: weight is not half the number of cycles")
        if self.n != lengths[-1]:
            raise DataError(f"{self.label}: order is not the longest cycle")
        if self.N != lengths[0] * lengths[-1]:
            raise DataError(f"{self.label}: level is not shortest times longest cycle")
        if not is_balanced(s, self.N):
            raise DataError(f"{self.label}: shape is not balanced at level {self.N}")
        if self.n * self.h != self.N or self.n % self.h or 12 % self.h:
            raise DataError(f"{self.label}: inconsistent n, h, N")


def is_balanced(shape, N: int) -> bool:
    cyc = dict(shape)
    return all(N % i == 0 and cyc.get(N // i) == l for i, l in cyc.items())


def fixed_points(c: ConjClassRecord, k: int) -> int:
    """Number of points fixed by ``g**k``."""
    if k < 1:
        raise ValueError("k must be positive")
    return sum(i * l for i, l in c.shape if k % i == 0)


def power_shape(shape, a: int) -> tuple[tuple[int, int], ...]:
    """Cycle shape of ``g**a``: an i-cycle splits into gcd(i, a) cycles of length i/gcd(i, a)."""
    out: dict[int, int] = {}
    for i, l in shape:
        g = gcd(i, a)
        out[i // g] = out.get(i // g, 0) + l * g
    return tuple(sorted(out.items()))


# character table ----------------------------------------------------------

@dataclass(frozen=True)
class CharacterTable:
    classes: tuple[str, ...]
    irreducibles: tuple[str, ...]
    values: tuple[tuple[QuadraticValue, ...], ...]  # [irreducible][class]
    centralizers: tuple[int, ...] = field(default=())

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(int(row[0].a) for row in self.values)

    def column(self, cls: str) -> tuple[QuadraticValue, ...]:
        j = self.classes.index(cls)
        return tuple(row[j] for row in self.values)

    def row(self, irrep: str) -> dict[str, QuadraticValue]:
        i = self.irreducibles.index(irrep)
        return dict(zip(self.classes, self.values[i]))

    def centralizer(self, cls: str) -> int:
        return self.centralizers[self.classes.index(cls)]

    def class_size(self, cls: str) -> int:
        return M24_ORDER // self.centralizer(cls)

    def conjugate_irreducible(self, irrep: str) -> str:
        i = self.irreducibles.index(irrep)
        target = tuple(v.conj() for v in self.values[i])
        for j, row in enumerate(self.values):
            if row == target:
                return self.irreducibles[j]
        raise DataError(f"no conjugate for {irrep}")


def validate_table(irreducibles, classes, values) -> tuple[int, ...]:
    """Check both orthogonality relations exactly; return centralizer orders."""
    m = len(irreducibles)
    if m != len(classes) or any(len(r) != m for r in values):
        raise DataError("character table is not square")
    surds = [[v.surd() for v in row] for row in values]
    cents = []
    for j in range(m):
        for k in range(j, m):
            s = Surd()
            for i in range(m):
                s = s + surds[i][j] * surds[i][k].conj()
            if k == j:
                if not s.is_rational or s.rational_part() <= 0 or s.rational_part().denominator != 1:
                    raise DataError(f"column {classes[j]} has non-integral norm {s}")
                cents.append(int(s.rational_part()))
            elif s.terms:
                raise DataError(f"columns {classes[j]} and {classes[k]} are not orthogonal")
    if any(M24_ORDER % c for c in cents):
        raise DataError("centralizer order does not divide the group order")
    sizes = [M24_ORDER // c for c in cents]
    if sum(sizes) != M24_ORDER:
        raise DataError("class sizes do not add up to the group order")
    for i in range(m):
        for k in range(i, m):
            s = Surd()
            for j in range(m):
                s = s + (surds[i][j] * surds[k][j].conj()).scale(sizes[j])
            want = Surd.rational(M24_ORDER if i == k else 0)
            if s != want:
                raise DataError(f"rows {irreducibles[i]} and {irreducibles[k]} fail orthogonality")
    if sum(int(r[0].a) ** 2 for r in values) != M24_ORDER:
        raise DataError("sum of squared dimensions is not the group order")
    return tuple(cents)


# loading ------------------------------------------------------------------

@dataclass(frozen=True)
class GroupData:
    records: tuple[ConjClassRecord, ...]
    table: CharacterTable
    label_map: dict[str, tuple[str, ...]]  # series label -> classes
    newforms: dict

    def record(self, label: str) -> ConjClassRecord:
        for r in self.records:
            if r.label == label or label in r.members:
                return r
        raise KeyError(f"unknown class label {label!r}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.records)

    def series_label(self, cls: str) -> str:
        return self.record(cls).label

    def power_class(self, c: ConjClassRecord | str, a: int) -> str:
        """Series label of ``g**a``."""
        if a < 1:
            raise ValueError("power must be positive")
        if isinstance(c, str):
            c = self.record(c)
        shape = power_shape(c.shape, a)
        for r in self.records:
            if r.shape == shape:
                return r.label
        raise DataError(f"shape {shape} of {c.label}^{a} matches no class")

    def class_size(self, cls: str) -> int:
        return self.table.class_size(cls)

    def trace_vector(self, by_label: dict) -> dict[str, Fraction]:
        """Expand values keyed by series label to all 26 classes."""
        out = {}
        for r in self.records:
            v = Fraction(by_label[r.label])
            for m in r.members:
                out[m] = v
        return out

    def decompose(self, t: dict) -> dict[str, Fraction]:
        """Irreducible multiplicities of a virtual character given by its traces."""
        tab = self.table
        missing = set(tab.classes) - set(t)
        if missing:
            raise ValueError(f"trace vector lacks classes {sorted(missing)}")
        out = {}
        for i, irrep in enumerate(tab.irreducibles):
            s = Surd()
            for j, cls in enumerate(tab.classes):
                s = s + tab.values[i][j].conj().surd().scale(Fraction(t[cls]) * tab.class_size(cls))
            if not s.is_rational:
                raise ValueError(f"multiplicity of {irrep} is not rational: {s}")
            out[irrep] = s.rational_part() / M24_ORDER
        return out


def _parse_recipe(terms):
    out = []
    for t in terms:
        coeff = parse_rational(t["coeff"])
        kinds = [k for k in ("eta", "lambda", "newform") if k in t]
        if len(kinds) != 1:
            raise DataError(f"recipe term must have exactly one of eta/lambda/newform: {t}")
        kind = kinds[0]
        if kind == "eta":
            arg = tuple(sorted((int(k), int(v)) for k, v in t["eta"].items()))
            if any(k < 1 for k, _ in arg):
                raise DataError("eta arguments must be positive multiples of tau")
        elif kind == "lambda":
            arg = int(t["lambda"])
            if arg < 2:
                raise DataError("Lambda_N needs N >= 2")
        else:
            arg = str(t["newform"])
        out.append((coeff, kind, arg))
    return tuple(out)


def parse_group_data(raw: dict) -> GroupData:
    try:
        if raw["order"] != M24_ORDER:
            raise DataError("wrong group order")
        classes = tuple(raw["classes"])
        irreps = tuple(raw["irreducibles"])
        values = tuple(tuple(QuadraticValue.from_json(x) for x in row) for row in raw["characters"])
        records = []
        for r in raw["records"]:
            rec = ConjClassRecord(
                label=r["label"],
                members=tuple(r["members"]),
                shape=tuple((int(i), int(l)) for i, l in r["shape"]),
                chi=int(r["chi"]), k=int(r["k"]), n=int(r["n"]), N=int(r["N"]), h=int(r["h"]),
                t_tilde=_parse_recipe(r["t_tilde"]),
                t_tilde_alt=_parse_recipe(r["t_tilde_alt"]) if "t_tilde_alt" in r else None,
            )
            rec.validate()
            records.append(rec)
        newforms = {k: _parse_recipe(v) for k, v in raw["newforms"].items()}
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed group data: {e!r}") from None
    members = [m for r in records for m in r.members]
    if sorted(members) != sorted(classes) or len(set(members)) != len(members):
        raise DataError("series labels do not partition the classes")
    if len({r.shape for r in records}) != len(records):
        raise DataError("two series labels share a cycle shape")
    cents = validate_table(irreps, classes, values)
    # characters must agree on classes sharing a series label only up to conjugation;
    # paired classes carry complex-conjugate columns
    table = CharacterTable(classes, irreps, values, cents)
    for r in records:
        if len(r.members) == 2:
            a, b = (table.column(m) for m in r.members)
            if tuple(v.conj() for v in a) != b:
                raise DataError(f"columns of {r.label} are not complex conjugate")
        if int(table.column(r.members[0])[1].a) + 1 != r.chi:
            raise DataError(f"{r.label}: fixed points disagree with the 23-dimensional character")
    label_map = {r.label: r.members for r in records}
    return GroupData(tuple(records), table, label_map, newforms)


def data_path(name: str) -> Path:
    return Path(str(resources.files("m24forms") / "data" / name))


def load_json(path) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read {path}: {e}") from None


@lru_cache(maxsize=None)
def _load_default() -> GroupData:
    return parse_group_data(load_json(data_path("m24.json")))


_installed: GroupData | None = None


def load_group_data(path=None) -> GroupData:
    """Load and validate class records, the character table and recipes."""
    if path is None:
        return _installed if _installed is not None else _load_default()
    return parse_group_data(load_json(path))


def install_group_data(path) -> GroupData:
    """Validate a data file and make it the process-wide default."""
    global _installed
    _installed = load_group_data(path)
    return _installed


@lru_cache(maxsize=None)
def reference_tables() -> dict:
    """Published coefficient and decomposition tables used as ground truth."""
    return load_json(data_path("tables.json"))


def record(label: str) -> ConjClassRecord:
    return load_group_data().record(label)


def power_class(c: ConjClassRecord | str, a: int) -> str:
    return load_group_data().power_class(c, a)


def class_size(cls: str) -> int:
    return load_group_data().class_size(cls)


def decompose(t: dict) -> dict[str, Fraction]:
    return load_group_data().decompose(t)
