import copy
import json
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from m24forms.group import (
    M24_ORDER,
    DataError,
    QuadraticValue,
    class_size,
    data_path,
    decompose,
    fixed_points,
    is_balanced,
    load_group_data,
    parse_group_data,
    power_class,
)

G = load_group_data()


def raw_data():
    with open(data_path("m24.json")) as f:
        return json.load(f)


def permutation_of_shape(shape):
    """An explicit permutation of 0..23 with the given cycle shape."""
    perm = list(range(24))
    start = 0
    for length, mult in shape:
        for _ in range(mult):
            for j in range(length):
                perm[start + j] = start + (j + 1) % length
            start += length
    assert start == 24
    return perm


def cycle_type(perm):
    seen = [False] * len(perm)
    counts = {}
    for i in range(len(perm)):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                n += 1
            counts[n] = counts.get(n, 0) + 1
    return tuple(sorted(counts.items()))


def perm_power(perm, a):
    out = list(range(len(perm)))
    for _ in range(a):
        out = [perm[x] for x in out]
    return out


# -- records -------------------------------------------------------------------

def test_record_2A():
    r = G.record("2A")
    assert r.shape == ((1, 8), (2, 8))
    assert (r.k, r.n, r.N, r.h) == (8, 2, 2, 1)


def test_record_12B():
    r = G.record("12B")
    assert r.shape == ((12, 2),)
    assert (r.k, r.n, r.N, r.h) == (1, 12, 144, 12)


def test_record_23AB():
    r = G.record("23AB")
    assert r.shape == ((1, 1), (23, 1))
    assert r.chi == 1
    assert G.record("23B") is r


def test_twenty_one_series_labels_cover_26_classes():
    assert len(G.records) == 21
    members = [m for r in G.records for m in r.members]
    assert sorted(members) == sorted(G.table.classes)
    assert len(G.table.classes) == 26


@pytest.mark.parametrize("label", G.labels)
def test_record_invariants(label):
    r = G.record(label)
    lengths = [i for i, _ in r.shape]
    assert sum(i * l for i, l in r.shape) == 24
    assert is_balanced(r.shape, r.N)
    assert r.n == max(lengths)
    assert r.N == min(lengths) * max(lengths)
    assert r.n * r.h == r.N
    assert r.n % r.h == 0 and 12 % r.h == 0
    assert r.chi == (r.shape[0][1] if lengths[0] == 1 else 0)
    assert 2 * r.k == sum(l for _, l in r.shape)


# -- fixed points and powers -----------------------------------------------------

def test_fixed_points_examples():
    assert fixed_points(G.record("2A"), 1) == 8
    assert fixed_points(G.record("2A"), 2) == 24
    # 1^4 2^2 4^4: the 1- and 2-cycles are fixed by g^2
    assert fixed_points(G.record("4B"), 2) == 8


@pytest.mark.parametrize("label", G.labels)
def test_fixed_points_against_permutation(label):
    r = G.record(label)
    perm = permutation_of_shape(r.shape)
    for k in range(1, 25):
        pk = perm_power(perm, k)
        assert fixed_points(r, k) == sum(1 for i, x in enumerate(pk) if i == x)
        if k % r.n == 0:
            assert fixed_points(r, k) == 24


def test_power_class_examples():
    assert power_class("4A", 2) == "2A"
    assert power_class("2A", 2) == "1A"
    for lab in G.labels:
        assert power_class(lab, 1) == lab


@pytest.mark.parametrize("label", G.labels)
def test_power_class_against_permutation(label):
    r = G.record(label)
    perm = permutation_of_shape(r.shape)
    for a in range(1, 25):
        shape = cycle_type(perm_power(perm, a))
        target = G.record(power_class(r, a))
        assert target.shape == shape
        # depends only on gcd(a, n)
        assert power_class(r, a) == power_class(r, gcd(a, r.n))


def test_fixed_points_rejects_nonpositive():
    with pytest.raises(ValueError):
        fixed_points(G.record("2A"), 0)


# -- character table -------------------------------------------------------------

def test_dimensions_and_order():
    dims = G.table.dims
    assert dims[:4] == (1, 23, 45, 45)
    assert dims[-1] == 10395
    assert sum(d * d for d in dims) == M24_ORDER == 244823040


def test_class_sizes():
    assert class_size("1A") == 1
    assert G.table.centralizer("1A") == 244823040
    assert sum(class_size(c) for c in G.table.classes) == M24_ORDER
    assert class_size("23A") == class_size("23B") == M24_ORDER // 23


def test_centralizer_is_column_norm():
    for c in G.table.classes:
        col = G.table.column(c)
        total = Fraction(0)
        for v in col:
            s = v.surd() * v.conj().surd()
            assert s.is_rational
            total += s.rational_part()
        assert total == G.table.centralizer(c)


def test_conjugate_pairs():
    t = G.table
    assert t.conjugate_irreducible("45") == "45bar"
    assert t.conjugate_irreducible("1035'") == "1035'"
    assert t.conjugate_irreducible("1035") == "1035bar"


def test_quadratic_value_conjugation():
    v = QuadraticValue(Fraction(-1, 2), Fraction(1, 2), 7)
    assert v.conj() == QuadraticValue(Fraction(-1, 2), Fraction(-1, 2), 7)
    assert not v.is_rational
    assert QuadraticValue(Fraction(3), Fraction(0), None).is_rational


# -- decomposition -----------------------------------------------------------------

def test_decompose_trivial():
    m = decompose({c: 1 for c in G.table.classes})
    assert m["1"] == 1
    assert all(v == 0 for k, v in m.items() if k != "1")


def test_decompose_permutation_character():
    t = {}
    for r in G.records:
        for c in r.members:
            t[c] = r.chi
    m = decompose(t)
    assert m["1"] == 1 and m["23"] == 1
    assert sum(m.values()) == 2


@pytest.mark.parametrize("irrep", G.table.irreducibles)
def test_decompose_irreducible_rows(irrep):
    # feed the row itself; irrational rows go through their rational combination with the conjugate
    row = G.table.row(irrep)
    conj = G.table.conjugate_irreducible(irrep)
    if all(v.is_rational for v in row.values()):
        m = decompose({c: v.a for c, v in row.items()})
        assert m == {k: int(k == irrep) for k in G.table.irreducibles}
    else:
        crow = G.table.row(conj)
        t = {c: (row[c].surd() + crow[c].surd()).rational_part() for c in row}
        m = decompose(t)
        assert m == {k: int(k in (irrep, conj)) for k in G.table.irreducibles}


def test_decompose_rejects_unpaired_vector():
    t = {c: 0 for c in G.table.classes}
    t["7A"] = 1
    with pytest.raises(ValueError):
        decompose(t)


@given(st.lists(st.integers(-3, 3), min_size=26, max_size=26))
def test_decompose_recovers_integer_combinations(mults):
    # random combination of the real characters (row + conjugate row)
    t = {c: Fraction(0) for c in G.table.classes}
    want = {}
    irr = G.table.irreducibles
    for m, name in zip(mults, irr):
        conj = G.table.conjugate_irreducible(name)
        if irr.index(conj) < irr.index(name):
            continue
        row, crow = G.table.row(name), G.table.row(conj)
        for c in t:
            s = row[c].surd() + crow[c].surd() if conj != name else row[c].surd()
            t[c] += m * s.rational_part()
        want[name] = want.get(name, 0) + m
        if conj != name:
            want[conj] = want.get(conj, 0) + m
    got = decompose(t)
    assert all(got[k] == want.get(k, 0) for k in irr)


# -- corrupted data ---------------------------------------------------------------

def test_pristine_data_parses():
    assert parse_group_data(raw_data()).table.classes == G.table.classes


def test_corrupted_character_entry_fails():
    raw = copy.deepcopy(raw_data())
    raw["characters"][1][2] += 1
    with pytest.raises(DataError):
        parse_group_data(raw)


def test_corrupted_shape_fails():
    raw = copy.deepcopy(raw_data())
    rec = next(r for r in raw["records"] if r["label"] == "2A")
    rec["shape"] = [[1, 8], [2, 7], [3, 1]]
    with pytest.raises(DataError):
        parse_group_data(raw)


def test_corrupted_level_fails():
    raw = copy.deepcopy(raw_data())
    rec = next(r for r in raw["records"] if r["label"] == "12B")
    rec["h"] = 6
    with pytest.raises(DataError):
        parse_group_data(raw)


def test_unknown_label():
    with pytest.raises(KeyError):
        G.record("9Z")
