"""Tests for root data tables, lattice pairings, and Weyl word machinery."""

from __future__ import annotations

import random

import pytest

from qcells.cartan import (
    Coweight,
    RootVector,
    Weight,
    build_root_datum,
    is_reduced,
    length,
    reduced_words,
    weyl_act,
    weyl_act_coweight,
    weyl_act_root,
    weyl_dim,
    weyl_elements,
    weyl_key,
)

ALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2"]


def test_cartan_tables():
    a2 = build_root_datum("A2")
    assert a2.a == ((2, -1), (-1, 2)) and a2.d == (1, 1)
    b2 = build_root_datum("B2")
    assert b2.a == ((2, -1), (-2, 2)) and b2.d == (2, 1)
    c2 = build_root_datum("C2")
    assert c2.a == ((2, -2), (-1, 2)) and c2.d == (1, 2)
    g2 = build_root_datum("G2")
    assert g2.a == ((2, -3), (-1, 2)) and g2.d == (1, 3)
    b3 = build_root_datum("B3")
    assert b3.a == ((2, -1, 0), (-1, 2, -1), (0, -2, 2)) and b3.d == (2, 2, 1)
    c3 = build_root_datum("C3")
    assert c3.a == ((2, -1, 0), (-1, 2, -2), (0, -1, 2)) and c3.d == (1, 1, 2)
    d4 = build_root_datum("D4")
    assert d4.a[1] == (-1, 2, -1, -1) and d4.d == (1, 1, 1, 1)


def test_symmetrizability_everywhere():
    for name in ALL_TYPES:
        dat = build_root_datum(name)
        for i in dat.index_set:
            for j in dat.index_set:
                assert dat.di(i) * dat.aij(i, j) == dat.di(j) * dat.aij(j, i)


def test_parse_and_interning():
    assert build_root_datum("a2") is build_root_datum("A", 2)
    for bad in ["E8", "A5", "B4", "D5", "F4", "X1", "A", "2A"]:
        with pytest.raises(ValueError):
            build_root_datum(bad)


def test_positive_root_counts():
    expect = {"A1": 1, "A2": 3, "A3": 6, "A4": 10, "B2": 4, "B3": 9,
              "C2": 4, "C3": 9, "D4": 12, "G2": 6}
    for name, n in expect.items():
        assert len(build_root_datum(name).positive_roots()) == n


def test_pairing_examples():
    a2 = build_root_datum("A2")
    assert a2.sym_pair(a2.fundamental(2), RootVector((1, 1))) == 1
    # (w_i, alpha_j) = d_j delta_ij in every type
    for name in ALL_TYPES:
        dat = build_root_datum(name)
        for i in dat.index_set:
            for j in dat.index_set:
                got = dat.sym_pair(dat.fundamental(i), dat.alpha(j))
                assert got == (dat.di(j) if i == j else 0)


def test_lattice_conversions():
    a2 = build_root_datum("A2")
    assert a2.root_to_weight(RootVector((1, 0))) == Weight((2, -1))
    assert a2.weight_to_root(Weight((1, 1))) == RootVector((1, 1))
    with pytest.raises(ValueError):
        a2.weight_to_root(a2.fundamental(1))
    rng = random.Random(7)
    for name in ALL_TYPES:
        dat = build_root_datum(name)
        for _ in range(20):
            nu = RootVector(tuple(rng.randrange(-4, 5) for _ in dat.index_set))
            assert dat.weight_to_root(dat.root_to_weight(nu)) == nu


def test_reflection_examples():
    a2 = build_root_datum("A2")
    assert a2.reflect_root(1, a2.alpha(1)) == -a2.alpha(1)
    assert a2.reflect_root(2, a2.alpha(1)) == RootVector((1, 1))
    assert a2.reflect_weight(1, a2.fundamental(1)) == Weight((-1, 1))
    assert a2.reflect_coweight(1, Coweight((1, 0))) == Coweight((-1, 0))


def test_weyl_act_examples():
    a2 = build_root_datum("A2")
    assert weyl_act(a2, (1, 2, 1), a2.fundamental(1)) == Weight((0, -1))
    # rightmost letter first: word (1,2) applies s_2 then s_1
    lam = Weight((2, -3))
    assert weyl_act(a2, (1, 2), lam) == a2.reflect_weight(1, a2.reflect_weight(2, lam))
    assert weyl_act_coweight(a2, (1, 2, 1), Coweight((1, 0))) == Coweight((0, -1))


def test_form_is_weyl_invariant():
    rng = random.Random(11)
    for _ in range(200):
        dat = build_root_datum(rng.choice(ALL_TYPES))
        lam = Weight(tuple(rng.randrange(-3, 4) for _ in dat.index_set))
        nu = RootVector(tuple(rng.randrange(-3, 4) for _ in dat.index_set))
        word = tuple(rng.choice(list(dat.index_set)) for _ in range(rng.randrange(6)))
        lhs = dat.sym_pair(weyl_act(dat, word, lam), weyl_act_root(dat, word, nu))
        assert lhs == dat.sym_pair(lam, nu)
        h = Coweight(tuple(rng.randrange(-3, 4) for _ in dat.index_set))
        assert dat.coweight_weight(
            weyl_act_coweight(dat, word, h), weyl_act(dat, word, lam)
        ) == dat.coweight_weight(h, lam)


def test_reduced_and_length():
    a2 = build_root_datum("A2")
    assert is_reduced(a2, (1, 2, 1))
    assert not is_reduced(a2, (1, 2, 1, 2))
    assert length(a2, (1, 2, 1, 2)) == 2
    assert length(a2, ()) == 0
    rng = random.Random(3)
    for _ in range(120):
        dat = build_root_datum(rng.choice(["A2", "A3", "B2", "G2"]))
        word = tuple(rng.choice(list(dat.index_set)) for _ in range(rng.randrange(8)))
        assert is_reduced(dat, word) == (length(dat, word) == len(word))


def test_reduced_words_enumeration():
    a2 = build_root_datum("A2")
    assert reduced_words(a2, (1, 2, 1)) == ((1, 2, 1), (2, 1, 2))
    # non-reduced input is allowed and resolved to its element
    assert reduced_words(a2, (1, 2, 1, 2)) == ((2, 1),)
    a3 = build_root_datum("A3")
    words = reduced_words(a3, (1, 2, 1, 3, 2, 1))
    assert len(words) == 16
    key = weyl_key(a3, (1, 2, 1, 3, 2, 1))
    for w in words:
        assert is_reduced(a3, w)
        assert weyl_key(a3, w) == key


def test_weyl_element_counts():
    expect = {"A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48,
              "C2": 8, "C3": 48, "D4": 192, "G2": 12}
    for name, n in expect.items():
        assert len(weyl_elements(build_root_datum(name))) == n


def test_weyl_elements_max_length():
    g2 = build_root_datum("G2")
    short = weyl_elements(g2, max_length=4)
    assert len(short) == 9
    assert all(len(w) <= 4 for w in short)
    # sorted by (length, word) and words are lex-minimal representatives
    assert short == sorted(short, key=lambda w: (len(w), w))
    assert weyl_elements(build_root_datum("A2"))[-1] == (1, 2, 1)


def test_weyl_dim_values():
    a1 = build_root_datum("A1")
    a2 = build_root_datum("A2")
    assert weyl_dim(a1, Weight((1,))) == 2
    assert weyl_dim(a1, Weight((4,))) == 5
    assert weyl_dim(a2, a2.fundamental(1)) == 3
    assert weyl_dim(a2, Weight((1, 1))) == 8
    b2 = build_root_datum("B2")
    assert weyl_dim(b2, b2.fundamental(1)) == 5
    assert weyl_dim(b2, b2.fundamental(2)) == 4
    assert weyl_dim(build_root_datum("G2"), Weight((1, 0))) == 7
    assert weyl_dim(build_root_datum("D4"), Weight((1, 0, 0, 0))) == 8
    with pytest.raises(ValueError):
        weyl_dim(a2, Weight((-1, 0)))


def test_weyl_dim_of_rho_counts_positive_roots():
    for name in ALL_TYPES:
        dat = build_root_datum(name)
        assert weyl_dim(dat, dat.rho()) == 2 ** len(dat.positive_roots())
