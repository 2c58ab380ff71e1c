"""Tests for the quantum torus attached to a reduced word: commutation,
normal ordering, inversion, weights, and serialization."""

from __future__ import annotations

import random

import pytest

from qcells.cartan import build_root_datum
from qcells.qtorus import (
    TorusPresentation,
    monomial_json,
    normalize,
    torus_str,
)
from qcells.scalars import LaurentQ, ScalarQ

A2 = build_root_datum("A2")
B2 = build_root_datum("B2")
G2 = build_root_datum("G2")

P121 = TorusPresentation(A2, (1, 2, 1))


def test_kappa_is_symmetrized_cartan_pairing():
    assert P121.kappa == ((2, -1, 2), (-1, 2, -1), (2, -1, 2))
    b = TorusPresentation(B2, (2, 1, 2, 1))
    assert b.kappa == (
        (2, -2, 2, -2),
        (-2, 4, -2, 4),
        (2, -2, 2, -2),
        (-2, 4, -2, 4),
    )


def test_generator_commutation():
    t1, t2, t3 = P121.generator(1), P121.generator(2), P121.generator(3)
    assert torus_str(t1 * t2) == "t1 t2"
    assert torus_str(t2 * t1) == "q^1 · t1 t2"
    assert torus_str(t3 * t1) == "q^-2 · t1 t3"
    # defining relation t_j t_k = q^{kappa_jk} t_k t_j for j < k
    assert t1 * t2 == (t2 * t1).scaled(ScalarQ.q_power(P121.kappa[0][1]))


def test_normalize_builds_ordered_monomial():
    got = normalize(P121, [(2, 1), (1, 1)])
    assert torus_str(got) == "q^1 · t1 t2"
    assert normalize(P121, []) == P121.unit()
    # inverse exponents are allowed
    got = normalize(P121, [(1, -1), (1, 1)])
    assert got == P121.unit()


def test_reorder_power_matches_product():
    rng = random.Random(9)
    for _ in range(20):
        e = tuple(rng.randrange(-2, 3) for _ in range(3))
        f = tuple(rng.randrange(-2, 3) for _ in range(3))
        x, y = P121.monomial(e), P121.monomial(f)
        prod = x * y
        exps, coeff = prod.monomial()
        assert exps == tuple(a + b for a, b in zip(e, f))
        assert coeff.as_q_power() == P121.reorder_power(e, f)


def test_invert_monomial():
    x = P121.monomial((1, -2, 0), ScalarQ.q_power(3))
    assert torus_str(x.invert_monomial()) == "q^-5 · t1^-1 t2^2"
    assert torus_str(x * x.invert_monomial()) == "1"
    assert torus_str(x.invert_monomial() * x) == "1"


def test_invert_rejects_sums():
    x = P121.generator(1) + P121.generator(2)
    with pytest.raises(ValueError):
        x.invert_monomial()


def test_weight_of_counts_letters():
    t1, t2 = P121.generator(1), P121.generator(2)
    assert (t1 * t2).weight_of().coords == (1, 1)
    # positions 1 and 3 both carry letter 1
    assert P121.monomial((1, 0, 1)).weight_of().coords == (2, 0)
    with pytest.raises(ValueError):
        P121.zero().weight_of()


def test_arithmetic_and_zero():
    t1, t2 = P121.generator(1), P121.generator(2)
    assert (t1 - t1).is_zero()
    assert t1 + P121.zero() == t1
    assert (t1 + t2) - t2 == t1
    assert torus_str(P121.zero()) == "0"
    assert not (t1 + t2).is_monomial()


def test_presentation_equality():
    assert P121 == TorusPresentation(A2, (1, 2, 1))
    assert P121 != TorusPresentation(A2, (2, 1, 2))
    with pytest.raises(ValueError):
        t = TorusPresentation(A2, (2, 1, 2)).generator(1)
        _ = P121.generator(1) + t


def test_torus_str_forms():
    assert torus_str(P121.unit()) == "1"
    assert torus_str(P121.generator(2)) == "t2"
    assert torus_str(P121.monomial((0, 1, 1))) == "t2 t3"
    assert torus_str(P121.monomial((-1, 0, 0), ScalarQ.q_power(1))) == "q^1 · t1^-1"
    coeff = ScalarQ(LaurentQ({1: 1, -1: 1}))
    assert torus_str(P121.generator(1).scaled(coeff)) == "(q^1+q^-1) · t1"


def test_monomial_json_shapes():
    x = P121.monomial((1, -2, 0), ScalarQ.q_power(3))
    assert monomial_json(x) == {"q": 3, "exp": [1, -2, 0]}
    y = P121.monomial((0, 0, 0), ScalarQ(LaurentQ({1: 1, -1: 1})))
    assert monomial_json(y) == {"q": "q^1+q^-1", "exp": [0, 0, 0]}


def test_torus_requires_letters_in_index_set():
    with pytest.raises(ValueError):
        TorusPresentation(A2, (1, 3))


def test_g2_commutation_strength():
    p = TorusPresentation(G2, (1, 2))
    # (alpha_1, alpha_2) = d_1 a_12 = -3
    assert p.kappa[0][1] == -3
    t1, t2 = p.generator(1), p.generator(2)
    assert t2 * t1 == (t1 * t2).scaled(ScalarQ.q_power(3))
