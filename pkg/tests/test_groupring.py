from __future__ import annotations

import random
from fractions import Fraction

import pytest

from paineq import builders
from paineq.errors import InvalidTransversal, NonIntegralWarning
from paineq.groupring import (ClassFunction, GroupRingElement, a_coefficient, default_transversal,
                              double_action_value, induced_perm_character_value, partial_augmentations,
                              partial_augmentations_in, phi_embed, ramanujan_sum, trace_formula_check)

from .conftest import CORE, corpus_instance, named

S3 = builders.symmetric(3)
R = S3.index_of((1, 2, 0))      # (0 1 2)
R2 = S3.index_of((2, 0, 1))     # (0 2 1)
T = S3.index_of((1, 0, 2))      # (0 1)


def E(G, terms):
    return GroupRingElement(G, terms)


def random_element(G, rng, size=6):
    return E(G, {rng.randrange(G.order): rng.randint(-3, 3) for _ in range(size)})


def class_index(G, g):
    return int(G.class_of[g])


# ---- arithmetic and partial augmentations -------------------------------------------


def test_pa_single_element_is_indicator():
    pa = partial_augmentations(GroupRingElement.basis(S3, T))
    assert pa == [1 if k == class_index(S3, T) else 0 for k in range(len(S3.classes))]


def test_pa_s3_example():
    x = E(S3, {R: 1, R2: 1, T: -1})
    pa = partial_augmentations(x)
    # reported on (identity, 3-cycles, transpositions)
    assert [pa[class_index(S3, g)] for g in (0, R, T)] == [0, 2, -1]
    assert sum(pa) == x.augmentation()


def test_pa_zero():
    assert partial_augmentations(GroupRingElement(S3)) == [0, 0, 0]


def test_no_zero_coefficients_stored():
    x = E(S3, {R: 1}) - E(S3, {R: 1})
    assert not x and x.coeffs == {}


def test_json_round_trip():
    x = E(S3, {R: 2, T: -1})
    assert GroupRingElement.from_json(S3, x.to_json()) == x


# ---- phi embedding --------------------------------------------------------------------


A3 = named(S3, "alternating")


def test_phi_rotation_diagonal():
    M = phi_embed(GroupRingElement.basis(S3, R), A3, [0, T])
    assert M.entries[0][0] == GroupRingElement.basis(S3, R)
    assert M.entries[1][1] == GroupRingElement.basis(S3, R2)
    assert not M.entries[0][1] and not M.entries[1][0]
    tr = M.trace()
    # the classes of A3 are singletons, so the PA at (0 1 2) is its coefficient
    assert tr[R] == 1 and tr[R2] == 1 and tr.augmentation() == 2


def test_phi_identity_is_identity_matrix():
    M = phi_embed(GroupRingElement.one(S3), A3, [0, T])
    one = GroupRingElement.one(S3)
    assert M.entries == [[one, GroupRingElement(S3)], [GroupRingElement(S3), one]]


def test_phi_outside_n_off_diagonal():
    M = phi_embed(GroupRingElement.basis(S3, T), A3, [0, T])
    assert not M.entries[0][0] and not M.entries[1][1]
    assert M.entries[0][1] and M.entries[1][0]
    assert not M.trace()


def test_phi_rejects_bad_transversal():
    with pytest.raises(InvalidTransversal):
        phi_embed(GroupRingElement.one(S3), A3, [0, R])
    with pytest.raises(InvalidTransversal):
        phi_embed(GroupRingElement.one(S3), A3, [0])


@pytest.mark.parametrize("key", CORE)
def test_phi_is_ring_homomorphism(key):
    G, N = corpus_instance(key)
    rng = random.Random(7)
    for _ in range(5):
        x, y = random_element(G, rng, 4), random_element(G, rng, 4)
        assert phi_embed(x * y, N) == phi_embed(x, N) @ phi_embed(y, N)
        assert phi_embed(x + y, N).entries == [[a + b for a, b in zip(r, s)] for r, s in
                                               zip(phi_embed(x, N).entries, phi_embed(y, N).entries)]


# ---- trace formula --------------------------------------------------------------------


def test_trace_formula_rotation():
    assert trace_formula_check(GroupRingElement.basis(S3, R), A3)


def test_trace_formula_support_outside_n():
    x = E(S3, {T: 3, S3.index_of((0, 2, 1)): -2})
    assert trace_formula_check(x, A3)


@pytest.mark.parametrize("key", CORE)
def test_trace_formula_random(key):
    G, N = corpus_instance(key)
    rng = random.Random(key)
    for _ in range(20):
        assert trace_formula_check(random_element(G, rng), N)


@pytest.mark.parametrize("key", CORE)
def test_trace_transversal_independent(key):
    G, N = corpus_instance(key)
    rng = random.Random(1)
    base = default_transversal(N)
    shifted = [G.mul(int(N.members[rng.randrange(N.order)]), t) for t in base]
    for _ in range(10):
        x = random_element(G, rng)
        a = partial_augmentations_in(phi_embed(x, N, base).trace(), N)
        b = partial_augmentations_in(phi_embed(x, N, shifted).trace(), N)
        assert a == b


# ---- double action and induced characters -------------------------------------------------


def test_double_action_examples():
    v = GroupRingElement.basis(S3, R)
    assert double_action_value(v, 3, 1, R) == 3
    assert double_action_value(v, 3, 1, T) == 0
    assert double_action_value(v, 3, 0, 0) == 6


def test_double_action_rejects_exponent():
    with pytest.raises(ValueError):
        double_action_value(GroupRingElement.basis(S3, R), 3, 3, 0)


def test_induced_examples():
    assert induced_perm_character_value(3, R, (0, 0), S3) == 3 * 6 // 3
    assert induced_perm_character_value(3, R, (1, R), S3) == 3
    assert induced_perm_character_value(3, R, (1, T), S3) == 0


@pytest.mark.parametrize("key", CORE)
def test_trivial_unit_decomposition(key):
    G, N = corpus_instance(key)
    for n0 in N.members.tolist():
        m = G.order_of(n0)
        v = GroupRingElement.basis(G, n0)
        for i in range(m):
            for c in G.classes:
                assert double_action_value(v, m, i, c.rep) == induced_perm_character_value(m, n0, (i, c.rep), G)


@pytest.mark.parametrize("key", CORE)
def test_berman_higman_trivial_units(key):
    G, N = corpus_instance(key)
    for n0 in N.members.tolist()[1:]:
        assert partial_augmentations(GroupRingElement.basis(G, n0))[0] == 0


# ---- a-coefficients ---------------------------------------------------------------------


def test_a_coefficient_trivial():
    assert a_coefficient(3, R, ClassFunction.trivial(3, S3), S3) == 1


def test_a_coefficient_regular():
    assert a_coefficient(3, R, ClassFunction.regular(3, S3), S3) == S3.order


def test_a_coefficient_induced_positive():
    G = builders.dihedral(12)
    for g in range(0, G.order, 5):
        m = G.order_of(g)
        assert a_coefficient(m, g, ClassFunction.induced(m, g, G), G) >= 1


def test_a_coefficient_warns_on_non_character():
    half = ClassFunction(3, [[Fraction(1, 2)] * 3 for _ in range(3)], S3.class_of)
    with pytest.warns(NonIntegralWarning):
        a_coefficient(3, R, half, S3)


def test_ramanujan_sums():
    assert [ramanujan_sum(1, j) for j in range(3)] == [1, 1, 1]
    assert [ramanujan_sum(3, j) for j in range(3)] == [2, -1, -1]
    assert [ramanujan_sum(4, j) for j in range(4)] == [2, 0, -2, 0]
    assert sum(ramanujan_sum(d, 1) for d in (1, 2, 3, 6)) == 0
