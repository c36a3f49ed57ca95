from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from paineq.abelian import (INFINITY, AbelianShape, alpha_A, cocyclic_count_by_order, cocyclic_counts,
                            cocyclic_counts_bruteforce, cyclic_count_by_index, cyclic_count_by_order,
                            enumerate_cocyclic, f_closed, f_eval, f_values, m_values, m_values_closed,
                            m_values_direct, minimal_prime_bound_check, n_values, numerical_lemma_eval,
                            realize, sum_alpha_below)
from paineq.errors import HypothesisViolated

from .corpus import abelian_up_to, primary_exponents

S = AbelianShape.parse


# ---- shapes ---------------------------------------------------------------------


def test_parse_forms():
    assert S("2^2,3") == S("4,3") == AbelianShape.from_invariants([12])
    assert S("") == S("1") == AbelianShape()
    assert S("3,3").name == "C3xC3"
    assert S("4,2").invariant_factors() == [2, 4]


def test_shape_counts():
    A = S("8,2,2,3")
    assert A.multiplicities(2) == (2, 0, 1)
    assert A.L(2, 1) == 3 and A.L(2, 2) == 1 and A.L(2, 3) == 1
    assert A.k(2) == 3 and A.k(3) == 1
    assert A.order == 96 and A.exponent == 24


# ---- enumerate_cocyclic -------------------------------------------------------------


def test_cocyclic_klein_four():
    ks = enumerate_cocyclic(S("2,2"))
    assert len(ks) == 4
    assert sorted((K.index, K.alpha) for K in ks) == [(1, -2), (2, 1), (2, 1), (2, 1)]


def test_cocyclic_c4():
    ks = enumerate_cocyclic(S("4"))
    assert sorted((K.order, K.alpha) for K in ks) == [(1, 1), (2, 0), (4, 0)]


def test_cocyclic_trivial():
    ks = enumerate_cocyclic(AbelianShape())
    assert [(K.order, K.alpha) for K in ks] == [(1, 1)]


def test_cocyclic_quotients_are_cyclic():
    A = S("4,2,3")
    R = realize(A)
    elems = [R.element_vector(i) for i in range(A.order)]
    orders = A.factor_orders()
    for K in enumerate_cocyclic(A):
        mask = R.mask(K)
        members = {elems[i] for i in range(A.order) if mask[i]}
        # some a in A has order [A:K] modulo K
        ok = False
        for a in elems:
            k, x = 1, a
            while x not in members:
                x = tuple((u + v) % n for u, v, n in zip(x, a, orders))
                k += 1
            if k == K.index:
                ok = True
                break
        assert ok


@pytest.mark.parametrize("A", [S("2,2"), S("4,2"), S("3,3,5,5"), S("9,3"), S("2,2,2,3")], ids=lambda A: A.name)
def test_sum_alpha_below_is_one(A):
    for K in enumerate_cocyclic(A):
        assert sum_alpha_below(A, K) == 1


# ---- counting -----------------------------------------------------------------------


def test_counts_c4_x_c2_index_4():
    assert cocyclic_counts(S("4,2"), 2, 2)[0] == 2


def test_counts_cyclic_index_one():
    assert cocyclic_counts(S("5"), 5, 0) == (1, 1)


def test_counts_klein_order_2():
    A = S("2,2")
    assert cocyclic_count_by_order(A, 2, 1) == 3
    assert cocyclic_counts(A, 2, 1)[0] == 3


@pytest.mark.parametrize("A", [S("4,2"), S("8,4,2"), S("9,3,3"), S("2,2,2"), S("4,4"), S("27,9"), S("25,5")],
                         ids=lambda A: A.name)
def test_counts_match_bruteforce_and_duality(A):
    for p in A.primes:
        for i in primary_exponents(A, p):
            assert cocyclic_counts(A, p, i) == cocyclic_counts_bruteforce(A, p, i)
            assert cocyclic_count_by_order(A, p, i) == cyclic_count_by_index(A, p, i)
            assert cyclic_count_by_order(A, p, i) == cocyclic_counts_bruteforce(A, p, i)[0]


# ---- m and n values ---------------------------------------------------------------------


def test_m_values_klein():
    mv = m_values(S("2,2"))
    assert (mv.m_plus, mv.m_minus, mv.m_A) == (6, 2, 2)


@pytest.mark.parametrize("text", ["5", "12", "8,3"])
def test_m_values_cyclic(text):
    mv = m_values(S(text))
    assert mv.m_minus == 0 and mv.m_A == 0


def test_m_values_c3_squared():
    mv = m_values(S("3,3"))
    assert mv.m_minus == 3 and mv.m_A == 3


def test_m_values_trivial_group_follows_definition():
    # A = C1 is its own only cocyclic subgroup, alpha_A = 1 (empty product),
    # so the defining case split gives m_A = m_minus - alpha_A = -1
    mv = m_values(AbelianShape())
    assert (mv.m_plus, mv.m_minus, mv.m_A) == (1, 0, -1)


def test_n_values_c3_squared():
    nv = n_values(S("3,3"))
    assert (nv.alpha_A, nv.n_minus, nv.n_A) == (-3, 3, 3)


def test_n_values_cyclic_infinite():
    nv = n_values(S("6"))
    assert nv.n_A == INFINITY and nv.n_minus == INFINITY


def test_n_values_even_branch():
    nv = n_values(S("3,3,5,5"))
    assert nv.alpha_A == 15
    assert nv.n_minus == Fraction(3, 2)
    assert nv.n_A == Fraction(5, 3)
    assert m_values(S("3,3,5,5")).m_minus == 150


def test_alpha_closed_form_matches_lattice():
    for A in abelian_up_to(64):
        whole = next(K for K in enumerate_cocyclic(A) if K.index == 1)
        assert whole.alpha == alpha_A(A)


def test_direct_and_closed_agree_small():
    for A in abelian_up_to(100):
        assert m_values_direct(A) == m_values_closed(A)


def test_coprime_multiplicativity():
    pairs = [("2,2", "3,3"), ("4,2", "9"), ("3,3", "5,5"), ("2,2,2", "5"), ("4", "3,3")]
    for b, c in pairs:
        B, C = S(b), S(c)
        A = AbelianShape(dict(B.parts) | dict(C.parts))
        mb, mc, ma = m_values(B), m_values(C), m_values(A)
        assert ma.m_plus == mb.m_plus * mc.m_plus + mb.m_minus * mc.m_minus
        assert ma.m_minus == mb.m_plus * mc.m_minus + mb.m_minus * mc.m_plus


def test_alpha_sign_rule():
    for A in [S("2,2"), S("3,3,5,5"), S("4,2,3"), S("2,2,3,3,5"), S("9,3")]:
        R = realize(A)
        for K in enumerate_cocyclic(A):
            cyclic_ok = all(P.sizes[j] == 1 for P, j in zip(R.parts, K.components) if A.k(P.p) == 1)
            odd = sum(1 for P, j in zip(R.parts, K.components) if A.k(P.p) > 1 and not P.is_minimal(j)) % 2
            assert (K.alpha < 0) == (cyclic_ok and odd == 1)


def test_m_A_sign_nontrivial():
    for A in abelian_up_to(120)[1:]:
        mv = m_values(A)
        assert mv.m_A >= 0
        assert (mv.m_A > 0) == (not A.is_cyclic())


# ---- f_a ------------------------------------------------------------------------------


def test_f_klein():
    A = S("2,2")
    assert f_eval(A, (1, 0), (1, 0)) == 6
    assert f_eval(A, (1, 0), (0, 1)) == 2


def test_f_trivial_group_follows_definition():
    # both sums are empty at x = a, so the definition gives 0 = |A| + m_A with m_A = -1
    assert f_eval(AbelianShape(), (), ()) == 0


@pytest.mark.parametrize("A", [S("2,2"), S("4,2"), S("3,3"), S("6,2"), S("2,2,2"), S("3,3,5,5")], ids=lambda A: A.name)
def test_f_definition_equals_closed_form(A):
    R = realize(A)
    for ai in range(0, A.order, max(1, A.order // 7)):
        a = R.element_vector(ai)
        vals = f_values(A, a)
        for xi in range(A.order):
            assert vals[xi] == f_closed(A, a, R.element_vector(xi))


# ---- numerical lemmas ---------------------------------------------------------------------


@pytest.mark.parametrize("x,k,expected", [(1, 2, 6), (1, 1, 1), (2, 3, 72)])
def test_numerical_lemma_examples(x, k, expected):
    assert numerical_lemma_eval(x, k) == (expected, expected)


def test_minimal_prime_bound_examples():
    assert minimal_prime_bound_check(S("3,3")) == (3, 3, True)
    assert minimal_prime_bound_check(S("3,3,5,5")) == (Fraction(3, 2), Fraction(5, 3), True)
    assert minimal_prime_bound_check(S("3,3,5,5,7,7"))[2]


@pytest.mark.parametrize("text", ["2,2", "3", "9,3,3", ""])
def test_minimal_prime_bound_hypotheses(text):
    with pytest.raises(HypothesisViolated):
        minimal_prime_bound_check(S(text))


def test_one_prime_rank_two_equals_p():
    # for a rank two p-group the bound n_A is exactly p
    for p in (3, 5, 7):
        assert n_values(S(f"{p},{p}")).n_A == p
        assert n_values(S(f"{p*p},{p}")).n_A == p


def test_rank_k_strictly_between():
    for p, k in itertools.product((2, 3, 5), (3, 4)):
        n = n_values(S(",".join([str(p)] * k))).n_A
        assert p - 1 < n < p
