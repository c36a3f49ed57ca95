from __future__ import annotations

import json

import pytest
from sympy import factorint

from paineq import builders
from paineq.certify import (AT_MOST_ONE_NONCYCLIC, LOCAL_SEPARATION, MAIN, NONE, ONE_PRIME, SIMPLIFIED_BOUND,
                            WEISS_NILPOTENT, ZC1, ZC2, centralizer_index_max, certify_sehgal, certify_zc,
                            local_separation, splits)
from paineq.feasibility import SEHGAL_POSITIVE
from paineq.pipeline import combine_tags, solve

from .conftest import CORPUS, corpus_instance


# ---- local separation ------------------------------------------------------------------------


def test_local_separation_s4():
    G, N = corpus_instance("S4")
    assert local_separation(G, N).rule == LOCAL_SEPARATION


def test_local_separation_fails_d24():
    G, N = corpus_instance("D24")
    assert local_separation(G, N) is None


def test_local_separation_abelian():
    G = builders.abelian([6, 2])
    assert local_separation(G, G.whole).rule == LOCAL_SEPARATION


# ---- certify_sehgal ------------------------------------------------------------------------


def test_main_gen_dihedral_18():
    G, N = corpus_instance("Dih9")
    rep = certify_sehgal(G, N)
    main = rep.find(MAIN)
    assert main is not None
    assert main.witnesses["n_A"] == "3" and main.witnesses["max_index"] == 2
    assert ONE_PRIME in rep and SIMPLIFIED_BOUND in rep


def test_s4_local_separation_not_main():
    G, N = corpus_instance("S4")
    rep = certify_sehgal(G, N)
    assert rep.rule == LOCAL_SEPARATION
    assert MAIN not in rep
    (split,) = splits(N)
    assert centralizer_index_max(G, N, split)[0] == 3


def test_sl23_q8_at_most_one_noncyclic():
    G, N = corpus_instance("SL23")
    rep = certify_sehgal(G, N)
    assert AT_MOST_ONE_NONCYCLIC in rep
    assert rep.find(AT_MOST_ONE_NONCYCLIC).witnesses["p_group"] is True


def test_rules_in_canonical_order(instance):
    order = [LOCAL_SEPARATION, WEISS_NILPOTENT, AT_MOST_ONE_NONCYCLIC, MAIN, ONE_PRIME, SIMPLIFIED_BOUND]
    G, N = instance
    rules = certify_sehgal(G, N).rules
    first_split = next((k for k, r in enumerate(rules) if r in (MAIN, ONE_PRIME, SIMPLIFIED_BOUND)), len(rules))
    head = rules[:first_split]
    assert head == sorted(head, key=order.index)


def test_report_json():
    G, N = corpus_instance("Dih9")
    data = json.loads(json.dumps(certify_sehgal(G, N).to_json()))
    assert data["verdict"] == LOCAL_SEPARATION
    assert {c["rule"] for c in data["certificates"]} >= {MAIN, ONE_PRIME}
    main = next(c for c in data["certificates"] if c["rule"] == MAIN)
    assert set(main["witnesses"]) >= {"pi", "A", "B", "n_A", "max_index", "a", "b"}


def test_main_witness_pair_recheck():
    G, N = corpus_instance("Dih9")
    (split,) = splits(N)
    idx, a, b = centralizer_index_max(G, N, split)
    assert G.centralizer_order(b) // G.centralizer_order(G.mul(a, b)) == idx


@pytest.mark.parametrize("key", CORPUS)
def test_centralizer_scans_agree(key):
    G, N = corpus_instance(key)
    for split in splits(N):
        # raises if the pair scan and the class scan disagree
        centralizer_index_max(G, N, split)


@pytest.mark.parametrize("key", CORPUS)
def test_certificate_implies_positive(key):
    G, N = corpus_instance(key)
    if certify_sehgal(G, N).rule != NONE:
        assert combine_tags([o.tag for o in solve(G, N)]) == SEHGAL_POSITIVE


# ---- certify_zc -------------------------------------------------------------------------------


def test_zc1_d24():
    rep = certify_zc(builders.dihedral(12))
    c = rep.find(ZC1)
    assert c.witnesses["N"] == "C12" and c.witnesses["index"] == 2


def test_zc1_sl23():
    c = certify_zc(builders.sl2_3()).find(ZC1)
    assert c.witnesses["N_order"] == 8 and c.witnesses["N"] == "Q8" and c.witnesses["index"] == 3


def test_zc2_gen_dihedral_c5sq_c3():
    rep = certify_zc(builders.gen_dihedral([5, 5, 3]))
    c = rep.find(ZC2)
    assert c is not None and c.witnesses["p"] == 5 and c.witnesses["index"] == 2


def test_zc_none_s4():
    assert certify_zc(builders.symmetric(4)).rule == NONE


@pytest.mark.parametrize("n", range(1, 51))
def test_zc1_all_dihedral(n):
    assert ZC1 in certify_zc(builders.dihedral(n))


def _is_power_of(o, p):
    while o % p == 0:
        o //= p
    return o == 1


def _all_sylows_normal(G):
    # a Sylow p-subgroup is normal iff it contains every p-element
    orders = G.element_orders.tolist()
    return all(sum(1 for o in orders if _is_power_of(o, p)) == p ** e for p, e in factorint(G.order).items())


@pytest.mark.parametrize("G", [builders.dihedral(8), builders.dihedral(6), builders.quaternion(), builders.sl2_3(),
                               builders.symmetric(4), builders.abelian([6, 2]), builders.gen_dihedral([3, 3]),
                               builders.direct_product([builders.quaternion(), builders.cyclic(3)]),
                               builders.alternating(4), builders.cyclic(1)], ids=lambda G: G.name or str(G.order))
def test_weiss_iff_sylows_normal(G):
    assert (WEISS_NILPOTENT in certify_zc(G)) == _all_sylows_normal(G)
