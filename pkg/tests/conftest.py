from __future__ import annotations

import functools
import time

import pytest

from paineq import builders
from paineq.groups import FiniteGroup, Subgroup


def named(G: FiniteGroup, name: str) -> Subgroup:
    return G.subgroup(G.named_subgroups[name])


@functools.lru_cache(maxsize=None)
def corpus_instance(key: str) -> tuple[FiniteGroup, Subgroup]:
    """The (G, N) pairs used across suites, built once per session."""
    if key == "S3":
        G = builders.symmetric(3)
        return G, named(G, "alternating")
    if key == "S4":
        G = builders.symmetric(4)
        return G, named(G, "V4")
    if key == "D24":
        G = builders.dihedral(12)
        return G, named(G, "cyclic-part")
    if key == "SL23":
        G = builders.sl2_3()
        return G, named(G, "Q8")
    if key == "Dih9":
        G = builders.gen_dihedral([3, 3])
        return G, named(G, "abelian-part")
    if key == "Dih8":
        G = builders.gen_dihedral([4, 2])
        return G, named(G, "abelian-part")
    if key == "S3xC5":
        G = builders.direct_product([builders.symmetric(3), builders.cyclic(5)])
        return G, G.subgroup([(1, 2, 0, 3, 4, 5, 6, 7), (0, 1, 2, 4, 5, 6, 7, 3)])
    if key == "Q8xC3":
        G = builders.direct_product([builders.quaternion(), builders.cyclic(3)])
        return G, G.whole
    raise KeyError(key)


CORE = ("S3", "S4", "D24", "SL23")
CORPUS = CORE + ("Dih9", "Dih8", "S3xC5", "Q8xC3")


@pytest.fixture(params=CORE)
def core_instance(request):
    return corpus_instance(request.param)


@pytest.fixture(params=CORPUS)
def instance(request):
    return corpus_instance(request.param)


SESSION_START = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the runtime criterion measures the whole session, so it runs last
    last = [it for it in items if "criterion_12" in it.name]
    items[:] = [it for it in items if it not in last] + last
