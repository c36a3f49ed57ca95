"""Abelian shapes used by the lattice suites."""

from __future__ import annotations

import functools
import itertools

from sympy import factorint
from sympy.utilities.iterables import partitions

from paineq.abelian import AbelianShape


def _partitions(e: int) -> list[tuple[int, ...]]:
    """Partitions of ``e`` as multiplicity tuples ``(l_1, ..., l_max)``."""
    out = []
    for part in partitions(e):
        top = max(part)
        out.append(tuple(part.get(i, 0) for i in range(1, top + 1)))
    return sorted(out)


@functools.lru_cache(maxsize=None)
def abelian_up_to(n_max: int) -> tuple[AbelianShape, ...]:
    shapes = [AbelianShape()]
    for n in range(2, n_max + 1):
        fac = sorted(factorint(n).items())
        for choice in itertools.product(*[_partitions(e) for _, e in fac]):
            shapes.append(AbelianShape({p: ls for (p, _), ls in zip(fac, choice)}))
    return tuple(shapes)


EXTRA_INVARIANTS = ([2, 2], [3, 3], [5, 5], [7, 7], [4, 2], [9, 3], [25, 5], [49, 7], [3, 3, 5, 5],
                    [2, 2, 2], [4, 4])


@functools.lru_cache(maxsize=None)
def lattice_corpus() -> tuple[AbelianShape, ...]:
    """Every abelian group of order at most 200 plus the listed larger cases."""
    seen = {s: None for s in abelian_up_to(200)}
    for inv in EXTRA_INVARIANTS:
        seen.setdefault(AbelianShape.from_invariants(inv), None)
    return tuple(seen)


def primary_exponents(A: AbelianShape, p: int) -> range:
    return range(0, sum(i * l for i, l in enumerate(A.multiplicities(p), start=1)) + 1)
