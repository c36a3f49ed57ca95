"""Finite permutation groups by full element enumeration.

Groups are small (an order cap of 20000 by default) and every derived object
is computed by brute force over the element list: multiplication table,
conjugacy classes, centralizers, element orders.  Elements are referred to by
their index in the lexicographically sorted element list; index 0 is always
the identity.

Products apply the left factor first, ``(a * b)[x] = b[a[x]]``, and
conjugation is ``x^g = g^-1 x g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from . import _kernels
from .errors import InvalidPermutation, NotAbelian, NotNilpotent, OrderCapExceeded

DEFAULT_ORDER_CAP = 20000

Permutation = tuple


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n)) if n > 1 else []


def check_permutation(images: Sequence[int], degree: int) -> tuple[int, ...]:
    images = tuple(int(x) for x in images)
    if len(images) != degree or sorted(images) != list(range(degree)):
        raise InvalidPermutation(f"{list(images)} is not a permutation of 0..{degree - 1}")
    return images


def compose(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """``a * b``: apply ``a`` first, then ``b``."""
    return tuple(b[x] for x in a)


def cycles_to_perm(degree: int, cycles: Iterable[Sequence[int]]) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            img[x] = cyc[(k + 1) % len(cyc)]
    return check_permutation(img, degree)


@dataclass(frozen=True)
class ConjClass:
    rep: int
    members: tuple[int, ...]
    centralizer_order: int
    element_order: int

    @property
    def size(self) -> int:
        return len(self.members)


class FiniteGroup:
    """A permutation group with its full, canonically ordered element list."""

    def __init__(self, degree: int, generators: Sequence[Sequence[int]] = (),
                 order_cap: int = DEFAULT_ORDER_CAP, name: str | None = None):
        self.degree = int(degree)
        self.generators = tuple(check_permutation(g, self.degree) for g in generators)
        self.name = name
        self.named_subgroups: dict[str, list[tuple[int, ...]]] = {}
        identity = tuple(range(self.degree))
        seen = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for a in frontier:
                for s in self.generators:
                    c = compose(a, s)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                        if len(seen) > order_cap:
                            raise OrderCapExceeded(
                                f"group closure exceeds order cap {order_cap}")
            frontier = nxt
        elems = sorted(seen)
        self.elements = np.array(elems, dtype=np.int64).reshape(len(elems), self.degree)
        self.order = len(elems)
        self._index = {e: i for i, e in enumerate(elems)}

    def __repr__(self) -> str:
        label = self.name or f"degree {self.degree}"
        return f"<FiniteGroup {label}, order {self.order}>"

    # -- elements ---------------------------------------------------------

    @cached_property
    def generators_idx(self) -> list[int]:
        return [self.index_of(g) for g in self.generators]

    def perm(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.elements[i])

    def index_of(self, perm: Sequence[int]) -> int:
        try:
            return self._index[tuple(int(x) for x in perm)]
        except KeyError:
            raise InvalidPermutation(f"{list(perm)} is not an element of the group") from None

    @cached_property
    def table(self) -> np.ndarray:
        return _kernels.mul_table(self.elements)

    @cached_property
    def inverse(self) -> np.ndarray:
        return _kernels.inverses(self.table)

    @cached_property
    def element_orders(self) -> np.ndarray:
        return _kernels.element_orders(self.table)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders[a])
        result, base = 0, a
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def conj(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return int(self.table[self.table[self.inverse[g], x], g])

    def order_of(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*(int(o) for o in set(self.element_orders.tolist())))

    @cached_property
    def primes(self) -> list[int]:
        return prime_divisors(self.order)

    # -- classes ----------------------------------------------------------

    @cached_property
    def _raw_class_ids(self) -> np.ndarray:
        return _kernels.class_ids(self.table, self.inverse)

    @cached_property
    def classes(self) -> list[ConjClass]:
        ids = self._raw_class_ids
        buckets: dict[int, list[int]] = {}
        for x, c in enumerate(ids.tolist()):
            buckets.setdefault(c, []).append(x)
        out = [ConjClass(rep=m[0], members=tuple(m), centralizer_order=self.order // len(m),
                         element_order=self.order_of(m[0]))
               for m in buckets.values()]
        out.sort(key=lambda c: (c.element_order, c.rep))
        return out

    @cached_property
    def class_of(self) -> np.ndarray:
        """Element index -> position in :attr:`classes`."""
        out = np.empty(self.order, dtype=np.int64)
        for k, c in enumerate(self.classes):
            out[list(c.members)] = k
        return out

    def centralizer_order(self, x: int) -> int:
        return self.classes[int(self.class_of[x])].centralizer_order

    def conjugates(self, x: int) -> np.ndarray:
        return _kernels.conjugates(self.table, self.inverse, x)

    # -- subgroups --------------------------------------------------------

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, np.array([0]))

    def closure(self, gens: Iterable[int]) -> "Subgroup":
        gens = sorted({int(g) for g in gens} - {0})
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        while frontier.size and gens:
            prods = self.table[np.ix_(frontier, gens)].ravel()
            new = np.unique(prods[~mask[prods]])
            mask[new] = True
            frontier = new
        return Subgroup(self, np.flatnonzero(mask))

    def subgroup(self, perms: Iterable[Sequence[int]]) -> "Subgroup":
        return self.closure(self.index_of(p) for p in perms)

    def normal_closure(self, gens: Iterable[int]) -> "Subgroup":
        conj = set()
        for g in gens:
            conj.update(self.conjugates(int(g)).tolist())
        return self.closure(conj)


class Subgroup:
    """A subgroup of a :class:`FiniteGroup` as a sorted element-index set."""

    def __init__(self, group: FiniteGroup, members):
        self.group = group
        self.members = np.unique(np.asarray(members, dtype=np.int64))
        self.mask = np.zeros(group.order, dtype=bool)
        self.mask[self.members] = True

    @property
    def order(self) -> int:
        return int(self.members.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __iter__(self):
        return iter(self.members.tolist())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.group is self.group
                and np.array_equal(self.members, other.members))

    def __hash__(self) -> int:
        return hash(self.members.tobytes())

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[self.members].all())

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order}>"

    @cached_property
    def key(self) -> tuple[int, ...]:
        return tuple(self.members.tolist())

    @cached_property
    def primes(self) -> list[int]:
        return prime_divisors(self.order)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*set(self.group.element_orders[self.members].tolist()))

    @cached_property
    def generators(self) -> list[int]:
        """A small generating set, greedily picked by descending element order."""
        G = self.group
        ords = G.element_orders[self.members]
        cand = self.members[np.lexsort((self.members, -ords))]
        gens: list[int] = []
        span = G.trivial
        for x in cand.tolist():
            if span.order == self.order:
                break
            if x not in span:
                gens.append(x)
                span = G.closure(gens)
        return gens

    def is_normal(self, in_group: "Subgroup | None" = None) -> bool:
        G = self.group
        conjugators = G.generators_idx if in_group is None else in_group.generators
        for g in conjugators:
            if not self.mask[G.table[G.table[G.inverse[g], self.members], g]].all():
                return False
        return True

    def is_abelian(self) -> bool:
        T = self.group.table
        gens = self.generators
        sub = T[np.ix_(gens, gens)]
        return bool((sub == sub.T).all())

    def is_cyclic(self) -> bool:
        return bool((self.group.element_orders[self.members] == self.order).any())

    def elements_of_order_dividing(self, primes: Iterable[int]) -> np.ndarray:
        """Members whose order is a product of the given primes."""
        primes = set(primes)
        ords = self.group.element_orders[self.members]
        keep = np.array([set(prime_divisors(int(o))) <= primes for o in ords], dtype=bool)
        return self.members[keep]

    def sylow(self, p: int) -> "Subgroup":
        """The unique Sylow subgroup, for nilpotent groups."""
        return hall_subgroup(self, [p])

    @cached_property
    def derived(self) -> "Subgroup":
        G = self.group
        gens = self.generators
        comms = set()
        for a in gens:
            for b in gens:
                # a^-1 b^-1 a b
                comms.add(int(G.table[G.table[G.inverse[a], G.inverse[b]], G.table[a, b]]))
        return normal_closure_in(self, comms)

    def classes(self) -> list[np.ndarray]:
        """Conjugacy classes of the subgroup under its own conjugation."""
        return orbits_under(self, self)

    def centralizer_in(self, elems: Iterable[int]) -> "Subgroup":
        return centralizer(self.group, elems, within=self)


def normal_closure_in(H: Subgroup, elems: Iterable[int]) -> Subgroup:
    G = H.group
    conj = set()
    for x in elems:
        conj.update(G.table[G.table[G.inverse[H.members], int(x)], H.members].tolist())
    return G.closure(conj)


def orbits_under(acting: Subgroup, on: Subgroup) -> list[np.ndarray]:
    """Orbits of ``acting`` by conjugation on the (normalized) set ``on``."""
    G = acting.group
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for x in on.members.tolist():
        if seen[x]:
            continue
        orb = np.unique(G.table[G.table[G.inverse[acting.members], x], acting.members])
        seen[orb] = True
        out.append(orb)
    return out


# ---------------------------------------------------------------------------
# operations


def generate(degree: int, generators: Sequence[Sequence[int]] = (),
             order_cap: int = DEFAULT_ORDER_CAP, name: str | None = None) -> FiniteGroup:
    return FiniteGroup(degree, generators, order_cap=order_cap, name=name)


def conjugacy_classes(G: FiniteGroup) -> list[ConjClass]:
    return G.classes


def centralizer(G: FiniteGroup, elems: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    cand = (within or G.whole).members
    keep = np.ones(cand.size, dtype=bool)
    for s in elems:
        s = int(s)
        keep &= G.table[cand, s] == G.table[s, cand]
    return Subgroup(G, cand[keep])


def p_parts(G: FiniteGroup, g: int, p: int) -> tuple[int, int]:
    """Split ``g`` into commuting factors of ``p``-power and ``p'`` order."""
    m = G.order_of(g)
    pv = 1
    while m % (pv * p) == 0:
        pv *= p
    mp = m // pv
    # a = 1 mod p^v, a = 0 mod m'
    a = (mp * pow(mp, -1, pv)) % m if pv > 1 else 0
    return G.power(g, a), G.power(g, (1 - a) % m)


def pi_part(G: FiniteGroup, g: int, primes: Iterable[int]) -> int:
    primes = set(primes)
    m = G.order_of(g)
    mpi = 1
    for p, e in factorint(m).items():
        if p in primes:
            mpi *= p**e
    rest = m // mpi
    if mpi == 1:
        return 0
    a = (rest * pow(rest, -1, mpi)) % m
    return G.power(g, a)


def is_nilpotent(H: Subgroup) -> bool:
    """Nilpotency test: the ``p``-elements form a subgroup for every ``p``."""
    G = H.group
    for p in H.primes:
        pel = H.elements_of_order_dividing([p])
        mask = np.zeros(G.order, dtype=bool)
        mask[pel] = True
        if not mask[G.table[np.ix_(pel, pel)]].all():
            return False
    return True


def hall_subgroup(N: Subgroup, primes: Iterable[int]) -> Subgroup:
    if not is_nilpotent(N):
        raise NotNilpotent("subgroup is not nilpotent")
    members = N.elements_of_order_dividing(primes)
    S = Subgroup(N.group, members)
    T = N.group.table
    if not S.mask[T[np.ix_(S.members, S.members)]].all():
        raise NotNilpotent("pi-elements are not closed under products")
    return S


@dataclass(frozen=True)
class LocalClass:
    member_classes: tuple[int, ...]

    def elements(self, G: FiniteGroup) -> list[int]:
        return sorted(x for c in self.member_classes for x in G.classes[c].members)


def local_signature(G: FiniteGroup, x: int) -> tuple[int, ...]:
    """G-class of each prime part of ``x``, one entry per prime of ``|G|``."""
    return tuple(int(G.class_of[p_parts(G, x, p)[0]]) for p in G.primes)


def local_classes(G: FiniteGroup, N: Subgroup) -> list[LocalClass]:
    """Partition the G-classes inside ``N`` by local conjugacy."""
    groups: dict[tuple, list[int]] = {}
    for k, c in enumerate(G.classes):
        if c.rep in N:
            groups.setdefault(local_signature(G, c.rep), []).append(k)
    out = [LocalClass(tuple(v)) for v in groups.values()]
    out.sort(key=lambda lc: lc.member_classes)
    return out


def cyclic_quotient_kernels(H: Subgroup) -> list[Subgroup]:
    """All normal ``K`` of ``H`` with ``H/K`` cyclic.

    Kernels of homomorphisms ``H -> Z/e`` (``e`` the exponent), found by
    extending generator images one generator at a time and pruning images
    that do not extend consistently.
    """
    G = H.group
    gens = H.generators
    e = H.exponent
    found: dict[tuple, Subgroup] = {}
    if not gens:
        return [H]

    def extend(level: int, images: list[int]):
        if level == len(gens):
            vals = _kernels.propagate_hom(G.table, gens, images, e)
            K = Subgroup(G, H.members[vals[H.members] == 0])
            found.setdefault(K.key, K)
            return
        for v in range(e):
            # images of a generator must have order dividing its own order
            if (v * G.order_of(gens[level])) % e:
                continue
            trial = images + [v]
            if _kernels.propagate_hom(G.table, gens[:level + 1], trial, e) is not None:
                extend(level + 1, trial)

    extend(0, [])
    return sorted(found.values(), key=lambda K: (-K.order, K.key))


def abelian_shape(H: Subgroup):
    """Primary decomposition of an abelian subgroup, from element-order counts."""
    from .abelian import AbelianShape

    if not H.is_abelian():
        raise NotAbelian("subgroup is not abelian")
    ords = H.group.element_orders[H.members]
    parts = {}
    for p in H.primes:
        # |{x : x^(p^i) = 1}| = p^(sum_j min(i, j) l_j)
        logs = [0]
        i = 1
        while True:
            cnt = int(np.count_nonzero(np.isin(ords, [p**k for k in range(i + 1)])))
            logs.append(round(math.log(cnt, p)))
            if logs[-1] == logs[-2]:
                break
            i += 1
        # d_i = logs[i] - logs[i-1] = L_i (number of factors of order >= p^i)
        L = [logs[i] - logs[i - 1] for i in range(1, len(logs))]
        L = [x for x in L if x > 0]
        l = [L[i] - (L[i + 1] if i + 1 < len(L) else 0) for i in range(len(L))]
        parts[p] = tuple(l)
    return AbelianShape(parts)


def direct_factors_ok(N: Subgroup) -> dict[int, Subgroup]:
    """Sylow subgroups of a nilpotent group, keyed by prime."""
    return {p: hall_subgroup(N, [p]) for p in N.primes}


def noncyclic_sylow_primes(N: Subgroup) -> list[int]:
    return [p for p, P in direct_factors_ok(N).items() if not P.is_cyclic()]


def normal_subgroups(G: FiniteGroup, cap: int = 5000) -> list[Subgroup]:
    """All normal subgroups, as joins of normal closures of classes."""
    closures = [G.normal_closure([c.rep]) for c in G.classes]
    seen = {G.trivial.key: G.trivial}
    frontier = [G.trivial]
    while frontier:
        nxt = []
        for S in frontier:
            for C in closures:
                if C <= S:
                    continue
                J = G.closure(list(S.generators) + list(C.generators))
                if J.key not in seen:
                    seen[J.key] = J
                    nxt.append(J)
                    if len(seen) > cap:
                        raise OrderCapExceeded("too many normal subgroups")
        frontier = nxt
    return sorted(seen.values(), key=lambda S: (S.order, S.key))


def fitting_subgroup(G: FiniteGroup) -> Subgroup:
    """Largest normal nilpotent subgroup: the product of the ``O_p(G)``."""
    gens = []
    for c in G.classes:
        o = c.element_order
        if o == 1 or len(prime_divisors(o)) != 1:
            continue
        ncl = G.normal_closure([c.rep])
        if len(ncl.primes) == 1:
            gens.extend(ncl.generators)
    return G.closure(gens)


def subgroups_bruteforce(G: FiniteGroup, within: Subgroup | None = None) -> list[Subgroup]:
    """Every subgroup of ``within``, by repeated one-element joins.  Tiny groups only."""
    H = within or G.whole
    seen = {G.trivial.key: G.trivial}
    frontier = [G.trivial]
    while frontier:
        nxt = []
        for S in frontier:
            for x in H.members.tolist():
                if x in S:
                    continue
                J = G.closure(list(S.generators) + [x])
                if J.key not in seen:
                    seen[J.key] = J
                    nxt.append(J)
        frontier = nxt
    return list(seen.values())


def is_cyclic_quotient(H: Subgroup, K: Subgroup) -> bool:
    """Whether ``H/K`` is cyclic, for ``K`` normal in ``H``: some coset has order ``[H:K]``."""
    G = H.group
    idx = H.order // K.order
    for x in H.members.tolist():
        y, k = x, 1
        while y not in K:
            y = G.mul(y, x)
            k += 1
        if k == idx:
            return True
    return False

