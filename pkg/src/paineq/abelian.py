"""Cocyclic-subgroup calculus on finite abelian groups.

An abelian group is described by an :class:`AbelianShape`: for each prime
``p`` the multiplicities ``l_1, ..., l_e`` of the cyclic factors
``C_p, C_{p^2}, ..., C_{p^e}``.  Elements are exponent vectors over the
concatenated factor list (primes ascending, factor orders ascending inside a
prime), and are also addressed by their mixed-radix index.

A subgroup ``K`` is cocyclic when ``A/K`` is cyclic.  Every quantity here is
exact; rationals are :class:`fractions.Fraction` and the only non-rational
value is ``INFINITY`` for ``n_A`` of a cyclic group.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from .errors import HypothesisViolated, MismatchError, ParseError

INFINITY = math.inf


@dataclass(frozen=True)
class AbelianShape:
    """Primary decomposition ``{p: (l_1, ..., l_e)}`` stored as a sorted tuple."""

    parts: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __init__(self, parts=()):
        if isinstance(parts, dict):
            parts = parts.items()
        clean = []
        for p, ls in parts:
            ls = tuple(int(x) for x in ls)
            while ls and ls[-1] == 0:
                ls = ls[:-1]
            if any(x < 0 for x in ls):
                raise ValueError("multiplicities must be non-negative")
            if ls:
                clean.append((int(p), ls))
        object.__setattr__(self, "parts", tuple(sorted(clean)))

    @classmethod
    def from_invariants(cls, orders: Iterable[int]) -> "AbelianShape":
        """Shape of ``C_{n_1} x ... x C_{n_r}`` for arbitrary positive ``n_j``."""
        mult: dict[int, dict[int, int]] = {}
        for n in orders:
            n = int(n)
            if n < 1:
                raise ValueError(f"cyclic factor order must be positive, got {n}")
            for p, e in factorint(n).items():
                mult.setdefault(p, {})
                mult[p][e] = mult[p].get(e, 0) + 1
        return cls({p: [d.get(i, 0) for i in range(1, max(d) + 1)] for p, d in mult.items()})

    @classmethod
    def parse(cls, text: str) -> "AbelianShape":
        """Parse ``"4,2"`` or ``"2^2,2,3"`` style invariant lists; empty text is the trivial group."""
        text = text.strip()
        if not text or text == "1":
            return cls()
        orders = []
        for tok in text.split(","):
            tok = tok.strip()
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
            if not m:
                raise ParseError(f"bad cyclic factor {tok!r}")
            orders.append(int(m.group(1)) ** int(m.group(2) or 1))
        return cls.from_invariants(orders)

    # -- derived data ------------------------------------------------------

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.parts]

    def multiplicities(self, p: int) -> tuple[int, ...]:
        return dict(self.parts).get(p, ())

    def e(self, p: int) -> int:
        return len(self.multiplicities(p))

    def L(self, p: int, i: int) -> int:
        """Number of cyclic ``p``-factors of order at least ``p^i``."""
        return sum(self.multiplicities(p)[max(i, 1) - 1:])

    def k(self, p: int) -> int:
        return self.L(p, 1)

    @property
    def order(self) -> int:
        return math.prod(p ** sum(l * (i + 1) for i, l in enumerate(ls)) for p, ls in self.parts)

    @property
    def exponent(self) -> int:
        return math.prod(p ** len(ls) for p, ls in self.parts)

    def factor_orders(self, p: int | None = None) -> list[int]:
        out = []
        for q, ls in self.parts:
            if p is None or q == p:
                for i, l in enumerate(ls):
                    out.extend([q ** (i + 1)] * l)
        return out

    def component(self, p: int) -> "AbelianShape":
        return AbelianShape({p: self.multiplicities(p)})

    def is_cyclic(self) -> bool:
        return all(self.k(p) == 1 for p in self.primes)

    def noncyclic_primes(self) -> list[int]:
        return [p for p in self.primes if self.k(p) > 1]

    def invariant_factors(self) -> list[int]:
        """Invariant factors ``d_1 | d_2 | ...`` (empty for the trivial group)."""
        per_prime = [sorted(self.factor_orders(p), reverse=True) for p in self.primes]
        width = max((len(x) for x in per_prime), default=0)
        out = []
        for j in range(width):
            out.append(math.prod(x[j] for x in per_prime if j < len(x)))
        return sorted(out)

    @property
    def name(self) -> str:
        inv = self.invariant_factors()
        return "x".join(f"C{d}" for d in inv) if inv else "C1"

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------------------
# concrete realization


class PrimaryRealization:
    """All elements and cocyclic subgroups of a ``p``-group ``C_{n_1} x ... x C_{n_r}``."""

    def __init__(self, p: int, orders: Sequence[int]):
        self.p = p
        self.orders = tuple(orders)
        self.size = math.prod(self.orders)
        self.exponent = max(self.orders, default=1)
        grids = np.indices(self.orders, dtype=np.int64) if self.orders else np.zeros((0,), dtype=np.int64)
        self.vectors = grids.reshape(len(self.orders), -1).T if self.orders else np.zeros((1, 0), np.int64)

    def index(self, vec: Sequence[int]) -> int:
        if not self.orders:
            return 0
        return int(np.ravel_multi_index(tuple(int(v) % n for v, n in zip(vec, self.orders)), self.orders))

    @cached_property
    def difference(self) -> np.ndarray:
        """``difference[x, a]`` is the index of ``x - a``."""
        if not self.orders:
            return np.zeros((1, 1), dtype=np.int64)
        d = (self.vectors[:, None, :] - self.vectors[None, :, :]) % np.array(self.orders)
        return np.ravel_multi_index(tuple(np.moveaxis(d, -1, 0)), self.orders)

    @cached_property
    def cocyclic(self) -> list[np.ndarray]:
        """Kernels of all characters ``A -> Z/p^e``, as boolean masks, deduplicated.

        Sorted by descending order, then by mask bytes; ``A`` itself is first.
        """
        if not self.orders:
            return [np.ones(1, dtype=bool)]
        E = self.exponent
        scale = np.array([E // n for n in self.orders], dtype=np.int64)
        seen = {}
        for c in self.vectors:
            mask = (self.vectors @ (c * scale)) % E == 0
            seen.setdefault(mask.tobytes(), mask)
        return sorted(seen.values(), key=lambda m: (-int(m.sum()), m.tobytes()))

    @cached_property
    def sizes(self) -> list[int]:
        return [int(m.sum()) for m in self.cocyclic]

    @cached_property
    def below_by_p(self) -> list[int]:
        """For each cocyclic ``K``, the number of cocyclic ``L < K`` with ``[K:L] = p``."""
        masks = np.array(self.cocyclic)
        sizes = np.array(self.sizes)
        out = []
        for K, sK in zip(masks, sizes):
            contained = ~(masks & ~K).any(axis=1)
            out.append(int(np.count_nonzero(contained & (sizes * self.p == sK))))
        return out

    @cached_property
    def alphas(self) -> list[int]:
        return [1 - c for c in self.below_by_p]

    def is_minimal(self, j: int) -> bool:
        return self.below_by_p[j] == 0

    @cached_property
    def cyclic(self) -> list[np.ndarray]:
        """All cyclic subgroups, as boolean masks (independent brute force)."""
        seen = {}
        for v in self.vectors:
            mult = (np.arange(self.exponent)[:, None] * v[None, :]) % np.array(self.orders or [1])
            idx = [self.index(row) for row in mult] if self.orders else [0]
            mask = np.zeros(self.size, dtype=bool)
            mask[idx] = True
            seen.setdefault(mask.tobytes(), mask)
        return list(seen.values())


@dataclass(frozen=True)
class CocyclicSubgroup:
    """A cocyclic subgroup ``K = prod_p K_p``, addressed by its component indices."""

    components: tuple[int, ...]
    order: int
    index: int
    alpha: int
    alpha_parts: tuple[int, ...] = field(compare=False)


class AbelianRealization:
    """Concrete group for a shape, with elements as mixed-radix indices over its primes."""

    def __init__(self, shape: AbelianShape):
        self.shape = shape
        self.primes = shape.primes
        self.parts = [PrimaryRealization(p, shape.factor_orders(p)) for p in self.primes]
        self.order = shape.order
        self.dims = tuple(P.size for P in self.parts)

    def split(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Per-prime component indices of an exponent vector over all factors."""
        vec = list(vec)
        if len(vec) != len(self.shape.factor_orders()):
            raise ValueError("exponent vector length does not match the number of factors")
        out, pos = [], 0
        for P in self.parts:
            r = len(P.orders)
            out.append(P.index(vec[pos:pos + r]))
            pos += r
        return tuple(out)

    def element_index(self, vec: Sequence[int]) -> int:
        comps = self.split(vec)
        return int(np.ravel_multi_index(comps, self.dims)) if self.dims else 0

    def element_vector(self, idx: int) -> tuple[int, ...]:
        comps = np.unravel_index(idx, self.dims) if self.dims else ()
        out = []
        for P, c in zip(self.parts, comps):
            out.extend(int(x) for x in P.vectors[int(c)])
        return tuple(out)

    @cached_property
    def cocyclic(self) -> list[CocyclicSubgroup]:
        out = []
        ranges = [range(len(P.cocyclic)) for P in self.parts]
        for comps in itertools.product(*ranges):
            order = math.prod(P.sizes[j] for P, j in zip(self.parts, comps))
            ap = tuple(P.alphas[j] for P, j in zip(self.parts, comps))
            out.append(CocyclicSubgroup(comps, order, self.order // order, math.prod(ap), ap))
        out.sort(key=lambda K: (K.index, K.components))
        return out

    def mask(self, K: CocyclicSubgroup, shift: Sequence[int] | None = None) -> np.ndarray:
        """Indicator of ``K`` (or of the coset ``aK`` given per-prime indices of ``a``) over ``A``."""
        m = np.ones((), dtype=bool)
        for t, (P, j) in enumerate(zip(self.parts, K.components)):
            comp = P.cocyclic[j]
            if shift is not None:
                comp = comp[P.difference[:, shift[t]]]
            m = np.multiply.outer(m, comp)
        return m.reshape(-1)

    def contains(self, K: CocyclicSubgroup, L: CocyclicSubgroup) -> bool:
        """Whether ``L <= K``."""
        for P, jk, jl in zip(self.parts, K.components, L.components):
            if (P.cocyclic[jl] & ~P.cocyclic[jk]).any():
                return False
        return True

    def is_whole(self, K: CocyclicSubgroup) -> bool:
        return K.index == 1


@lru_cache(maxsize=256)
def realize(shape: AbelianShape) -> AbelianRealization:
    return AbelianRealization(shape)


# ---------------------------------------------------------------------------
# operations


def enumerate_cocyclic(A: AbelianShape) -> list[CocyclicSubgroup]:
    """All cocyclic subgroups with their ``alpha`` coefficients, sorted by index."""
    return realize(A).cocyclic


def cocyclic_counts(A: AbelianShape, p: int, i: int) -> tuple[int, int]:
    """Closed-form counts of cocyclic subgroups of ``A_p`` of index ``p^i``.

    Returns ``(all, non_minimal)``.  Index ``p^0`` is ``A_p`` itself, which is
    non-minimal exactly when ``A_p`` is non-trivial.
    """
    if p not in A.primes:
        raise ValueError(f"{p} does not divide |A|")
    ls = A.multiplicities(p)
    if i == 0:
        return 1, 1
    L_i, L_next = A.L(p, i), A.L(p, i + 1)
    j_lt = sum(l * (j + 1) for j, l in enumerate(ls[: i - 1]))
    j_lt_minus = sum(l * j for j, l in enumerate(ls[: i - 1]))
    total = (p**L_i - 1) // (p - 1) * p ** ((L_i - 1) * (i - 1) + j_lt) if L_i else 0
    nonmin = (p**L_next - 1) // (p - 1) * p ** ((L_i - 1) * (i - 1) + j_lt_minus) if L_next else 0
    return total, nonmin


def cocyclic_counts_bruteforce(A: AbelianShape, p: int, i: int) -> tuple[int, int]:
    P = realize(A.component(p)).parts[0]
    idx = P.size // p**i
    hits = [j for j, s in enumerate(P.sizes) if s == idx]
    return len(hits), sum(1 for j in hits if not P.is_minimal(j))


def cocyclic_count_by_order(A: AbelianShape, p: int, i: int) -> int:
    P = realize(A.component(p)).parts[0]
    return sum(1 for s in P.sizes if s == p**i)


def cyclic_count_by_order(A: AbelianShape, p: int, i: int) -> int:
    P = realize(A.component(p)).parts[0]
    return sum(1 for m in P.cyclic if int(m.sum()) == p**i)


def cyclic_count_by_index(A: AbelianShape, p: int, i: int) -> int:
    P = realize(A.component(p)).parts[0]
    return sum(1 for m in P.cyclic if int(m.sum()) * p**i == P.size)


def alpha_A(A: AbelianShape) -> int:
    """Closed form of ``alpha_A``."""
    out = Fraction(1)
    for p in A.primes:
        out *= Fraction(p * (1 - p ** (A.k(p) - 1)), p - 1)
    assert out.denominator == 1
    return int(out)


@dataclass(frozen=True)
class MValues:
    m_plus: int
    m_minus: int
    m_A: int


def m_values_direct(A: AbelianShape) -> MValues:
    plus = minus = 0
    whole = None
    for K in enumerate_cocyclic(A):
        if K.alpha > 0:
            plus += K.alpha * K.index
        elif K.alpha < 0:
            minus -= K.alpha * K.index
        if K.index == 1:
            whole = K
    mA = minus if whole.alpha < 0 else minus - whole.alpha
    return MValues(plus, minus, mA)


def _subset_sums(A: AbelianShape) -> tuple[Fraction, Fraction]:
    primes = A.primes
    prefactor = Fraction(A.order, math.prod((p - 1) * p ** (A.k(p) - 1) for p in primes))
    even = odd = 0
    for mask in itertools.product((0, 1), repeat=len(primes)):
        term = math.prod(p ** (A.k(p) - d) - 1 for p, d in zip(primes, mask))
        if sum(mask) % 2:
            odd += term
        else:
            even += term
    return prefactor * even, prefactor * odd


def m_values_closed(A: AbelianShape) -> MValues:
    plus, minus = _subset_sums(A)
    if plus.denominator != 1 or minus.denominator != 1:
        raise MismatchError("closed-form m values are not integers")
    plus, minus = int(plus), int(minus)
    a = alpha_A(A)
    return MValues(plus, minus, minus if a < 0 else minus - a)


def m_values(A: AbelianShape) -> MValues:
    """``(m_plus, m_minus, m_A)``, computed twice and cross-checked."""
    direct = m_values_direct(A)
    closed = m_values_closed(A)
    if direct != closed:
        raise MismatchError(f"m values for {A}: direct {direct} != closed form {closed}")
    return direct


@dataclass(frozen=True)
class NValues:
    alpha_A: int
    n_minus: Fraction | float
    n_A: Fraction | float


def n_values(A: AbelianShape) -> NValues:
    a = alpha_A(A)
    if A.is_cyclic():
        return NValues(a, INFINITY, INFINITY)
    mv = m_values(A)
    order = A.order
    n_minus = Fraction(order, mv.m_minus)
    if len(A.primes) % 2:
        n = n_minus
    else:
        n = order * n_minus / (order - n_minus * a)
    if n * mv.m_A != order:
        raise MismatchError(f"|A| != n_A * m_A for {A}")
    return NValues(a, n_minus, n)


def f_values(A: AbelianShape, a: Sequence[int]) -> np.ndarray:
    """``f_a`` evaluated at every element of ``A`` from its defining sum.

    ``a`` is an exponent vector; the result is indexed by element index.
    """
    R = realize(A)
    shift = R.split(a)
    out = np.zeros(R.order, dtype=np.int64)
    for K in R.cocyclic:
        w = K.alpha * K.index
        whole = K.index == 1
        if K.alpha > 0 and not whole:
            out = out + w * R.mask(K, shift).astype(np.int64)
        elif K.alpha < 0 or whole:
            out = out - w * (~R.mask(K, shift)).astype(np.int64)
    return out


def f_closed(A: AbelianShape, a: Sequence[int], x: Sequence[int]) -> int:
    mA = m_values(A).m_A
    R = realize(A)
    return A.order + mA if R.split(a) == R.split(x) else mA


def f_closed_values(A: AbelianShape, a: Sequence[int]) -> np.ndarray:
    """Closed form of ``f_a`` at every element: ``m_A`` off ``a`` and ``|A| + m_A`` at ``a``."""
    R = realize(A)
    out = np.full(R.order, m_values(A).m_A, dtype=np.int64)
    out[R.element_index(a)] += A.order
    return out


def f_eval(A: AbelianShape, a: Sequence[int], x: Sequence[int]) -> int:
    """``f_a(x)`` from the definition, checked against the closed form."""
    R = realize(A)
    value = int(f_values(A, a)[R.element_index(x)])
    expected = f_closed(A, a, x)
    if value != expected:
        raise MismatchError(f"f_a(x) for {A}: definition {value} != closed form {expected}")
    return value


def numerical_lemma_eval(x, k: int) -> tuple[Fraction, Fraction]:
    x = Fraction(x)
    if x <= 0 or k < 1:
        raise ValueError("need x > 0 and k >= 1")
    lhs = Fraction(0)
    for mask in itertools.product((0, 1), repeat=k):
        if sum(mask) % 2:
            lhs += math.prod((x + 2 * i + 1 for i in range(k) if not mask[i]), start=Fraction(1))
    rhs = k * math.prod((x + 2 * i for i in range(1, k)), start=Fraction(1))
    return lhs, rhs


def minimal_prime_bound_check(A: AbelianShape) -> tuple[Fraction, Fraction, bool]:
    """``(p0/k, n_A, p0/k <= n_A)`` for odd ``A`` whose Sylows are all 2-generated non-cyclic."""
    if A.order % 2 == 0:
        raise HypothesisViolated("A must have odd order")
    if not A.primes or any(A.k(p) != 2 for p in A.primes):
        raise HypothesisViolated("every Sylow subgroup must be a product of exactly two cyclic groups")
    k = len(A.noncyclic_primes())
    p0 = min(A.noncyclic_primes())
    n = n_values(A).n_A
    bound = Fraction(p0, k)
    return bound, n, bound <= n


def sum_alpha_below(A: AbelianShape, K: CocyclicSubgroup) -> int:
    R = realize(A)
    return sum(L.alpha for L in R.cocyclic if R.contains(K, L))
