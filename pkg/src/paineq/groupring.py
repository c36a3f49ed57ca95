"""Integral group ring arithmetic and character evaluators.

Group ring elements are sparse ``{element index: integer}`` maps.  A torsion
unit is modelled abstractly: ``U = <u>`` is cyclic of order ``m`` and never
materialised as a permutation group.  Class functions on ``U x G`` are tables
indexed by ``(i mod m, class)``, since the classes of ``U x G`` are exactly
``{u^i} x g^G``.  Only rational-valued class functions are represented; sums
over Galois orbits of linear characters of ``U`` are Ramanujan sums.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from sympy import mobius, totient

from .errors import InvalidTransversal, MismatchError, NonIntegralWarning, NotNormal
from .groups import FiniteGroup, Subgroup, orbits_under


class GroupRingElement:
    """Finite sum ``sum x_g g`` with integer coefficients, over a fixed group."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs: Mapping[int, int] | None = None):
        self.group = group
        self.coeffs = {int(g): int(c) for g, c in (coeffs or {}).items() if c}

    @classmethod
    def basis(cls, group: FiniteGroup, g: int, coeff: int = 1) -> "GroupRingElement":
        return cls(group, {g: coeff})

    @classmethod
    def one(cls, group: FiniteGroup) -> "GroupRingElement":
        return cls(group, {0: 1})

    @classmethod
    def from_json(cls, group: FiniteGroup, terms: Sequence[Mapping]) -> "GroupRingElement":
        out: dict[int, int] = {}
        for t in terms:
            g = group.index_of(t["perm"])
            out[g] = out.get(g, 0) + int(t["coeff"])
        return cls(group, out)

    def to_json(self) -> list[dict]:
        return [{"perm": list(self.group.perm(g)), "coeff": c} for g, c in sorted(self.coeffs.items())]

    def __repr__(self) -> str:
        return f"GroupRingElement({dict(sorted(self.coeffs.items()))})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, g: int) -> int:
        return self.coeffs.get(int(g), 0)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return GroupRingElement(self.group, out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupRingElement":
        return GroupRingElement(self.group, {g: k * c for g, c in self.coeffs.items()})

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        T = self.group.table
        out: dict[int, int] = {}
        for a, ca in self.coeffs.items():
            row = T[a]
            for b, cb in other.coeffs.items():
                g = int(row[b])
                out[g] = out.get(g, 0) + ca * cb
        return GroupRingElement(self.group, out)

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def support(self) -> list[int]:
        return sorted(self.coeffs)


class PowerCache:
    """Memoized powers ``v^0, v^1, ...`` of a group ring element."""

    def __init__(self, v: GroupRingElement):
        self.powers = [GroupRingElement.one(v.group), v]

    def __getitem__(self, i: int) -> GroupRingElement:
        while len(self.powers) <= i:
            self.powers.append(self.powers[-1] * self.powers[1])
        return self.powers[i]


def partial_augmentations(x: GroupRingElement, classes=None) -> list[int]:
    """Sum of coefficients of ``x`` over each conjugacy class, in class order."""
    G = x.group
    if classes is None:
        out = [0] * len(G.classes)
        for g, c in x.coeffs.items():
            out[int(G.class_of[g])] += c
        return out
    return [sum(x[g] for g in cl.members) for cl in classes]


def subgroup_classes(H: Subgroup) -> tuple[list[np.ndarray], np.ndarray]:
    """Classes of ``H`` under its own conjugation and an element -> class map (``-1`` outside)."""
    cls = orbits_under(H, H)
    class_of = np.full(H.group.order, -1, dtype=np.int64)
    for k, c in enumerate(cls):
        class_of[c] = k
    return cls, class_of


def partial_augmentations_in(x: GroupRingElement, H: Subgroup) -> list[int]:
    """Partial augmentations at the ``H``-classes of an element supported on ``H``."""
    cls, class_of = subgroup_classes(H)
    out = [0] * len(cls)
    for g, c in x.coeffs.items():
        k = int(class_of[g])
        if k < 0:
            raise ValueError("element is not supported on the subgroup")
        out[k] += c
    return out


# ---------------------------------------------------------------------------
# the embedding ZG -> M_k(ZN)


def default_transversal(N: Subgroup) -> list[int]:
    """Minimal element of each coset of ``N``, cosets ordered by that minimum."""
    G = N.group
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for g in range(G.order):
        if not seen[g]:
            out.append(g)
            seen[G.table[N.members, g]] = True
    return out


def check_transversal(N: Subgroup, transversal: Sequence[int]) -> None:
    G = N.group
    if len(transversal) * N.order != G.order:
        raise InvalidTransversal(f"expected {G.order // N.order} coset representatives")
    hit = np.zeros(G.order, dtype=bool)
    for t in transversal:
        coset = G.table[N.members, int(t)]
        if hit[coset].any():
            raise InvalidTransversal("two representatives lie in the same coset")
        hit[coset] = True


@dataclass
class GroupRingMatrix:
    """``k x k`` matrix over ``ZN``, with the transversal used to build it."""

    N: Subgroup
    transversal: tuple[int, ...]
    entries: list[list[GroupRingElement]]

    @property
    def k(self) -> int:
        return len(self.transversal)

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        G = self.N.group
        k = self.k
        out = [[GroupRingElement(G) for _ in range(k)] for _ in range(k)]
        for i in range(k):
            for j in range(k):
                acc = GroupRingElement(G)
                for t in range(k):
                    if self.entries[i][t] and other.entries[t][j]:
                        acc = acc + self.entries[i][t] * other.entries[t][j]
                out[i][j] = acc
        return GroupRingMatrix(self.N, self.transversal, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingMatrix) and self.entries == other.entries

    def trace(self) -> GroupRingElement:
        acc = GroupRingElement(self.N.group)
        for i in range(self.k):
            acc = acc + self.entries[i][i]
        return acc


def phi_embed(x: GroupRingElement, N: Subgroup, transversal: Sequence[int] | None = None) -> GroupRingMatrix:
    """``Phi(x)_{ij} = sum_n x_{t_i^-1 n t_j} n``."""
    G = x.group
    if not N.is_normal():
        raise NotNormal("N is not normal in G")
    if transversal is None:
        transversal = default_transversal(N)
    check_transversal(N, transversal)
    k = len(transversal)
    # coset position and N-component: g = t_i^-1 n t_j  <=>  n = t_i g t_j^-1
    entries = [[{} for _ in range(k)] for _ in range(k)]
    coset_of = np.empty(G.order, dtype=np.int64)
    for j, t in enumerate(transversal):
        coset_of[G.table[N.members, int(t)]] = j
    for g, c in x.coeffs.items():
        for i, ti in enumerate(transversal):
            h = G.mul(int(ti), g)  # h = t_i g lies in N t_j
            j = int(coset_of[h])
            n = G.mul(h, G.inv(int(transversal[j])))
            entries[i][j][n] = entries[i][j].get(n, 0) + c
    return GroupRingMatrix(N, tuple(int(t) for t in transversal),
                           [[GroupRingElement(G, e) for e in row] for row in entries])


@dataclass(frozen=True)
class TraceCheck:
    holds: bool
    witness: tuple[int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def trace_formula_check(x: GroupRingElement, N: Subgroup,
                        transversal: Sequence[int] | None = None) -> TraceCheck:
    """Compare the partial augmentations of ``tr Phi(x)`` at ``N``-classes with those of ``x``.

    For every ``n`` in ``N``: ``PA_{n^N}(tr Phi(x)) = [C_G(n):C_N(n)] PA_{n^G}(x)``.
    Returns the first failing ``(n, lhs, rhs)`` as witness.
    """
    G = x.group
    tr = phi_embed(x, N, transversal).trace()
    ncls, _ = subgroup_classes(N)
    lhs_all = partial_augmentations_in(tr, N)
    pa = partial_augmentations(x)
    for c, lhs in zip(ncls, lhs_all):
        n = int(c[0])
        cg = G.centralizer_order(n)
        cn = N.order // c.size
        rhs = (cg // cn) * pa[int(G.class_of[n])]
        if lhs != rhs:
            return TraceCheck(False, (n, lhs, rhs))
    return TraceCheck(True)


# ---------------------------------------------------------------------------
# double action and induced characters


def double_action_value(v: GroupRingElement, m: int, i: int, g: int,
                        powers: PowerCache | None = None) -> int:
    """Character of ``x -> v^i x g^-1`` on ``ZG`` at ``(u^i, g)``.

    Equals ``|C_G(g)| PA_{g^G}(v^i)``; also recomputed as the trace of that
    map on the basis ``G`` and the two are compared.
    """
    G = v.group
    if not 0 <= i < m:
        raise ValueError("exponent must satisfy 0 <= i < m")
    vi = (powers or PowerCache(v))[i]
    cls = G.classes[int(G.class_of[g])]
    value = cls.centralizer_order * sum(vi[y] for y in cls.members)
    # trace: coefficient of h in v^i h g^-1 is sum_y vi_y [y = h g h^-1]
    conj = G.table[G.table[np.arange(G.order), g], G.inverse]
    trace = sum(vi[int(y)] for y in conj)
    if trace != value:
        raise MismatchError(f"double action value {value} != trace {trace}")
    return value


def induced_perm_character_value(m: int, g: int, at: tuple[int, int], group: FiniteGroup) -> int:
    """Value of ``ind_{<(u,g)>}^{U x G}(1)`` at ``(u^i, h)`` by counting fixed cosets.

    ``<(u,g)>`` has order ``L = lcm(m, |g|)`` and consists of the pairs
    ``(u^j, g^j)``; the pair ``(u^i, h)`` fixes ``m * #{b : b^-1 h b = g^j,
    j = i mod m}`` cosets out of ``m |G| / L``, each counted ``L`` times.
    """
    G = group
    i, h = at
    L = math.lcm(m, G.order_of(g))
    targets = np.zeros(G.order, dtype=bool)
    for j in range(i % m, L, m):
        targets[G.power(g, j)] = True
    conj = G.conjugates(h)
    hits = int(np.count_nonzero(targets[conj]))
    value = Fraction(m * hits, L)
    assert value.denominator == 1
    return int(value)


def ramanujan_sum(d: int, j: int) -> int:
    """Sum of ``zeta^(t j)`` over primitive ``d``-th roots ``zeta^t``."""
    g = math.gcd(j, d)
    q = d // g
    return int(mobius(q)) * int(totient(d)) // int(totient(q))


class ClassFunction:
    """Rational class function on ``U x H``: a table over ``(i mod m, H-class)``.

    ``class_of`` maps each element index of the ambient group to its column
    (``-1`` for elements outside ``H``).
    """

    def __init__(self, m: int, values, class_of: np.ndarray, name: str = ""):
        self.m = int(m)
        self.values = [[Fraction(v) for v in row] for row in values]
        self.class_of = np.asarray(class_of)
        self.name = name
        if len(self.values) != self.m:
            raise ValueError(f"class function needs {self.m} rows, got {len(self.values)}")

    def __call__(self, i: int, y: int) -> Fraction:
        col = int(self.class_of[y])
        if col < 0:
            raise ValueError("element outside the domain of the class function")
        return self.values[i % self.m][col]

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        if self.m != other.m or not np.array_equal(self.class_of, other.class_of):
            raise ValueError("class functions live on different domains")
        vals = [[a * b for a, b in zip(r, s)] for r, s in zip(self.values, other.values)]
        return ClassFunction(self.m, vals, self.class_of, f"{self.name}*{other.name}")

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        if self.m != other.m or not np.array_equal(self.class_of, other.class_of):
            raise ValueError("class functions live on different domains")
        vals = [[a + b for a, b in zip(r, s)] for r, s in zip(self.values, other.values)]
        return ClassFunction(self.m, vals, self.class_of, f"{self.name}+{other.name}")

    @property
    def ncols(self) -> int:
        return len(self.values[0]) if self.values else 0

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.values for v in row)

    def to_json(self) -> dict:
        return {"m": self.m, "values": [[str(v) for v in row] for row in self.values]}

    # -- constructors over U x G, columns = G.classes -----------------------

    @classmethod
    def trivial(cls, m: int, G: FiniteGroup) -> "ClassFunction":
        return cls(m, [[1] * len(G.classes) for _ in range(m)], G.class_of, "trivial")

    @classmethod
    def regular(cls, m: int, G: FiniteGroup) -> "ClassFunction":
        vals = [[0] * len(G.classes) for _ in range(m)]
        vals[0][0] = m * G.order
        return cls(m, vals, G.class_of, "regular")

    @classmethod
    def induced(cls, m: int, g: int, G: FiniteGroup) -> "ClassFunction":
        vals = [[induced_perm_character_value(m, g, (i, c.rep), G) for c in G.classes]
                for i in range(m)]
        return cls(m, vals, G.class_of, f"ind[{g}]")

    @classmethod
    def galois_u(cls, m: int, d: int, G: FiniteGroup) -> "ClassFunction":
        """Sum of the linear characters of ``U`` of exact order ``d``, trivial on ``G``."""
        if m % d:
            raise ValueError("d must divide m")
        vals = [[ramanujan_sum(d, i)] * len(G.classes) for i in range(m)]
        return cls(m, vals, G.class_of, f"gal{d}")

    @classmethod
    def permutation(cls, m: int, G: FiniteGroup) -> "ClassFunction":
        """Natural permutation character of ``G`` (fixed points), trivial on ``U``."""
        fixed = [int(np.count_nonzero(G.elements[c.rep] == np.arange(G.degree))) for c in G.classes]
        return cls(m, [list(fixed) for _ in range(m)], G.class_of, "perm")

    @classmethod
    def from_json(cls, data: Mapping, G: FiniteGroup) -> "ClassFunction":
        m = int(data["m"])
        vals = [[Fraction(str(v)) for v in row] for row in data["values"]]
        if any(len(r) != len(G.classes) for r in vals):
            raise ValueError(f"each row needs one value per class ({len(G.classes)})")
        return cls(m, vals, G.class_of, data.get("name", "user"))


def a_coefficient(m: int, n: int, psi: ClassFunction, group: FiniteGroup) -> Fraction:
    """``(1/m) sum_i psi(u^i, n^i)``: the multiplicity of the trivial character in ``psi`` on ``<(u, n)>``."""
    total = Fraction(0)
    y = 0
    for i in range(m):
        total += psi(i, y)
        y = int(group.table[y, n])
    value = total / m
    if value.denominator != 1 or value < 0:
        warnings.warn(f"a-coefficient {value} is not a non-negative integer; "
                      "the class function is not a character", NonIntegralWarning, stacklevel=2)
    return value
