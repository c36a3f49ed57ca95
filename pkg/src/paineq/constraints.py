"""Linear constraints on the partial augmentations of a hypothetical torsion unit.

A :class:`UnitCandidate` fixes a unit order ``m`` and an anchor ``n`` in ``N``
of order ``m``; the unknowns are the partial augmentations ``eps`` at the
G-classes making up the local class of ``n`` (all other partial
augmentations vanish).  Rows are exact integer inequalities/equalities in
those unknowns, each tagged with where it came from.

For a prime ``p`` write ``xh`` for the ``p``-part of the anchor and ``Np'``
for the Hall ``p'``-subgroup of ``N``.  Every ``K`` normal in ``Np'`` with
cyclic quotient and every coset ``aK`` give the row

    sum over Np'-classes c inside aK of [C_G(c xh) : C_N(c xh)] eps(c xh) >= 0,

which for abelian ``Np'`` is proportional to ``sum_{y in aK} |C_G(y xh)| eps(y xh)``.
Besides the primes dividing ``|N|`` one more pass uses a prime coprime to
``|N|``, for which ``xh = 1`` and ``Np' = N``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np
from sympy import nextprime

from .abelian import m_values
from .errors import (DegenerateRow, HypothesisViolated, MismatchError, NonCharacterWarning, NotNilpotent,
                     NotNormal, OrderMismatch)
from .groupring import ClassFunction, a_coefficient, ramanujan_sum, subgroup_classes
from .groups import (FiniteGroup, Subgroup, abelian_shape, centralizer, cyclic_quotient_kernels, hall_subgroup,
                     is_nilpotent, local_classes, noncyclic_sylow_primes, orbits_under, p_parts, pi_part)

GEQ = "GEQ"
EQ = "EQ"


@dataclass(frozen=True)
class UnitCandidate:
    G: FiniteGroup = field(repr=False)
    N: Subgroup = field(repr=False)
    m: int
    anchor: int
    variables: tuple[int, ...]

    @cached_property
    def var_pos(self) -> np.ndarray:
        """G-class index -> variable position, ``-1`` for non-variables."""
        pos = np.full(len(self.G.classes), -1, dtype=np.int64)
        for k, c in enumerate(self.variables):
            pos[c] = k
        return pos

    def var_of(self, y: int) -> int:
        return int(self.var_pos[self.G.class_of[y]])

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def trivial_assignments(self) -> list[tuple[int, ...]]:
        return [tuple(int(j == k) for j in range(self.nvars)) for k in range(self.nvars)]


@dataclass(frozen=True)
class ConstraintRow:
    coeffs: tuple[int, ...]
    rel: str
    rhs: int
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        if self.rel not in (GEQ, EQ):
            raise ValueError(f"relation must be GEQ or EQ, got {self.rel!r}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, eps: Sequence[int]) -> int:
        return sum(c * e for c, e in zip(self.coeffs, eps))

    def satisfied(self, eps: Sequence[int]) -> bool:
        lhs = self.evaluate(eps)
        return lhs == self.rhs if self.rel == EQ else lhs >= self.rhs

    def normalized(self) -> "ConstraintRow":
        g = reduce(math.gcd, self.coeffs, 0)
        if g <= 1:
            return self
        if self.rel == EQ:
            if self.rhs % g:
                # no integer solutions; keep the row unscaled so the solver sees it
                return self
            return ConstraintRow(tuple(c // g for c in self.coeffs), EQ, self.rhs // g, self.provenance)
        return ConstraintRow(tuple(c // g for c in self.coeffs), GEQ, -((-self.rhs) // g), self.provenance)

    @property
    def key(self) -> tuple:
        return (self.coeffs, self.rel, self.rhs)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs], "rel": self.rel, "rhs": str(self.rhs),
                "provenance": self.provenance}


@dataclass
class ConstraintSystem:
    candidate: UnitCandidate
    rows: list[ConstraintRow]

    @property
    def nvars(self) -> int:
        return self.candidate.nvars

    def satisfied(self, eps: Sequence[int]) -> bool:
        return all(r.satisfied(eps) for r in self.rows)

    def keys(self) -> set:
        return {r.key for r in self.rows}

    def to_json(self) -> dict:
        G = self.candidate.G
        variables = [{"rep_perm": list(G.perm(G.classes[c].rep)), "class_size": G.classes[c].size,
                      "centralizer_order": G.classes[c].centralizer_order}
                     for c in self.candidate.variables]
        return {"order": self.candidate.m, "variables": variables, "rows": [r.to_json() for r in self.rows]}


@dataclass(frozen=True)
class BuildOptions:
    extra_prime: bool = True
    force_general: bool = False
    cross_check: bool = True


def finalize_rows(rows: Iterable[ConstraintRow]) -> list[ConstraintRow]:
    """Normalize by gcd, drop all-zero rows, duplicates and dominated rows.

    A GEQ row is dominated by an EQ row with the same coefficients and a
    rhs at least as large, or by a GEQ row with the same coefficients and a
    larger rhs.  Survivors keep first-appearance order and provenance.
    """
    normed = []
    for r in rows:
        # constant rows are kept only when unsatisfiable
        if r.is_zero() and r.satisfied(()):
            continue
        normed.append(r.normalized())
    eq_rhs: dict[tuple, set] = {}
    geq_best: dict[tuple, int] = {}
    for r in normed:
        if r.rel == EQ:
            eq_rhs.setdefault(r.coeffs, set()).add(r.rhs)
        else:
            geq_best[r.coeffs] = max(geq_best.get(r.coeffs, r.rhs), r.rhs)
    out, seen = [], set()
    for r in normed:
        if r.rel == GEQ:
            if r.rhs < geq_best[r.coeffs] or any(s >= r.rhs for s in eq_rhs.get(r.coeffs, ())):
                continue
        if r.key not in seen:
            seen.add(r.key)
            out.append(r)
    return out


def _integer_row(coeffs: Sequence[Fraction], rel: str, rhs, provenance: str) -> ConstraintRow:
    den = math.lcm(*(Fraction(c).denominator for c in list(coeffs) + [Fraction(rhs)]))
    return ConstraintRow(tuple(int(Fraction(c) * den) for c in coeffs), rel, int(Fraction(rhs) * den), provenance)


# ---------------------------------------------------------------------------
# candidates


def validate_normal_nilpotent(N: Subgroup) -> None:
    if not N.is_normal():
        raise NotNormal("N is not normal in G")
    if not is_nilpotent(N):
        raise NotNilpotent("N is not nilpotent")


def variable_classes(G: FiniteGroup, N: Subgroup, m: int) -> list[UnitCandidate]:
    """One candidate per local class of ``N`` consisting of elements of order ``m``."""
    validate_normal_nilpotent(N)
    out = []
    for lc in local_classes(G, N):
        rep = G.classes[lc.member_classes[0]].rep
        if G.order_of(rep) == m:
            out.append(UnitCandidate(G, N, m, rep, tuple(lc.member_classes)))
    return out


# ---------------------------------------------------------------------------
# the cocyclic family


class _Centralizers:
    """Memoized ``|C_G(y)|`` and ``|C_N(y)|``."""

    def __init__(self, G: FiniteGroup, N: Subgroup):
        self.G, self.N = G, N
        self._cn: dict[int, int] = {}

    def cg(self, y: int) -> int:
        return self.G.centralizer_order(y)

    def cn(self, y: int) -> int:
        if y not in self._cn:
            T = self.G.table
            self._cn[y] = int(np.count_nonzero(T[self.N.members, y] == T[y, self.N.members]))
        return self._cn[y]

    def index(self, y: int) -> int:
        return self.cg(y) // self.cn(y)


@dataclass(frozen=True)
class PrimePass:
    p: int
    xhat: int
    hall: Subgroup


def prime_passes(cand: UnitCandidate, extra_prime: bool = True) -> list[PrimePass]:
    G, N = cand.G, cand.N
    out = []
    for p in N.primes:
        xhat = p_parts(G, cand.anchor, p)[0]
        out.append(PrimePass(p, xhat, hall_subgroup(N, [q for q in N.primes if q != p])))
    if extra_prime or not out:
        q = 2
        while N.order % q == 0:
            q = int(nextprime(q))
        out.append(PrimePass(q, 0, N))
    return out


def cosets(H: Subgroup, K: Subgroup) -> list[np.ndarray]:
    """Cosets of ``K`` in ``H`` as sorted index arrays, ordered by minimum."""
    T = H.group.table
    seen = np.zeros(H.group.order, dtype=bool)
    out = []
    for a in H.members.tolist():
        if not seen[a]:
            c = np.sort(T[a, K.members])
            seen[c] = True
            out.append(c)
    return out


def cw_row_abelian(cand: UnitCandidate, xhat: int, coset: np.ndarray, cents: _Centralizers) -> list[int]:
    coeffs = [0] * cand.nvars
    T = cand.G.table
    for y0 in coset.tolist():
        y = int(T[y0, xhat])
        v = cand.var_of(y)
        if v >= 0:
            coeffs[v] += cents.cg(y)
    return coeffs


def cw_row_general(cand: UnitCandidate, xhat: int, coset: np.ndarray, hall_class_of: np.ndarray,
                   cents: _Centralizers) -> list[int]:
    """Sum over the ``Np'``-classes inside the coset of the centralizer index."""
    coeffs = [0] * cand.nvars
    T = cand.G.table
    done = set()
    for y0 in coset.tolist():
        c = int(hall_class_of[y0])
        if c in done:
            continue
        done.add(c)
        y = int(T[y0, xhat])
        v = cand.var_of(y)
        if v >= 0:
            coeffs[v] += cents.index(y)
    return coeffs


def cw_row_orbit(cand: UnitCandidate, xhat: int, coset: np.ndarray, hall: Subgroup) -> list[int]:
    """Same row via ``C_G(xh)``-orbits: each orbit rep ``y`` weighted by
    ``#{g in C_G(xh) : y^g in coset} / |C_N(xh)|``."""
    G = cand.G
    T = G.table
    C = centralizer(G, [xhat])
    cn_x = int(np.count_nonzero(C.mask[cand.N.members]))
    in_coset = np.zeros(G.order, dtype=bool)
    in_coset[coset] = True
    coeffs = [Fraction(0)] * cand.nvars
    for orb in orbits_under(C, hall):
        y0 = int(orb[0])
        v = cand.var_of(int(T[y0, xhat]))
        if v < 0:
            continue
        images = T[T[G.inverse[C.members], y0], C.members]
        coeffs[v] += Fraction(int(np.count_nonzero(in_coset[images])), cn_x)
    if any(c.denominator != 1 for c in coeffs):
        raise MismatchError("orbit-form coefficient is not an integer")
    return [int(c) for c in coeffs]


def cocyclic_rows(cand: UnitCandidate, options: BuildOptions = BuildOptions()) -> list[ConstraintRow]:
    rows = []
    cents = _Centralizers(cand.G, cand.N)
    for pp in prime_passes(cand, options.extra_prime):
        hall = pp.hall
        abelian = hall.is_abelian() and not options.force_general
        _, hall_class_of = subgroup_classes(hall)
        tag = "cw_abelian" if abelian else "cw_general"
        for ki, K in enumerate(cyclic_quotient_kernels(hall)):
            for coset in cosets(hall, K):
                if abelian:
                    coeffs = cw_row_abelian(cand, pp.xhat, coset, cents)
                else:
                    coeffs = cw_row_general(cand, pp.xhat, coset, hall_class_of, cents)
                    if options.cross_check:
                        alt = cw_row_orbit(cand, pp.xhat, coset, hall)
                        if alt != coeffs:
                            raise MismatchError(f"class-sum row {coeffs} != orbit row {alt}")
                rows.append(ConstraintRow(tuple(coeffs), GEQ, 0,
                                          f"{tag}(p={pp.p},K={ki}[index {hall.order // K.order}],"
                                          f"coset={int(coset[0])})"))
    return rows


def augmentation_row(cand: UnitCandidate) -> ConstraintRow:
    return ConstraintRow((1,) * cand.nvars, EQ, 1, "augmentation")


def build_system(cand: UnitCandidate, options: BuildOptions = BuildOptions()) -> ConstraintSystem:
    if cand.nvars == 0 or cand.G.order_of(cand.anchor) != cand.m:
        raise OrderMismatch("anchor order does not match the unit order")
    validate_normal_nilpotent(cand.N)
    rows = [augmentation_row(cand)] + cocyclic_rows(cand, options)
    return ConstraintSystem(cand, finalize_rows(rows))


# ---------------------------------------------------------------------------
# rows from user-supplied class functions


def _check_inner(value: Fraction, where: str) -> None:
    if value < 0 or value.denominator != 1:
        warnings.warn(f"inner product {value} at {where} is not a non-negative integer; "
                      "the class function is not a character", NonCharacterWarning, stacklevel=3)


def hall_class_function_domain(cand: UnitCandidate, p: int) -> tuple[PrimePass, list[np.ndarray], np.ndarray, int]:
    """Pass data for prime ``p``, the ``Np'``-classes, their index map and ``|u_p'|``."""
    passes = {pp.p: pp for pp in prime_passes(cand, extra_prime=True)}
    if p in passes:
        pp = passes[p]
    else:
        if cand.N.order % p == 0:
            raise ValueError(f"no pass for prime {p}")
        pp = PrimePass(p, 0, cand.N)
    cls, class_of = subgroup_classes(pp.hall)
    m_pp = cand.m
    while m_pp % p == 0:
        m_pp //= p
    return pp, cls, class_of, m_pp


def theorem_inequality_row(cand: UnitCandidate, p: int, psi: ClassFunction) -> ConstraintRow:
    """Row from a class function on ``U_p' x Np'`` (columns = ``Np'``-classes)."""
    pp, cls, class_of, m_pp = hall_class_function_domain(cand, p)
    if psi.m != m_pp:
        raise ValueError(f"class function must have {m_pp} rows")
    G = cand.G
    cents = _Centralizers(G, cand.N)
    coeffs = [Fraction(0)] * cand.nvars
    for c in cls:
        n = int(c[0])
        y = G.mul(n, pp.xhat)
        v = cand.var_of(y)
        if v < 0:
            continue
        inner = a_coefficient(m_pp, n, psi, G)
        _check_inner(inner, f"class of {n}")
        coeffs[v] += cents.index(y) * inner
    row = _integer_row(coeffs, GEQ, 0, f"theorem_psi(p={p},{psi.name})")
    if row.is_zero():
        raise DegenerateRow("class function gives an all-zero row")
    return row


def kernel_character(cand: UnitCandidate, p: int, K: Subgroup, n: int) -> ClassFunction:
    """Sum of the linear characters of ``U_p' x Np'`` with kernel ``<1 x K, (u_p', n)>``.

    With ``lam: Np' -> Z/d`` a surjection with kernel ``K``, the pair
    ``(u^i, y)`` maps to ``lam(y) - i lam(n)`` and the Galois orbit sum is a
    Ramanujan sum.
    """
    pp, cls, class_of, m_pp = hall_class_function_domain(cand, p)
    lam, d = cyclic_quotient_map(pp.hall, K)
    if (m_pp * lam[n]) % d:
        raise ValueError("(u_p', n) does not define a character: the image of n has order not dividing |u_p'|")
    vals = [[ramanujan_sum(d, (lam[int(c[0])] - i * lam[n]) % d) for c in cls] for i in range(m_pp)]
    return ClassFunction(m_pp, vals, class_of, f"lin(K={K.order},n={n})")


def cyclic_quotient_map(H: Subgroup, K: Subgroup) -> tuple[dict[int, int], int]:
    """A surjection ``H -> Z/d`` with kernel ``K``, as a value dictionary."""
    G = H.group
    d = H.order // K.order
    for x in H.members.tolist():
        vals, y = {}, 0
        for j in range(d):
            for k in G.table[y, K.members].tolist():
                vals[k] = j
            y = G.mul(y, x)
        if len(vals) == H.order:
            return vals, d
    raise ValueError("quotient is not cyclic")


def trivial_character_hall(cand: UnitCandidate, p: int) -> ClassFunction:
    pp, cls, class_of, m_pp = hall_class_function_domain(cand, p)
    return ClassFunction(m_pp, [[1] * len(cls) for _ in range(m_pp)], class_of, "trivial")


def global_inequality_row(cand: UnitCandidate, psi: ClassFunction) -> ConstraintRow:
    """Row ``sum a(n, psi) eps(n) >= 0`` over the variable classes, ``psi`` on ``U x G``."""
    G = cand.G
    if psi.m != cand.m:
        raise ValueError(f"class function must have {cand.m} rows")
    coeffs = []
    for c in cand.variables:
        a = a_coefficient(cand.m, G.classes[c].rep, psi, G)
        coeffs.append(a)
    row = _integer_row(coeffs, GEQ, 0, f"global_psi({psi.name})")
    if row.is_zero():
        raise DegenerateRow("class function gives an all-zero row")
    return row


# ---------------------------------------------------------------------------
# bounds from the lattice calculus


@dataclass(frozen=True)
class Split:
    pi: tuple[int, ...]
    A: Subgroup
    B: Subgroup


def make_split(N: Subgroup, pi: Iterable[int]) -> Split:
    pi = tuple(sorted(set(pi)))
    A = hall_subgroup(N, pi)
    B = hall_subgroup(N, [q for q in N.primes if q not in pi])
    if not A.is_abelian():
        raise HypothesisViolated("A must be abelian")
    if len(noncyclic_sylow_primes(B)) > 1:
        raise HypothesisViolated("B has more than one non-cyclic Sylow subgroup")
    return Split(pi, A, B)


def split_m_A(split: Split) -> int:
    """``m_A``, taken as ``0`` for trivial ``A`` (nothing to bound)."""
    if split.A.order == 1:
        return 0
    return m_values(abelian_shape(split.A)).m_A


def bound_rows(cand: UnitCandidate, split: Split) -> list[ConstraintRow]:
    G, N = cand.G, cand.N
    A, B = split.A, split.B
    T = G.table
    mA = split_m_A(split)
    order_A = A.order
    Acoset = lambda b: T[A.members, b]  # noqa: E731
    rows = []
    for b in B.members.tolist():
        coeffs = [0] * cand.nvars
        for y in Acoset(b).tolist():
            v = cand.var_of(y)
            if v >= 0:
                coeffs[v] += G.centralizer_order(y)
        rows.append(ConstraintRow(tuple(coeffs), GEQ, 0, f"bound_sumpositive(b={b})"))
    for n in N.members.tolist():
        coeffs = [0] * cand.nvars
        v = cand.var_of(n)
        if v >= 0:
            coeffs[v] += order_A * G.centralizer_order(n)
        if mA:
            npi = pi_part(G, n, [q for q in N.primes if q not in split.pi])
            for y in Acoset(npi).tolist():
                w = cand.var_of(y)
                if w >= 0:
                    coeffs[w] += mA * G.centralizer_order(y)
        rows.append(ConstraintRow(tuple(coeffs), GEQ, 0, f"bound_sumq(n={n})"))
    for k, c in enumerate(cand.variables):
        n = G.classes[c].rep
        npi = pi_part(G, n, [q for q in N.primes if q not in split.pi])
        idx = G.centralizer_order(npi) // G.centralizer_order(n)
        lower = Fraction(-mA * idx, order_A)
        coeffs = tuple(int(j == k) for j in range(cand.nvars))
        rows.append(ConstraintRow(coeffs, GEQ, math.ceil(lower), f"bound_indexplusq(n={n})"))
    return finalize_rows(rows)
