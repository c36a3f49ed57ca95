"""Decision rules that settle an instance without solving.

:func:`certify_sehgal` asks whether every torsion unit of ``V(ZG, N)`` is
rationally conjugate to an element of ``N``; :func:`certify_zc` asks
whether every torsion unit of ``V(ZG)`` is rationally conjugate to an
element of ``G``.  Both return a :class:`CertifyReport` listing every rule
that fired, in canonical order, with witnesses that can be re-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .abelian import INFINITY, n_values
from .errors import HypothesisViolated
from .groups import (FiniteGroup, Subgroup, abelian_shape, is_nilpotent, local_classes, noncyclic_sylow_primes,
                     normal_subgroups, pi_part)
from .constraints import Split, make_split, validate_normal_nilpotent

LOCAL_SEPARATION = "LOCAL_SEPARATION"
AT_MOST_ONE_NONCYCLIC = "AT_MOST_ONE_NONCYCLIC"
MAIN = "MAIN"
ONE_PRIME = "ONE_PRIME"
SIMPLIFIED_BOUND = "SIMPLIFIED_BOUND"
WEISS_NILPOTENT = "WEISS_NILPOTENT"
ZC1 = "ZC1"
ZC2 = "ZC2"
NONE = "NONE"


@dataclass(frozen=True)
class Certificate:
    rule: str
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"rule": self.rule, "witnesses": self.witnesses}


@dataclass
class CertifyReport:
    certificates: list[Certificate]

    @property
    def rule(self) -> str:
        """The first rule that fired, or ``NONE``."""
        return self.certificates[0].rule if self.certificates else NONE

    @property
    def rules(self) -> list[str]:
        return [c.rule for c in self.certificates]

    def __contains__(self, rule: str) -> bool:
        return rule in self.rules

    def find(self, rule: str) -> Certificate | None:
        return next((c for c in self.certificates if c.rule == rule), None)

    def to_json(self) -> dict:
        return {"certificates": [c.to_json() for c in self.certificates], "verdict": self.rule}


def _num(x) -> str:
    return "inf" if x == INFINITY else str(Fraction(x))


def subgroup_label(S: Subgroup) -> str:
    """Invariant factors for abelian ``S``; otherwise a registered name or ``N<order>``."""
    if S.order == 1:
        return "C1"
    if S.is_abelian():
        return abelian_shape(S).name
    G = S.group
    for name, gens in sorted(G.named_subgroups.items()):
        if G.subgroup(gens) == S:
            return name
    return f"N{S.order}"


def local_separation(G: FiniteGroup, N: Subgroup) -> Certificate | None:
    validate_normal_nilpotent(N)
    lcs = local_classes(G, N)
    if all(len(lc.member_classes) == 1 for lc in lcs):
        return Certificate(LOCAL_SEPARATION, {"local_classes": len(lcs)})
    return None


def centralizer_index_max(G: FiniteGroup, N: Subgroup, split: Split) -> tuple[int, int, int]:
    """``max [C_G(b) : C_G(ab)]`` over ``a in A, b in B`` with a maximizing pair.

    Computed twice, over all pairs and over G-class representatives of ``N``
    (the index is invariant under simultaneous conjugation); the two must agree.
    """
    T = G.table
    cg = G.centralizer_order
    best = (0, 0, 0)
    for b in split.B.members.tolist():
        for a in split.A.members.tolist():
            idx = cg(b) // cg(int(T[a, b]))
            if idx > best[0]:
                best = (idx, a, b)
    by_reps = 0
    for c in G.classes:
        if c.rep in N:
            b = pi_part(G, c.rep, split.B.primes)
            by_reps = max(by_reps, cg(b) // c.centralizer_order)
    if by_reps != best[0]:
        raise AssertionError(f"centralizer index scans disagree: {best[0]} vs {by_reps}")
    return best


def splits(N: Subgroup) -> list[Split]:
    out = []
    primes = N.primes
    for r in range(1, len(primes) + 1):
        for pi in itertools.combinations(primes, r):
            try:
                out.append(make_split(N, pi))
            except HypothesisViolated:
                continue
    return out


def _split_rules(G: FiniteGroup, N: Subgroup, split: Split) -> list[Certificate]:
    A = split.A
    shape = abelian_shape(A)
    nA = n_values(shape).n_A
    idx, a, b = centralizer_index_max(G, N, split)
    base = {"pi": list(split.pi), "A": shape.name, "B": subgroup_label(split.B),
            "n_A": _num(nA), "max_index": idx, "a": list(G.perm(a)), "b": list(G.perm(b))}
    out = []
    if idx < nA:
        out.append(Certificate(MAIN, dict(base)))
    if len(split.pi) == 1 and idx < split.pi[0]:
        out.append(Certificate(ONE_PRIME, dict(base, p=split.pi[0])))
    if all(shape.k(p) <= 2 for p in shape.primes):
        bound = Fraction(min(split.pi), len(split.pi))
        if idx < bound:
            out.append(Certificate(SIMPLIFIED_BOUND, dict(base, bound=str(bound))))
    return out


def certify_sehgal(G: FiniteGroup, N: Subgroup) -> CertifyReport:
    """Every rule that shows torsion units of ``V(ZG, N)`` are conjugate into ``N``."""
    validate_normal_nilpotent(N)
    certs = []
    ls = local_separation(G, N)
    if ls is not None:
        certs.append(ls)
    if N.order == G.order:
        certs.append(Certificate(WEISS_NILPOTENT, {"order": G.order}))
    noncyc = noncyclic_sylow_primes(N)
    if len(noncyc) <= 1:
        certs.append(Certificate(AT_MOST_ONE_NONCYCLIC,
                                 {"noncyclic_primes": noncyc, "p_group": len(N.primes) <= 1}))
    for split in splits(N):
        certs.extend(_split_rules(G, N, split))
    return CertifyReport(certs)


def _prime_index(G: FiniteGroup, N: Subgroup) -> int | None:
    q = G.order // N.order
    return q if q > 1 and all(q % d for d in range(2, int(q**0.5) + 1)) else None


def nilpotent_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Normal nilpotent subgroups, largest first."""
    subs = [S for S in normal_subgroups(G) if is_nilpotent(S)]
    return sorted(subs, key=lambda S: (-S.order, S.key))


def certify_zc(G: FiniteGroup) -> CertifyReport:
    """Every rule that proves the Zassenhaus property for ``G``."""
    certs = []
    if is_nilpotent(G.whole):
        certs.append(Certificate(WEISS_NILPOTENT, {"order": G.order}))
    subs = [(S, q) for S in nilpotent_normal_subgroups(G) if (q := _prime_index(G, S))]
    for N, q in subs:
        if len(noncyclic_sylow_primes(N)) <= 1:
            certs.append(Certificate(ZC1, {"N": subgroup_label(N), "N_order": N.order, "index": q}))
            break
    for N, q in subs:
        hits = _zc2_primes(N, q)
        if hits:
            certs.append(Certificate(ZC2, {"N": subgroup_label(N), "N_order": N.order, "index": q,
                                           "p": hits[-1], "primes": hits}))
            break
    return CertifyReport(certs)


def _zc2_primes(N: Subgroup, q: int) -> list[int]:
    """Primes ``p > q`` with an abelian Sylow ``p`` of ``N`` whose complement has one non-cyclic Sylow at most."""
    out = []
    for p in N.primes:
        if p <= q:
            continue
        try:
            make_split(N, [p])
        except HypothesisViolated:
            continue
        out.append(p)
    return out
