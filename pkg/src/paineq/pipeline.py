"""Per-order solving and result aggregation shared by the command line tools."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .certify import NONE, CertifyReport, certify_sehgal, certify_zc, splits, subgroup_label
from .constraints import (BuildOptions, ConstraintSystem, bound_rows, build_system, finalize_rows,
                          global_inequality_row, variable_classes)
from .errors import DegenerateRow
from .feasibility import (CANDIDATES_FOUND, SEHGAL_POSITIVE, UNBOUNDED_RELAXATION, Verdict,
                          enumerate_integer_solutions, verdict)
from .groupring import ClassFunction
from .groups import FiniteGroup, Subgroup

CSV_HEADER = ("group", "normal", "order", "variables", "rows", "verdict", "certificate")


def combine_tags(tags: Sequence[str]) -> str:
    """Worst verdict wins: candidates over an unbounded relaxation over positive."""
    if CANDIDATES_FOUND in tags:
        return CANDIDATES_FOUND
    if UNBOUNDED_RELAXATION in tags:
        return UNBOUNDED_RELAXATION
    return SEHGAL_POSITIVE


@dataclass
class CandidateResult:
    system: ConstraintSystem
    verdict: Verdict

    def to_json(self) -> dict:
        G = self.system.candidate.G
        out = self.system.to_json()
        out["anchor"] = list(G.perm(self.system.candidate.anchor))
        out.update(self.verdict.to_json())
        return out


@dataclass
class OrderResult:
    order: int
    candidates: list[CandidateResult] = field(default_factory=list)

    @property
    def tag(self) -> str:
        return combine_tags([c.verdict.tag for c in self.candidates])

    @property
    def nvars(self) -> int:
        return sum(c.system.nvars for c in self.candidates)

    @property
    def nrows(self) -> int:
        return sum(len(c.system.rows) for c in self.candidates)

    def to_json(self) -> dict:
        return {"order": self.order, "verdict": self.tag, "variables": self.nvars, "rows": self.nrows,
                "candidates": [c.to_json() for c in self.candidates]}


def default_orders(N: Subgroup) -> list[int]:
    return sorted({int(o) for o in N.group.element_orders[N.members]})


def split_bound_rows(cand) -> list:
    """Bound rows for every split of ``N`` into an abelian Hall factor and a mostly cyclic rest."""
    rows = []
    for split in splits(cand.N):
        rows.extend(bound_rows(cand, split))
    return rows


def order_systems(G: FiniteGroup, N: Subgroup, m: int, extra: Sequence[ClassFunction] = (),
                  options: BuildOptions = BuildOptions(), with_bounds: bool = True) -> list[ConstraintSystem]:
    """One system per local class of order ``m``: cocyclic rows, split bounds and user characters."""
    out = []
    for cand in variable_classes(G, N, m):
        rows = list(build_system(cand, options).rows)
        if with_bounds:
            rows.extend(split_bound_rows(cand))
        for psi in extra:
            if psi.m != m:
                continue
            try:
                rows.append(global_inequality_row(cand, psi))
            except DegenerateRow:
                continue
        out.append(ConstraintSystem(cand, finalize_rows(rows)))
    return out


def solve_order(G: FiniteGroup, N: Subgroup, m: int, extra: Sequence[ClassFunction] = (),
                options: BuildOptions = BuildOptions(), with_bounds: bool = True) -> OrderResult:
    res = OrderResult(m)
    for system in order_systems(G, N, m, extra, options, with_bounds):
        res.candidates.append(CandidateResult(system, verdict(enumerate_integer_solutions(system))))
    return res


def solve(G: FiniteGroup, N: Subgroup, orders: Sequence[int] | None = None,
          extra: Sequence[ClassFunction] = (), options: BuildOptions = BuildOptions()) -> list[OrderResult]:
    orders = default_orders(N) if not orders else sorted(set(orders))
    return [solve_order(G, N, m, extra, options) for m in orders]


@dataclass
class InstanceReport:
    group: str
    normal: str
    zc: CertifyReport
    sehgal: CertifyReport
    orders: list[OrderResult]

    @property
    def certificate(self) -> str:
        """The rule shown in tables: a Zassenhaus rule for ``G`` if any, else one for ``(G, N)``."""
        return self.zc.rule if self.zc.rule != NONE else self.sehgal.rule

    @property
    def tag(self) -> str:
        return combine_tags([o.tag for o in self.orders])

    def csv_rows(self, per_order: bool = True) -> list[tuple]:
        if per_order:
            return [(self.group, self.normal, o.order, o.nvars, o.nrows, o.tag, self.certificate)
                    for o in self.orders]
        return [(self.group, self.normal, "all", sum(o.nvars for o in self.orders),
                 sum(o.nrows for o in self.orders), self.tag, self.certificate)]

    def to_json(self) -> dict:
        return {"group": self.group, "normal": self.normal, "verdict": self.tag,
                "certificate": self.certificate, "zassenhaus": self.zc.to_json(),
                "sehgal": self.sehgal.to_json(), "orders": [o.to_json() for o in self.orders]}


def run_instance(G: FiniteGroup, N: Subgroup, orders: Sequence[int] | None = None,
                 extra: Sequence[ClassFunction] = ()) -> InstanceReport:
    return InstanceReport(G.name or f"G{G.order}", subgroup_label(N), certify_zc(G), certify_sehgal(G, N),
                          solve(G, N, orders, extra))


def csv_text(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def all_csv_rows(reports: Sequence[InstanceReport], per_order: bool = True) -> list[tuple]:
    return list(itertools.chain.from_iterable(r.csv_rows(per_order) for r in reports))
