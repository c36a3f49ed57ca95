"""Command line front end.

Exit status: 0 when every instance is settled positively, 2 when some
order leaves candidates (or an unbounded relaxation), 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .abelian import INFINITY, AbelianShape, alpha_A, enumerate_cocyclic, m_values, n_values
from .builders import build, parse_shorthand
from .certify import certify_sehgal, certify_zc, subgroup_label
from .constraints import validate_normal_nilpotent
from .errors import PaineqError, ParseError
from .feasibility import SEHGAL_POSITIVE
from .groupring import ClassFunction
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, Subgroup, fitting_subgroup, local_classes
from .pipeline import csv_text, default_orders, order_systems, run_instance

EXIT_POSITIVE = 0
EXIT_ERROR = 1
EXIT_CANDIDATES = 2


# ---------------------------------------------------------------------------
# loading


def load_group_spec(text: str, order_cap: int = DEFAULT_ORDER_CAP) -> tuple[FiniteGroup, list | None]:
    """A builder shorthand, a JSON file path or inline JSON; returns the group and any normal generators."""
    path = Path(text)
    if text.lstrip().startswith("{"):
        data = _json_or_fail(text, "group spec")
    elif path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise ParseError(f"group spec file {text!r} not found")
        data = _json_or_fail(path.read_text(), str(path))
    else:
        return build(parse_shorthand(text), order_cap), None
    normal = data.get("normal_subgroup")
    if "builder" in data:
        return build(data, order_cap), normal
    if "degree" in data and "generators" in data:
        G = FiniteGroup(int(data["degree"]), data["generators"], order_cap=order_cap, name=data.get("name", ""))
        return G, normal
    raise ParseError("group spec needs either 'builder' or 'degree' and 'generators'")


def _json_or_fail(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: invalid JSON ({exc.msg})") from None


def resolve_normal(G: FiniteGroup, spec: str | None, embedded: list | None = None) -> Subgroup:
    """``fitting`` (default), ``whole``, a registered name, or a JSON generator list / file."""
    if spec is None:
        N = G.subgroup(embedded) if embedded is not None else fitting_subgroup(G)
    elif spec == "fitting":
        N = fitting_subgroup(G)
    elif spec == "whole":
        N = G.whole
    elif spec in G.named_subgroups:
        N = G.subgroup(G.named_subgroups[spec])
    else:
        path = Path(spec)
        raw = path.read_text() if path.is_file() else spec
        gens = _json_or_fail(raw, "normal subgroup")
        if isinstance(gens, dict):
            gens = gens.get("normal_subgroup", gens.get("generators"))
        if not isinstance(gens, list):
            raise ParseError(f"unknown normal subgroup {spec!r}")
        N = G.subgroup(gens)
    validate_normal_nilpotent(N)
    return N


def parse_orders(values: Sequence[str] | None) -> list[int] | None:
    if not values:
        return None
    try:
        return sorted({int(t) for v in values for t in v.split(",") if t.strip()})
    except ValueError:
        raise ParseError(f"orders must be integers, got {values!r}") from None


def load_characters(path: str | None, G: FiniteGroup) -> list[ClassFunction]:
    if not path:
        return []
    data = _json_or_fail(Path(path).read_text(), path)
    if isinstance(data, dict):
        data = [data]
    return [ClassFunction.from_json(d, G) for d in data]


# ---------------------------------------------------------------------------
# commands


def cmd_classes(args) -> tuple[dict, list, int]:
    G, embedded = load_group_spec(args.group, args.order_cap)
    out = {"group": G.name, "order": G.order,
           "classes": [{"rep_perm": list(G.perm(c.rep)), "size": c.size,
                        "centralizer_order": c.centralizer_order, "element_order": c.element_order}
                       for c in G.classes]}
    if args.normal is not None or embedded is not None:
        N = resolve_normal(G, args.normal, embedded)
        out["normal"] = subgroup_label(N)
        out["local_classes"] = [list(lc.member_classes) for lc in local_classes(G, N)]
    return out, [], EXIT_POSITIVE


def _num(x) -> str:
    return "inf" if x == INFINITY else str(Fraction(x))


def lattice_report(shape: AbelianShape) -> dict:
    mv = m_values(shape)
    nv = n_values(shape)
    return {"abelian": shape.name, "order": shape.order,
            "cocyclic": [{"index": K.index, "order": K.order, "alpha": K.alpha} for K in enumerate_cocyclic(shape)],
            "m_plus": mv.m_plus, "m_minus": mv.m_minus, "m_A": mv.m_A, "alpha_A": alpha_A(shape),
            "n_minus": _num(nv.n_minus), "n_A": _num(nv.n_A)}


def cmd_lattice(args) -> tuple[dict, list, int]:
    if not args.abelian:
        raise ParseError("lattice needs --abelian")
    return lattice_report(AbelianShape.parse(args.abelian)), [], EXIT_POSITIVE


def cmd_inequalities(args) -> tuple[dict, list, int]:
    G, embedded = load_group_spec(args.group, args.order_cap)
    N = resolve_normal(G, args.normal, embedded)
    extra = load_characters(args.extra_characters, G)
    systems = []
    for m in parse_orders(args.order) or default_orders(N):
        for system in order_systems(G, N, m, extra):
            entry = system.to_json()
            entry["anchor"] = list(G.perm(system.candidate.anchor))
            systems.append(entry)
    return {"group": G.name, "normal": subgroup_label(N), "systems": systems}, [], EXIT_POSITIVE


def cmd_solve(args) -> tuple[dict, list, int]:
    G, embedded = load_group_spec(args.group, args.order_cap)
    N = resolve_normal(G, args.normal, embedded)
    rep = run_instance(G, N, parse_orders(args.order), load_characters(args.extra_characters, G))
    code = EXIT_POSITIVE if rep.tag == SEHGAL_POSITIVE else EXIT_CANDIDATES
    return rep.to_json(), rep.csv_rows(), code


def cmd_certify(args) -> tuple[dict, list, int]:
    G, embedded = load_group_spec(args.group, args.order_cap)
    N = resolve_normal(G, args.normal, embedded)
    zc = certify_zc(G)
    sehgal = certify_sehgal(G, N)
    certs = sehgal.certificates + zc.certificates
    out = {"group": G.name, "normal": subgroup_label(N),
           "certificates": [c.to_json() for c in certs],
           "sehgal": sehgal.to_json(), "zassenhaus": zc.to_json()}
    if certs:
        out["verdict"] = SEHGAL_POSITIVE
        rule = certs[0].rule
        rows = [(G.name, out["normal"], "all", "", "", SEHGAL_POSITIVE, rule)]
        return out, rows, EXIT_POSITIVE
    rep = run_instance(G, N, parse_orders(args.order), load_characters(args.extra_characters, G))
    out["verdict"] = rep.tag
    out["orders"] = [o.to_json() for o in rep.orders]
    code = EXIT_POSITIVE if rep.tag == SEHGAL_POSITIVE else EXIT_CANDIDATES
    return out, rep.csv_rows(), code


def family_specs(family: str, span: str) -> list[str]:
    """Builder shorthands for a family: an integer range ``a-b`` or ``|``-separated parameter lists."""
    if family in ("cyclic", "dihedral", "symmetric", "alternating"):
        lo, _, hi = span.partition("-")
        try:
            lo_i, hi_i = int(lo), int(hi or lo)
        except ValueError:
            raise ParseError(f"range must look like 1-50, got {span!r}") from None
        return [f"{family}:{n}" for n in range(lo_i, hi_i + 1)]
    if family in ("abelian", "gen_dihedral", "semidirect_abelian"):
        return [f"{family}:{part.strip()}" for part in span.split("|") if part.strip()]
    raise ParseError(f"unknown search family {family!r}")


def _search_job(job: tuple) -> dict:
    spec, normal, orders, order_cap = job
    G, embedded = load_group_spec(spec, order_cap)
    N = resolve_normal(G, normal, embedded)
    rep = run_instance(G, N, orders)
    return {"spec": spec, "report": rep.to_json(), "csv": rep.csv_rows(per_order=False)}


def cmd_search(args) -> tuple[dict, list, int]:
    specs = list(args.group or [])
    if args.family:
        specs += family_specs(args.family, args.range or "1-1")
    if not specs and not args.family:
        raise ParseError("search needs --family/--range or at least one --group")
    jobs = [(s, args.normal, parse_orders(args.order), args.order_cap) for s in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_search_job, jobs))
    else:
        results = [_search_job(j) for j in jobs]
    rows = [tuple(r) for res in results for r in res["csv"]]
    positive = all(res["report"]["verdict"] == SEHGAL_POSITIVE for res in results)
    out = {"instances": [res["report"] for res in results]}
    return out, rows, EXIT_POSITIVE if positive else EXIT_CANDIDATES


COMMANDS = {"classes": cmd_classes, "lattice": cmd_lattice, "inequalities": cmd_inequalities,
            "solve": cmd_solve, "certify": cmd_certify, "search": cmd_search}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paineq",
                                 description="Partial augmentation constraints for torsion units of integral group rings.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--group", action="append",
                    help="builder shorthand (dihedral:12, gen_dihedral:3,3, ...), JSON file, or inline JSON")
    ap.add_argument("--normal", help="fitting (default), whole, a registered name, or JSON generators")
    ap.add_argument("--order", action="append", help="unit orders, comma separated (default: all orders in N)")
    ap.add_argument("--extra-characters", help="JSON file of class functions on U x G")
    ap.add_argument("--abelian", help="invariants for `lattice`, e.g. 3,3 or 2^2,3")
    ap.add_argument("--family", help="builder family for `search`")
    ap.add_argument("--range", help="parameters for `search`: 1-50, or 3,3|5,5 for list families")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for `search`")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    return ap


def render(payload: dict, rows: list, fmt: str) -> str:
    if fmt == "csv":
        return csv_text(rows)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(args: argparse.Namespace) -> tuple[str, int]:
    """Dispatch parsed arguments; return the rendered report and the exit code."""
    if args.jobs < 1:
        return render({"errors": ["--jobs must be at least 1"]}, [], "json"), EXIT_ERROR
    if args.command != "search":
        if args.command != "lattice" and not args.group:
            return render({"errors": ["--group is required"]}, [], "json"), EXIT_ERROR
        args.group = args.group[-1] if args.group else None
    try:
        payload, rows, code = COMMANDS[args.command](args)
    except (PaineqError, OSError, ValueError, KeyError) as exc:
        return render({"errors": [f"{type(exc).__name__}: {exc}"]}, [], "json"), EXIT_ERROR
    return render(payload, rows, args.format), code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    text, code = run(args)
    if args.out and code != EXIT_ERROR:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
