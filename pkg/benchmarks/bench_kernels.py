"""Time the numba kernels against their numpy fallbacks on a few groups.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--groups symmetric:5,dihedral:300]

Both paths must agree; the first numba call (compilation) is excluded.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from paineq import _kernels as K
from paineq.builders import build, parse_shorthand


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_group(spec: str, repeat: int) -> list[tuple]:
    G = build(parse_shorthand(spec))
    elems = np.ascontiguousarray(G.elements, dtype=np.int64)
    table = K._np_mul_table(elems)
    inv = K._np_inverses(table)
    gens = np.asarray(G.generators_idx, dtype=np.int64)
    images = np.zeros(len(gens), dtype=np.int64)
    x = int(G.generators_idx[0]) if G.order > 1 else 0
    cases = [
        ("mul_table", lambda: K._np_mul_table(elems), lambda: K._nb_mul_table(elems)),
        ("inverses", lambda: K._np_inverses(table), lambda: K._nb_inverses(table)),
        ("element_orders", lambda: K._np_element_orders(table), lambda: K._nb_element_orders(table)),
        ("class_ids", lambda: K._np_class_ids(table, inv), lambda: K._nb_class_ids(table, inv)),
        ("propagate_hom", lambda: K._np_propagate_hom(table, gens, images, 2),
         lambda: K._nb_propagate_hom(table, gens, images, 2)),
        ("conjugates", lambda: K._np_conjugates(table, inv, x), lambda: K._nb_conjugates(table, inv, x)),
    ]
    rows = []
    for name, np_fn, nb_fn in cases:
        ref = np_fn()
        t_np = best_of(np_fn, repeat)
        if K.HAVE_NUMBA:
            got = nb_fn()  # compiles
            if not np.array_equal(np.asarray(ref), np.asarray(got)):
                raise AssertionError(f"{name} disagrees on {spec}")
            t_nb = best_of(nb_fn, repeat)
        else:
            t_nb = float("nan")
        rows.append((spec, G.order, name, t_np, t_nb))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--groups", default="symmetric:5,dihedral:300,sl2_3,symmetric:6",
                    help="comma separated single-parameter builder shorthands")
    args = ap.parse_args()
    specs = [tok.strip() for tok in args.groups.split(",") if tok.strip()]
    print(f"backend available: {'numba' if K.HAVE_NUMBA else 'numpy only'}")
    print(f"{'group':<16}{'order':>7}  {'kernel':<16}{'numpy s':>11}{'numba s':>11}{'speedup':>9}")
    for spec in specs:
        for g, n, name, t_np, t_nb in bench_group(spec, args.repeat):
            speed = t_np / t_nb if t_nb and t_nb == t_nb else float("nan")
            print(f"{g:<16}{n:>7}  {name:<16}{t_np:>11.5f}{t_nb:>11.5f}{speed:>9.1f}")


if __name__ == "__main__":
    main()
