"""Permutation representations of standard group families.

Each builder returns a :class:`FiniteGroup` with ``name`` set and some
subgroups registered in ``named_subgroups`` (as generator permutations), so
that command-line users can say ``--normal cyclic-part`` instead of listing
generators.
"""

from __future__ import annotations

import itertools
import math
from typing import Mapping, Sequence

import numpy as np

from .errors import ParseError
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, check_permutation, cycles_to_perm


def _blocks(orders: Sequence[int]) -> list[list[int]]:
    out, start = [], 0
    for n in orders:
        out.append(list(range(start, start + n)))
        start += n
    return out


def _block_perm(degree: int, blocks, maps) -> tuple[int, ...]:
    """Permutation acting on each block ``b`` by ``x -> maps[k](x)`` on local coordinates."""
    img = list(range(degree))
    for blk, f in zip(blocks, maps):
        n = len(blk)
        for x, pt in enumerate(blk):
            img[pt] = blk[f(x) % n]
    return tuple(img)


def cyclic(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParseError("cyclic group order must be positive")
    gens = [tuple((i + 1) % n for i in range(n))] if n > 1 else []
    G = FiniteGroup(n, gens, order_cap=order_cap, name=f"C{n}")
    G.named_subgroups["whole"] = list(gens)
    return G


def abelian(orders: Sequence[int], order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    orders = [int(n) for n in orders if int(n) > 1]
    degree = sum(orders)
    blocks = _blocks(orders)
    gens = [cycles_to_perm(degree, [b]) for b in blocks]
    name = "x".join(f"C{n}" for n in orders) or "C1"
    G = FiniteGroup(degree, gens, order_cap=order_cap, name=name)
    G.named_subgroups["abelian-part"] = list(gens)
    return G


def dihedral(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Dihedral group of order ``2n``; rotations form the ``cyclic-part``."""
    if n < 1:
        raise ParseError("dihedral parameter must be positive")
    if n == 1:
        G = FiniteGroup(2, [(1, 0)], order_cap=order_cap, name="D2")
        G.named_subgroups["cyclic-part"] = []
        return G
    if n == 2:
        r, s = (1, 0, 3, 2), (2, 3, 0, 1)
        G = FiniteGroup(4, [r, s], order_cap=order_cap, name="D4")
        G.named_subgroups["cyclic-part"] = [r]
        return G
    r = tuple((i + 1) % n for i in range(n))
    s = tuple((-i) % n for i in range(n))
    G = FiniteGroup(n, [r, s], order_cap=order_cap, name=f"D{2 * n}")
    G.named_subgroups["cyclic-part"] = [r]
    return G


def symmetric(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    gens = []
    if n >= 2:
        gens.append(cycles_to_perm(n, [[0, 1]]))
    if n >= 3:
        gens.append(cycles_to_perm(n, [list(range(n))]))
    G = FiniteGroup(max(n, 1), gens, order_cap=order_cap, name=f"S{n}")
    if n >= 3:
        G.named_subgroups["alternating"] = [cycles_to_perm(n, [[0, 1, k]]) for k in range(2, n)]
    if n == 4:
        G.named_subgroups["V4"] = [cycles_to_perm(4, [[0, 1], [2, 3]]), cycles_to_perm(4, [[0, 2], [1, 3]])]
    return G


def alternating(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    gens = [cycles_to_perm(n, [[0, 1, k]]) for k in range(2, n)]
    G = FiniteGroup(max(n, 1), gens, order_cap=order_cap, name=f"A{n}")
    if n == 4:
        G.named_subgroups["V4"] = [cycles_to_perm(4, [[0, 1], [2, 3]]), cycles_to_perm(4, [[0, 2], [1, 3]])]
    return G


def quaternion(order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``Q8`` in its regular representation; points are ``+-1, +-i, +-j, +-k``."""
    # elements as (sign, unit) with unit in 1, i, j, k; index = 2*unit + (sign < 0)
    mult = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}

    def right_mult(u: int) -> tuple[int, ...]:
        img = [0] * 8
        for a in range(4):
            for neg in (0, 1):
                s, c = mult[(a, u)]
                s = -s if neg else s
                img[2 * a + neg] = 2 * c + (s < 0)
        return tuple(img)

    gens = [right_mult(1), right_mult(2)]
    G = FiniteGroup(8, gens, order_cap=order_cap, name="Q8")
    G.named_subgroups["whole"] = gens
    return G


def sl2_3(order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``SL(2,3)`` acting on the eight non-zero vectors of ``F_3^2``."""
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    index = {v: k for k, v in enumerate(vecs)}

    def act(M) -> tuple[int, ...]:
        return tuple(index[((M[0][0] * x + M[0][1] * y) % 3, (M[1][0] * x + M[1][1] * y) % 3)]
                     for x, y in vecs)

    a = act([[1, 1], [0, 1]])
    b = act([[1, 0], [1, 1]])
    G = FiniteGroup(8, [a, b], order_cap=order_cap, name="SL(2,3)")
    # quaternion subgroup generated by two elements of order 4
    G.named_subgroups["Q8"] = [act([[0, 2], [1, 0]]), act([[1, 1], [1, 2]])]
    return G


def direct_product(factors: Sequence[FiniteGroup], order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    degree = sum(F.degree for F in factors)
    gens = []
    offset = 0
    for F in factors:
        for g in F.generators:
            img = list(range(degree))
            for x, y in enumerate(g):
                img[offset + x] = offset + y
            gens.append(tuple(img))
        offset += F.degree
    name = "x".join(F.name or "?" for F in factors)
    G = FiniteGroup(degree, gens, order_cap=order_cap, name=name)
    return G


def gen_dihedral(orders: Sequence[int], order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``A`` extended by the inversion automorphism, ``A`` given by cyclic factor orders."""
    from .abelian import AbelianShape

    orders = [int(n) for n in orders if int(n) > 1]
    blocks = _blocks(orders)
    base = sum(orders)
    exponent = math.lcm(*orders) if orders else 1
    # an extra transposition keeps the inversion faithful when A has exponent <= 2
    degree = base + (2 if exponent <= 2 else 0)
    trans = [_block_perm(degree, blocks, [lambda x, k=k: x + (1 if k == j else 0) for k in range(len(blocks))])
             for j in range(len(blocks))]
    inv = list(_block_perm(degree, blocks, [lambda x: -x] * len(blocks)))
    if exponent <= 2:
        inv[base], inv[base + 1] = base + 1, base
    shape = AbelianShape.from_invariants(orders)
    G = FiniteGroup(degree, trans + [tuple(inv)], order_cap=order_cap, name=f"Dih({shape.name})")
    G.named_subgroups["abelian-part"] = trans
    if shape.is_cyclic():
        G.named_subgroups["cyclic-part"] = trans
    return G


def semidirect_abelian(orders: Sequence[int], q: int, matrix: Sequence[Sequence[int]] | None = None,
                       power: int | None = None, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """``A x| C_q`` with ``C_q`` acting on ``A = prod C_{n_j}`` by an integer matrix.

    ``A`` acts on itself by translation; the generator ``t`` of ``C_q`` acts by
    ``x -> M x`` on exponent vectors and also cycles ``q`` extra points, which
    keeps the action faithful.  ``power=r`` is shorthand for ``M = r I``;
    the default is inversion.
    """
    from .abelian import AbelianShape

    orders = [int(n) for n in orders if int(n) > 1]
    r = len(orders)
    if matrix is None:
        power = -1 if power is None else power
        matrix = [[power if i == j else 0 for j in range(r)] for i in range(r)]
    M = np.array(matrix, dtype=np.int64).reshape(r, r)
    ords = np.array(orders, dtype=np.int64)
    points = list(itertools.product(*[range(n) for n in orders]))
    index = {p: k for k, p in enumerate(points)}
    size = len(points)

    def image(vec) -> tuple[int, ...]:
        return tuple(int(x) for x in (M @ np.array(vec, dtype=np.int64)) % ords) if r else ()

    # M must respect the relations n_j e_j = 0 and be invertible of order dividing q
    for j in range(r):
        e = [0] * r
        e[j] = orders[j]
        if any(image(e)):
            raise ParseError(f"matrix does not define an endomorphism of A (column {j})")
    img = [index[image(p)] for p in points]
    check_perm = sorted(img) == list(range(size))
    if not check_perm:
        raise ParseError("matrix is not an automorphism of A")
    cur = list(range(size))
    for _ in range(q):
        cur = [img[x] for x in cur]
    if cur != list(range(size)):
        raise ParseError(f"the automorphism does not have order dividing {q}")
    degree = size + q
    trans = []
    for j in range(r):
        e = [0] * r
        e[j] = 1
        perm = list(range(degree))
        for k, p in enumerate(points):
            perm[k] = index[tuple((a + b) % n for a, b, n in zip(p, e, orders))]
        trans.append(tuple(perm))
    t = list(img) + [size + (k + 1) % q for k in range(q)]
    shape = AbelianShape.from_invariants(orders)
    G = FiniteGroup(degree, trans + [check_permutation(t, degree)], order_cap=order_cap,
                    name=f"({shape.name}):C{q}")
    G.named_subgroups["abelian-part"] = trans
    return G


BUILDERS = ("cyclic", "abelian", "dihedral", "symmetric", "alternating", "direct_product",
            "gen_dihedral", "semidirect_abelian", "quaternion", "sl2_3")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ParseError(f"expected a comma separated integer list, got {text!r}") from exc


def parse_shorthand(text: str) -> dict:
    """``"dihedral:12"``, ``"gen_dihedral:3,3"``, ``"semidirect_abelian:5,5,3;q=2;power=-1"``."""
    head, _, rest = text.partition(":")
    head = head.strip()
    if head not in BUILDERS:
        raise ParseError(f"unknown builder {head!r}")
    parts = [p for p in rest.split(";")] if rest else []
    spec: dict = {"builder": head}
    if head in ("cyclic", "dihedral", "symmetric", "alternating"):
        vals = _ints(parts[0]) if parts else []
        if len(vals) != 1:
            raise ParseError(f"{head} needs one integer parameter")
        spec["n"] = vals[0]
    elif head in ("abelian", "gen_dihedral", "semidirect_abelian"):
        spec["abelian"] = _ints(parts[0]) if parts else []
        for opt in parts[1:]:
            key, _, val = opt.partition("=")
            if key.strip() not in ("q", "power"):
                raise ParseError(f"unknown option {key!r}")
            spec[key.strip()] = int(val)
    elif head == "direct_product":
        spec["factors"] = [parse_shorthand(p.replace("/", ":")) for p in parts]
    return spec


def build(spec: Mapping, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Construct a group from a builder spec dictionary."""
    b = spec.get("builder")
    try:
        if b == "cyclic":
            return cyclic(int(spec["n"]), order_cap)
        if b == "abelian":
            return abelian(spec["abelian"], order_cap)
        if b == "dihedral":
            return dihedral(int(spec["n"]), order_cap)
        if b == "symmetric":
            return symmetric(int(spec["n"]), order_cap)
        if b == "alternating":
            return alternating(int(spec["n"]), order_cap)
        if b == "quaternion":
            return quaternion(order_cap)
        if b == "sl2_3":
            return sl2_3(order_cap)
        if b == "direct_product":
            return direct_product([build(f, order_cap) for f in spec["factors"]], order_cap)
        if b == "gen_dihedral":
            return gen_dihedral(spec["abelian"], order_cap)
        if b == "semidirect_abelian":
            return semidirect_abelian(spec["abelian"], int(spec.get("q", 2)), spec.get("matrix"),
                                      spec.get("power"), order_cap)
    except KeyError as exc:
        raise ParseError(f"builder {b!r} is missing parameter {exc}") from None
    raise ParseError(f"unknown builder {b!r}")
